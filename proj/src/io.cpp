#include "treeshift/io.hpp"

#include <fstream>
#include <sstream>

namespace treeshift {

namespace {

json scalar_to_json(scalar z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

scalar scalar_from_json(const json& j) {
  if (j.is_number()) return scalar(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return scalar(j[0].get<double>(), j[1].get<double>());
  throw invalid_spec("scalar values must be a number or [re, im]");
}

template <typename T, typename ToJson>
json profile_to_json(const two_tailed_profile<T>& p, ToJson&& conv) {
  json j = json::object();
  json prefix = json::array();
  for (const auto& [g, v] : p.prefix) prefix.push_back(json::array({g, conv(v)}));
  j["prefix"] = std::move(prefix);
  json period = json::array();
  for (const auto& v : p.period) period.push_back(conv(v));
  j["period"] = std::move(period);
  json left = json::array();
  for (const auto& v : p.left_period) left.push_back(conv(v));
  j["left_period"] = std::move(left);
  return j;
}

template <typename T, typename FromJson>
two_tailed_profile<T> profile_from_json(const json& j, FromJson&& conv) {
  two_tailed_profile<T> p;
  if (j.contains("prefix")) {
    for (const auto& e : j.at("prefix")) {
      if (!e.is_array() || e.size() != 2)
        throw invalid_spec("profile prefix entries must be [generation, value]");
      p.prefix[e[0].get<long>()] = conv(e[1]);
    }
  }
  if (j.contains("period")) {
    p.period.clear();
    for (const auto& e : j.at("period")) p.period.push_back(conv(e));
  }
  if (j.contains("left_period")) {
    p.left_period.clear();
    for (const auto& e : j.at("left_period")) p.left_period.push_back(conv(e));
  } else if (j.contains("period")) {
    p.left_period = p.period;  // one-sided shorthand: same tail both ways
  }
  return p;
}

/// Spine-collapse without slot validation; full validation happens once the
/// complete spec (including overrides) is assembled.
vertex_address collapse_raw(std::uint32_t up, std::vector<std::uint32_t> down,
                            const tree_spec& t) {
  std::size_t skip = 0;
  while (up > 0 && skip < down.size() && down[skip] == t.spine_slot(up)) {
    ++skip;
    --up;
  }
  down.erase(down.begin(), down.begin() + static_cast<long>(skip));
  return {up, std::move(down)};
}

std::pair<std::uint32_t, std::vector<std::uint32_t>> raw_address_from_json(const json& j) {
  if (!j.is_object() || !j.contains("up") || !j.contains("down"))
    throw invalid_spec("addresses must be {\"up\": k, \"down\": [slots]}");
  std::uint32_t up = j.at("up").get<std::uint32_t>();
  std::vector<std::uint32_t> down;
  for (const auto& e : j.at("down")) down.push_back(e.get<std::uint32_t>());
  return {up, std::move(down)};
}

void write_witness(json& out, const chain_witness& w) {
  json jw = json::object();
  jw["direction"] = w.direction == chain_direction::from_zero ? "from-zero" : "to-zero";
  jw["n"] = w.levels;
  jw["t_or_s"] = w.bound;
  jw["sigma_or_gamma"] = vector_to_json(w.dual);
  json perts = json::array();
  for (const auto& g : w.perturbations) perts.push_back(vector_to_json(g));
  jw["perturbations"] = std::move(perts);
  out.push_back(std::move(jw));
}

chain_witness witness_from_json(const json& j, const tree_spec& t) {
  chain_witness w;
  std::string dir = j.at("direction").get<std::string>();
  if (dir == "from-zero")
    w.direction = chain_direction::from_zero;
  else if (dir == "to-zero")
    w.direction = chain_direction::to_zero;
  else
    throw invalid_spec("witness direction must be from-zero or to-zero");
  w.levels = j.at("n").get<int>();
  w.bound = j.at("t_or_s").get<double>();
  w.dual = vector_from_json(j.at("sigma_or_gamma"), t);
  for (const auto& e : j.at("perturbations")) w.perturbations.push_back(vector_from_json(e, t));
  return w;
}

}  // namespace

json address_to_json(const vertex_address& v) {
  return json{{"up", v.up}, {"down", v.down}};
}

vertex_address address_from_json(const json& j, const tree_spec& t) {
  auto [up, down] = raw_address_from_json(j);
  return canonical_address(up, std::move(down), t);
}

json tree_to_json(const tree_spec& t) {
  json j = json::object();
  j["kind"] = t.kind == tree_kind::rooted ? "rooted" : "unrooted";
  j["arity"] = profile_to_json(t.arity, [](std::uint32_t a) { return json(a); });
  json ovr = json::array();
  for (const auto& [addr, a] : t.arity_overrides)
    ovr.push_back(json::array({address_to_json(addr), a}));
  j["overrides"] = std::move(ovr);
  json spine = json::array();
  for (const auto& [k, slot] : t.spine) spine.push_back(json::array({k, slot}));
  j["spine"] = std::move(spine);
  return j;
}

tree_spec tree_from_json(const json& j) {
  tree_spec t;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "rooted")
    t.kind = tree_kind::rooted;
  else if (kind == "unrooted")
    t.kind = tree_kind::unrooted;
  else
    throw invalid_spec("tree kind must be rooted or unrooted");
  if (j.contains("arity"))
    t.arity = profile_from_json<std::uint32_t>(
        j.at("arity"), [](const json& e) { return e.get<std::uint32_t>(); });
  if (j.contains("spine")) {
    for (const auto& e : j.at("spine")) {
      if (!e.is_array() || e.size() != 2)
        throw invalid_spec("spine entries must be [height, slot]");
      t.spine[e[0].get<std::uint32_t>()] = e[1].get<std::uint32_t>();
    }
  }
  if (j.contains("overrides")) {
    for (const auto& e : j.at("overrides")) {
      if (!e.is_array() || e.size() != 2)
        throw invalid_spec("tree overrides must be [address, arity]");
      auto [up, down] = raw_address_from_json(e[0]);
      t.arity_overrides[collapse_raw(up, std::move(down), t)] = e[1].get<std::uint32_t>();
    }
  }
  t.validate();
  return t;
}

json weights_to_json(const weight_spec& w) {
  json j = json::object();
  j["mode"] = w.mode == weight_mode::constant ? "constant" : "per_generation";
  if (w.mode == weight_mode::constant)
    j["value"] = scalar_to_json(w.value);
  else
    j["profile"] = profile_to_json(w.profile, scalar_to_json);
  json ovr = json::array();
  for (const auto& [addr, c] : w.overrides)
    ovr.push_back(json::array({address_to_json(addr), scalar_to_json(c)}));
  j["overrides"] = std::move(ovr);
  return j;
}

weight_spec weights_from_json(const json& j, const tree_spec& t) {
  weight_spec w;
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "constant") {
    w.mode = weight_mode::constant;
    w.value = scalar_from_json(j.at("value"));
  } else if (mode == "per_generation") {
    w.mode = weight_mode::per_generation;
    w.profile = profile_from_json<scalar>(j.at("profile"), scalar_from_json);
  } else {
    throw invalid_spec("weight mode must be constant or per_generation");
  }
  if (j.contains("overrides")) {
    for (const auto& e : j.at("overrides")) {
      if (!e.is_array() || e.size() != 2)
        throw invalid_spec("weight overrides must be [address, value]");
      w.overrides[address_from_json(e[0], t)] = scalar_from_json(e[1]);
    }
  }
  w.validate(t);
  return w;
}

json vector_to_json(const sparse_vector& f) {
  json j = json::array();
  for (const auto& [v, c] : f.entries())
    j.push_back(json::array({address_to_json(v), c.real(), c.imag()}));
  return j;
}

sparse_vector vector_from_json(const json& j, const tree_spec& t) {
  sparse_vector f;
  if (!j.is_array()) throw invalid_spec("vectors must be arrays of [address, re, im]");
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3)
      throw invalid_spec("vector entries must be [address, re, im]");
    f.add(address_from_json(e[0], t), scalar(e[1].get<double>(), e[2].get<double>()));
  }
  return f;
}

std::string outcome_name(series_outcome o) {
  switch (o) {
    case series_outcome::diverges:
      return "Diverges";
    case series_outcome::converges:
      return "Converges";
    case series_outcome::inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::string recurrence_name(recurrence r) {
  switch (r) {
    case recurrence::chain_recurrent:
      return "ChainRecurrent";
    case recurrence::not_chain_recurrent:
      return "NotChainRecurrent";
    case recurrence::inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::string closed_form_name(closed_form_result r) {
  switch (r) {
    case closed_form_result::chain_recurrent:
      return "ChainRecurrent";
    case closed_form_result::not_chain_recurrent:
      return "NotChainRecurrent";
    case closed_form_result::not_covered:
      return "NotCovered";
  }
  return "NotCovered";
}

json verdict_to_json(const series_verdict& v) {
  return json{{"verdict", outcome_name(v.verdict)},
              {"rule", v.rule},
              {"partial_sums", v.partial_sums},
              {"n_max", v.max_level},
              {"thresholds", json{{"divergence", v.divergence_threshold}}}};
}

json classification_to_json(const classification& c, closed_form_result cf) {
  json j = json::object();
  j["verdict"] = recurrence_name(c.result);
  j["closed_form"] = closed_form_name(cf);
  j["condition_i"] = verdict_to_json(c.condition_i);
  j["condition_ii"] = c.condition_ii ? verdict_to_json(*c.condition_ii) : json(nullptr);
  return j;
}

json chain_to_json(const delta_chain& c) {
  json j = json::object();
  j["delta"] = c.delta;
  j["space"] = space_to_string(c.space);
  json vecs = json::array();
  for (const auto& f : c.vectors) vecs.push_back(vector_to_json(f));
  j["vectors"] = std::move(vecs);
  json wits = json::array();
  for (const auto& w : c.witnesses) write_witness(wits, w);
  j["witnesses"] = std::move(wits);
  return j;
}

delta_chain chain_from_json(const json& j, const tree_spec& t) {
  delta_chain c;
  c.delta = j.at("delta").get<double>();
  c.space = parse_space(j.at("space").get<std::string>());
  for (const auto& e : j.at("vectors")) c.vectors.push_back(vector_from_json(e, t));
  if (j.contains("witnesses"))
    for (const auto& e : j.at("witnesses")) c.witnesses.push_back(witness_from_json(e, t));
  return c;
}

json report_to_json(const chain_report& r) {
  return json{{"valid", r.valid},
              {"step_defects", r.step_defects},
              {"reconstruction_error", r.reconstruction_error},
              {"violations", r.violations}};
}

space_spec parse_space(const std::string& s) {
  if (s == "l1") return space_spec::l1();
  if (s == "c0") return space_spec::c0();
  if (s.rfind("lp:", 0) == 0) {
    try {
      std::size_t used = 0;
      double p = std::stod(s.substr(3), &used);
      if (used != s.size() - 3) throw invalid_spec("trailing characters in space selector");
      return space_spec::lp(p);
    } catch (const std::logic_error&) {
      throw invalid_spec("space selector must be l1, lp:P, or c0");
    }
  }
  throw invalid_spec("space selector must be l1, lp:P, or c0");
}

std::string space_to_string(const space_spec& s) {
  switch (s.kind) {
    case space_kind::l1:
      return "l1";
    case space_kind::c0:
      return "c0";
    case space_kind::lp: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "lp:%.17g", s.p);
      return buf;
    }
  }
  return "l1";
}

vertex_address parse_vertex(const std::string& s, const tree_spec& t) {
  if (s.empty()) return canonical_address(0, {}, t);
  std::uint32_t up = 0;
  std::vector<std::uint32_t> down;
  std::string head = s, tail;
  if (auto colon = s.find(':'); colon != std::string::npos) {
    head = s.substr(0, colon);
    tail = s.substr(colon + 1);
  }
  try {
    std::size_t used = 0;
    up = static_cast<std::uint32_t>(std::stoul(head, &used));
    if (used != head.size()) throw invalid_spec("bad vertex");
    std::stringstream ss(tail);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      used = 0;
      down.push_back(static_cast<std::uint32_t>(std::stoul(part, &used)));
      if (used != part.size()) throw invalid_spec("bad vertex");
    }
  } catch (const std::logic_error&) {
    throw invalid_spec("vertex must be UP or UP:SLOT,SLOT,...");
  }
  return canonical_address(up, std::move(down), t);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_spec("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw invalid_spec("malformed JSON in " + path + ": " + e.what());
  }
}

tree_spec load_tree_file(const std::string& path) {
  try {
    return tree_from_json(load_json_file(path));
  } catch (const json::exception& e) {
    throw invalid_spec("malformed tree spec in " + path + ": " + e.what());
  }
}

weight_spec load_weights_file(const std::string& path, const tree_spec& t) {
  try {
    return weights_from_json(load_json_file(path), t);
  } catch (const json::exception& e) {
    throw invalid_spec("malformed weight spec in " + path + ": " + e.what());
  }
}

}  // namespace treeshift
