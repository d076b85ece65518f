#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "treeshift/io.hpp"

namespace {

using namespace treeshift;

// Exit codes: 0 decided/valid, 1 input error, 2 inconclusive, 3 construction
// infeasible, 4 invalid chain.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInconclusive = 2;
constexpr int kInfeasible = 3;
constexpr int kInvalidChain = 4;

struct run_config {
  std::string tree_path;
  std::string weights_path;
  std::string space_str;
  std::string vertex_str;
  std::string chain_path;
  std::string out_path;
  std::string lambda_grid;
  std::string sweep_format = "csv";
  double delta = 0.0;
  int nmax = 0;
  bool from_zero = false;
  bool to_zero = false;
  bool loop = false;
};

void emit(const run_config& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw invalid_spec("cannot write output file: " + cfg.out_path);
  out << text;
}

truncation_policy make_policy(const run_config& cfg) {
  truncation_policy policy;
  if (cfg.nmax > 0) policy.max_level = cfg.nmax;
  return policy;
}

int cmd_classify(const run_config& cfg) {
  tree_spec tree = load_tree_file(cfg.tree_path);
  weight_spec weights = load_weights_file(cfg.weights_path, tree);
  space_spec space = parse_space(cfg.space_str);
  vertex_address v = parse_vertex(cfg.vertex_str, tree);
  truncation_policy policy = make_policy(cfg);

  classification c = classify(tree, weights, space, v, policy);
  closed_form_result cf = classify_closed_form(tree, weights, space, v);
  emit(cfg, classification_to_json(c, cf).dump(2) + "\n");
  return c.result == recurrence::inconclusive ? kInconclusive : kOk;
}

int cmd_chain(const run_config& cfg) {
  tree_spec tree = load_tree_file(cfg.tree_path);
  weight_spec weights = load_weights_file(cfg.weights_path, tree);
  space_spec space = parse_space(cfg.space_str);
  vertex_address v = parse_vertex(cfg.vertex_str, tree);
  truncation_policy policy = make_policy(cfg);
  if (static_cast<int>(cfg.from_zero) + static_cast<int>(cfg.to_zero) +
          static_cast<int>(cfg.loop) !=
      1)
    throw invalid_spec("pick exactly one of --from-zero, --to-zero, --loop");

  delta_chain chain;
  try {
    if (cfg.from_zero)
      chain = build_chain_from_zero(v, cfg.delta, tree, weights, space, policy);
    else if (cfg.to_zero)
      chain = build_chain_to_zero(v, cfg.delta, tree, weights, space, policy);
    else
      chain = build_loop_chain(v, cfg.delta, tree, weights, space, policy);
  } catch (const criterion_not_met& e) {
    std::cerr << "construction infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const enumeration_cap_exceeded& e) {
    std::cerr << "construction infeasible: " << e.what() << "\n";
    return kInfeasible;
  }
  chain_report rep = verify_chain(chain.vectors, chain.delta, tree, weights, space);
  if (!rep.valid) throw std::logic_error("constructed chain failed verification");
  emit(cfg, chain_to_json(chain).dump(2) + "\n");
  return kOk;
}

int cmd_verify(const run_config& cfg) {
  tree_spec tree = load_tree_file(cfg.tree_path);
  weight_spec weights = load_weights_file(cfg.weights_path, tree);
  delta_chain chain = chain_from_json(load_json_file(cfg.chain_path), tree);
  chain_report rep = verify_chain(chain.vectors, chain.delta, tree, weights, chain.space);
  emit(cfg, report_to_json(rep).dump(2) + "\n");
  return rep.valid ? kOk : kInvalidChain;
}

int cmd_sweep(const run_config& cfg) {
  tree_spec tree = load_tree_file(cfg.tree_path);
  space_spec space = parse_space(cfg.space_str);
  vertex_address v = parse_vertex(cfg.vertex_str, tree);
  truncation_policy policy = make_policy(cfg);

  std::vector<double> grid;
  {
    std::stringstream ss(cfg.lambda_grid);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) throw invalid_spec("empty entry in --lambda-grid");
      try {
        std::size_t used = 0;
        grid.push_back(std::stod(part, &used));
        if (used != part.size()) throw invalid_spec("bad grid entry: " + part);
      } catch (const std::logic_error&) {
        throw invalid_spec("bad grid entry: " + part);
      }
    }
    if (grid.empty()) throw invalid_spec("--lambda-grid must list at least one value");
  }

  struct row {
    double lambda;
    std::string verdict, rule_i, rule_ii;
  };
  std::vector<row> rows;
  for (double lambda : grid) {
    weight_spec w = weight_spec::constant(scalar(lambda, 0.0));
    w.validate(tree);
    classification c = classify(tree, w, space, v, policy);
    rows.push_back({lambda, recurrence_name(c.result), c.condition_i.rule,
                    c.condition_ii ? c.condition_ii->rule : ""});
  }

  if (cfg.sweep_format == "csv") {
    std::string text = "lambda,verdict,rule_i,rule_ii\n";
    char buf[40];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g", r.lambda);
      text += std::string(buf) + "," + r.verdict + "," + r.rule_i + "," + r.rule_ii + "\n";
    }
    emit(cfg, text);
  } else {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back(json{{"lambda", r.lambda},
                         {"verdict", r.verdict},
                         {"rule_i", r.rule_i},
                         {"rule_ii", r.rule_ii}});
    emit(cfg, out.dump(2) + "\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chain recurrence and delta-chains for weighted backward shifts on trees"};
  app.require_subcommand(1);
  run_config cfg;

  auto add_common = [&](CLI::App* sub, bool weights, bool space) {
    sub->add_option("--tree", cfg.tree_path, "tree spec JSON file")->required();
    if (weights)
      sub->add_option("--weights", cfg.weights_path, "weight spec JSON file")->required();
    if (space)
      sub->add_option("--space", cfg.space_str, "sequence space: l1, lp:P, or c0")->required();
    sub->add_option("--vertex", cfg.vertex_str, "query vertex: UP or UP:SLOT,SLOT,...");
    sub->add_option("--nmax", cfg.nmax, "truncation / level budget");
    sub->add_option("--out", cfg.out_path, "write the report here instead of stdout");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "decide chain recurrence");
  add_common(classify_cmd, true, true);

  CLI::App* chain_cmd = app.add_subcommand("chain", "construct a delta-chain");
  add_common(chain_cmd, true, true);
  chain_cmd->add_option("--delta", cfg.delta, "chain step tolerance")->required();
  chain_cmd->add_flag("--from-zero", cfg.from_zero, "build 0 -> e_v");
  chain_cmd->add_flag("--to-zero", cfg.to_zero, "build e_v -> 0");
  chain_cmd->add_flag("--loop", cfg.loop, "build e_v -> 0 -> e_v");

  CLI::App* verify_cmd = app.add_subcommand("verify", "verify a stored chain");
  add_common(verify_cmd, true, false);
  verify_cmd->add_option("--chain", cfg.chain_path, "chain JSON file")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "classify over a grid of constant weights");
  add_common(sweep_cmd, false, true);
  sweep_cmd->add_option("--lambda-grid", cfg.lambda_grid, "comma-separated weight values")
      ->required();
  sweep_cmd->add_option("--format", cfg.sweep_format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (app.got_subcommand(classify_cmd)) return cmd_classify(cfg);
    if (app.got_subcommand(chain_cmd)) return cmd_chain(cfg);
    if (app.got_subcommand(verify_cmd)) return cmd_verify(cfg);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(cfg);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const treeshift::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
