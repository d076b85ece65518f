#pragma once

#include <string>

#include <json.hpp>

#include "treeshift/chain.hpp"

namespace treeshift {

using json = nlohmann::json;

json address_to_json(const vertex_address& v);
/// Parses {"up": k, "down": [slots]} and canonicalizes against the tree.
vertex_address address_from_json(const json& j, const tree_spec& t);

json tree_to_json(const tree_spec& t);
tree_spec tree_from_json(const json& j);

json weights_to_json(const weight_spec& w);
weight_spec weights_from_json(const json& j, const tree_spec& t);

/// Vectors serialize as [[address, re, im], ...] in address order.
json vector_to_json(const sparse_vector& f);
sparse_vector vector_from_json(const json& j, const tree_spec& t);

json verdict_to_json(const series_verdict& v);
json classification_to_json(const classification& c, closed_form_result cf);

json chain_to_json(const delta_chain& c);
delta_chain chain_from_json(const json& j, const tree_spec& t);

json report_to_json(const chain_report& r);

/// "l1", "lp:P", or "c0".
space_spec parse_space(const std::string& s);
std::string space_to_string(const space_spec& s);

/// Compact CLI form "UP" or "UP:SLOT,SLOT,...".
vertex_address parse_vertex(const std::string& s, const tree_spec& t);

std::string outcome_name(series_outcome o);
std::string recurrence_name(recurrence r);
std::string closed_form_name(closed_form_result r);

json load_json_file(const std::string& path);
tree_spec load_tree_file(const std::string& path);
weight_spec load_weights_file(const std::string& path, const tree_spec& t);

}  // namespace treeshift
