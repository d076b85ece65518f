#pragma once

#include <stdexcept>
#include <string>

namespace treeshift {

/// Base class for all domain errors thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A child slot index was >= the arity of the vertex it descends from.
struct slot_out_of_range : error {
  using error::error;
};

/// parent_of was asked for the parent of the root of a rooted tree.
struct root_has_no_parent : error {
  using error::error;
};

/// An enumeration would produce more vertices than the configured cap.
struct enumeration_cap_exceeded : error {
  using error::error;
};

/// Operation only defined for the other tree kind (e.g. left series on rooted).
struct not_applicable : error {
  using error::error;
};

/// path_weight target does not lie in the subtree of the claimed ancestor.
struct not_a_descendant : error {
  using error::error;
};

/// Constant-weight shift on lp/c0 with unbounded branching (cannot occur for
/// eventually-periodic profiles; kept for interface completeness).
struct unbounded_operator : error {
  using error::error;
};

/// Malformed or inconsistent tree/weight/vector/chain specification.
struct invalid_spec : error {
  using error::error;
};

/// Chain construction exhausted the level budget before the dual bound
/// cleared 1/delta. Carries the best bound reached for diagnostics.
struct criterion_not_met : error {
  double best_bound;
  int levels_tried;
  criterion_not_met(const std::string& msg, double best, int levels)
      : error(msg), best_bound(best), levels_tried(levels) {}
};

}  // namespace treeshift
