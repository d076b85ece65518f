#pragma once

#include <map>
#include <vector>

#include "treeshift/errors.hpp"

namespace treeshift {

/// Eventually-periodic two-tailed sequence of values indexed by generation.
///
/// An explicit contiguous window (`prefix`) pins arbitrary values; to its
/// right the sequence repeats `period`, to its left it repeats `left_period`
/// (read outward: index window_lo-1 gets left_period[0], window_lo-2 gets
/// left_period[1], ...). With an empty prefix the right tail starts at 0.
template <typename T>
struct two_tailed_profile {
  std::map<long, T> prefix;
  std::vector<T> period{T(1)};
  std::vector<T> left_period{T(1)};

  /// First index covered by the right-repeating tail.
  long right_tail_start() const {
    return prefix.empty() ? 0 : prefix.rbegin()->first + 1;
  }

  /// Last index covered by the left-repeating tail.
  long left_tail_end() const {
    return prefix.empty() ? -1 : prefix.begin()->first - 1;
  }

  T at(long g) const {
    if (auto it = prefix.find(g); it != prefix.end()) return it->second;
    if (g >= right_tail_start()) {
      auto idx = static_cast<std::size_t>(g - right_tail_start());
      return period[idx % period.size()];
    }
    auto idx = static_cast<std::size_t>(left_tail_end() - g);
    return left_period[idx % left_period.size()];
  }

  /// Structural checks shared by all instantiations: nonempty periods and a
  /// contiguous explicit window.
  void validate_shape(const char* what) const {
    if (period.empty() || left_period.empty())
      throw invalid_spec(std::string(what) + ": profile periods must be nonempty");
    if (!prefix.empty()) {
      long expect = prefix.begin()->first;
      for (const auto& [g, v] : prefix) {
        if (g != expect)
          throw invalid_spec(std::string(what) + ": profile prefix must be contiguous");
        ++expect;
      }
    }
  }

  static two_tailed_profile constant(T v) {
    two_tailed_profile p;
    p.period = {v};
    p.left_period = {v};
    return p;
  }

  friend bool operator==(const two_tailed_profile&, const two_tailed_profile&) = default;
};

}  // namespace treeshift
