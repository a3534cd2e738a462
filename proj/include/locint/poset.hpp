#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace locint {

/// A finite directed poset (Lambda, <=). The input relation may be a
/// generating set; the reflexive-transitive closure is materialized during
/// validation. Directedness plus finiteness guarantee a unique greatest
/// element, which is cached. Immutable after validation.
class DirectedPoset {
 public:
  static DirectedPoset validate(
      const std::vector<std::string>& elements,
      const std::vector<std::pair<std::string, std::string>>& relation);

  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& label(int i) const { return elements_[i]; }
  int index_of(const std::string& label) const;  // throws UnknownLevel

  bool leq(int a, int b) const { return (up_[a] >> b) & 1u; }
  int greatest() const { return greatest_; }

  /// The branch Lambda_beta = { alpha : alpha <= beta }, itself a directed
  /// poset with greatest element beta. Labels are preserved.
  DirectedPoset branch(int beta) const;

  /// All ordered pairs (a, b) with a <= b in the materialized closure.
  std::vector<std::pair<int, int>> comparable_pairs() const;

  /// Empty placeholder; only validate() produces a usable poset.
  DirectedPoset() = default;

 private:
  std::vector<std::string> elements_;
  std::vector<std::uint64_t> up_;  // up_[a] bit b set iff a <= b
  int greatest_ = -1;
};

}  // namespace locint
