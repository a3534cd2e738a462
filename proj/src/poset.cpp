#include "locint/poset.hpp"

#include <algorithm>
#include <unordered_map>

#include "locint/error.hpp"

namespace locint {

DirectedPoset DirectedPoset::validate(
    const std::vector<std::string>& elements,
    const std::vector<std::pair<std::string, std::string>>& relation) {
  if (elements.empty()) throw Error(ErrorKind::EmptyPoset, "no elements");
  if (elements.size() > 64)
    throw Error(ErrorKind::SchemaViolation, "more than 64 poset elements");

  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!index.emplace(elements[i], static_cast<int>(i)).second)
      throw Error(ErrorKind::SchemaViolation, "duplicate element '" + elements[i] + "'");
  }

  const int n = static_cast<int>(elements.size());
  std::vector<std::uint64_t> up(n, 0);
  for (int i = 0; i < n; ++i) up[i] |= (std::uint64_t{1} << i);
  for (const auto& [a, b] : relation) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      throw Error(ErrorKind::UnknownLevel, "relation pair references unlisted element");
    up[ia->second] |= (std::uint64_t{1} << ib->second);
  }

  // Warshall transitive closure on the up-sets.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if ((up[i] >> k) & 1u) up[i] |= up[k];

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (((up[a] >> b) & 1u) && ((up[b] >> a) & 1u))
        throw Error(ErrorKind::NotAntisymmetric,
                    "cycle through {" + elements[a] + ", " + elements[b] + "}");

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if ((up[a] & up[b]) == 0)
        throw Error(ErrorKind::NotDirected,
                    "no upper bound for {" + elements[a] + ", " + elements[b] + "}");

  int greatest = -1;
  for (int g = 0; g < n; ++g) {
    bool top = true;
    for (int a = 0; a < n && top; ++a) top = (up[a] >> g) & 1u;
    if (top) {
      greatest = g;
      break;
    }
  }
  // A finite directed poset always has one; directedness was just certified.
  if (greatest < 0) throw Error(ErrorKind::NotDirected, "no greatest element");

  DirectedPoset poset;
  poset.elements_ = elements;
  poset.up_ = std::move(up);
  poset.greatest_ = greatest;
  return poset;
}

int DirectedPoset::index_of(const std::string& label) const {
  auto it = std::find(elements_.begin(), elements_.end(), label);
  if (it == elements_.end())
    throw Error(ErrorKind::UnknownLevel, "unknown level '" + label + "'");
  return static_cast<int>(it - elements_.begin());
}

DirectedPoset DirectedPoset::branch(int beta) const {
  if (beta < 0 || beta >= size())
    throw Error(ErrorKind::UnknownLevel, "branch level out of range");
  std::vector<std::string> sub;
  std::vector<int> keep;
  for (int a = 0; a < size(); ++a) {
    if (leq(a, beta)) {
      keep.push_back(a);
      sub.push_back(elements_[a]);
    }
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int a : keep)
    for (int b : keep)
      if (leq(a, b)) pairs.emplace_back(elements_[a], elements_[b]);
  return validate(sub, pairs);
}

std::vector<std::pair<int, int>> DirectedPoset::comparable_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b)
      if (leq(a, b)) out.emplace_back(a, b);
  return out;
}

}  // namespace locint
