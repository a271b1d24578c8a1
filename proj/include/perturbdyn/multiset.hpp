#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace perturbdyn {

/// Largest number of distinct perturbation variables a multiset may index.
inline constexpr int kMaxVariables = 64;

/// A sorted bag of perturbation variable indices. A multiset I labels the
/// monomial c_I = prod_{i in I} c_i, so repeated indices mean powers.
///
/// Ordering (operator<=>) is the canonical one used throughout the library:
/// by size first, then lexicographic on the sorted elements. Every subset of
/// a multiset therefore sorts before the multiset itself.
class Multiset {
 public:
  Multiset() = default;
  Multiset(std::initializer_list<int> elements);
  explicit Multiset(std::vector<int> elements);

  /// Builds a multiset from per-index multiplicities (counts[i] copies of i).
  static Multiset from_counts(std::span<const int> counts);

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const std::vector<int>& elements() const noexcept { return elements_; }

  /// Number of copies of `index`.
  int count(int index) const noexcept;
  /// Largest index + 1, or 0 for the empty multiset.
  int alphabet_size() const noexcept;
  /// Multiplicity vector of length `r`.
  std::vector<int> counts(int r) const;

  bool contains(const Multiset& sub) const;

  /// I \ J; requires J to be a submultiset of I.
  Multiset minus(const Multiset& sub) const;

  std::string to_string() const;

  friend bool operator==(const Multiset&, const Multiset&) = default;
  friend std::strong_ordering operator<=>(const Multiset& a, const Multiset& b);

 private:
  std::vector<int> elements_;
};

/// Multiset summation I + J (multiplicities add).
Multiset msum(const Multiset& a, const Multiset& b);
inline Multiset operator+(const Multiset& a, const Multiset& b) { return msum(a, b); }

/// All nonempty proper submultisets of `i`, each once, in canonical order.
std::vector<Multiset> submultisets_proper(const Multiset& i);

/// Smallest superset of `labels` closed under nonempty submultisets, sorted
/// canonically and without duplicates.
std::vector<Multiset> complete(std::span<const Multiset> labels);

/// Every ordered k-tuple of nonempty multisets summing to `i`. Empty when
/// |i| < k.
std::vector<std::vector<Multiset>> ordered_partitions(const Multiset& i, int k);

/// Every multiset of size 1..order over {0, ..., r-1}, canonically ordered.
std::vector<Multiset> all_multisets_up_to(int r, int order);

/// Every multiset of size 1..order over the given variable indices.
std::vector<Multiset> all_multisets_up_to(std::span<const int> variables, int order);

/// Binomial coefficient as an exact integer.
std::uint64_t binomial(int n, int k);

struct MultisetHash {
  std::size_t operator()(const Multiset& m) const noexcept;
};

}  // namespace perturbdyn
