#include "perturbdyn/multiset.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

namespace {

void check_indices(const std::vector<int>& elements) {
  for (int e : elements) {
    if (e < 0 || e >= kMaxVariables) {
      throw ConfigError("multiset index " + std::to_string(e) + " outside [0, " +
                        std::to_string(kMaxVariables) + ")");
    }
  }
}

}  // namespace

Multiset::Multiset(std::initializer_list<int> elements) : elements_(elements) {
  check_indices(elements_);
  std::sort(elements_.begin(), elements_.end());
}

Multiset::Multiset(std::vector<int> elements) : elements_(std::move(elements)) {
  check_indices(elements_);
  std::sort(elements_.begin(), elements_.end());
}

Multiset Multiset::from_counts(std::span<const int> counts) {
  std::vector<int> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.insert(out.end(), static_cast<std::size_t>(std::max(counts[i], 0)), static_cast<int>(i));
  }
  Multiset m;
  check_indices(out);
  m.elements_ = std::move(out);
  return m;
}

int Multiset::count(int index) const noexcept {
  auto [lo, hi] = std::equal_range(elements_.begin(), elements_.end(), index);
  return static_cast<int>(hi - lo);
}

int Multiset::alphabet_size() const noexcept {
  return elements_.empty() ? 0 : elements_.back() + 1;
}

std::vector<int> Multiset::counts(int r) const {
  std::vector<int> c(static_cast<std::size_t>(std::max(r, alphabet_size())), 0);
  for (int e : elements_) ++c[static_cast<std::size_t>(e)];
  return c;
}

bool Multiset::contains(const Multiset& sub) const {
  return std::includes(elements_.begin(), elements_.end(), sub.elements_.begin(),
                       sub.elements_.end());
}

Multiset Multiset::minus(const Multiset& sub) const {
  if (!contains(sub)) {
    throw ShapeError(sub.to_string() + " is not a submultiset of " + to_string());
  }
  Multiset out;
  std::set_difference(elements_.begin(), elements_.end(), sub.elements_.begin(),
                      sub.elements_.end(), std::back_inserter(out.elements_));
  return out;
}

std::string Multiset::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) os << ',';
    os << elements_[i];
  }
  os << ')';
  return os.str();
}

std::strong_ordering operator<=>(const Multiset& a, const Multiset& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.elements_.begin(), a.elements_.end(),
                                                b.elements_.begin(), b.elements_.end());
}

Multiset msum(const Multiset& a, const Multiset& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::merge(a.elements().begin(), a.elements().end(), b.elements().begin(),
             b.elements().end(), std::back_inserter(out));
  return Multiset(std::move(out));
}

std::vector<Multiset> submultisets_proper(const Multiset& i) {
  std::vector<Multiset> out;
  if (i.empty()) return out;

  // Odometer over the multiplicity vector of i; each reading is a distinct
  // submultiset, so no deduplication is needed.
  std::vector<int> distinct;
  std::vector<int> limit;
  for (int e : i.elements()) {
    if (distinct.empty() || distinct.back() != e) {
      distinct.push_back(e);
      limit.push_back(0);
    }
    ++limit.back();
  }
  std::vector<int> digit(distinct.size(), 0);
  while (true) {
    std::size_t pos = 0;
    while (pos < digit.size() && digit[pos] == limit[pos]) {
      digit[pos] = 0;
      ++pos;
    }
    if (pos == digit.size()) break;
    ++digit[pos];
    if (digit == limit) continue;
    std::vector<int> elems;
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      elems.insert(elems.end(), static_cast<std::size_t>(digit[k]), distinct[k]);
    }
    out.emplace_back(std::move(elems));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Multiset> complete(std::span<const Multiset> labels) {
  std::set<Multiset> closed;
  std::vector<Multiset> frontier;
  for (const auto& l : labels) {
    if (!l.empty() && closed.insert(l).second) frontier.push_back(l);
  }
  // Removing one element at a time from every member reaches all nonempty
  // submultisets.
  while (!frontier.empty()) {
    Multiset cur = std::move(frontier.back());
    frontier.pop_back();
    if (cur.size() <= 1) continue;
    const auto& e = cur.elements();
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (k > 0 && e[k] == e[k - 1]) continue;
      Multiset smaller = cur.minus(Multiset{e[k]});
      if (closed.insert(smaller).second) frontier.push_back(std::move(smaller));
    }
  }
  return {closed.begin(), closed.end()};
}

std::vector<std::vector<Multiset>> ordered_partitions(const Multiset& i, int k) {
  std::vector<std::vector<Multiset>> out;
  if (k < 1) throw ConfigError("ordered_partitions requires k >= 1");
  if (static_cast<int>(i.size()) < k) return out;
  if (k == 1) {
    out.push_back({i});
    return out;
  }
  for (const auto& first : submultisets_proper(i)) {
    if (static_cast<int>(first.size()) > static_cast<int>(i.size()) - (k - 1)) continue;
    for (auto& rest : ordered_partitions(i.minus(first), k - 1)) {
      std::vector<Multiset> tuple;
      tuple.reserve(static_cast<std::size_t>(k));
      tuple.push_back(first);
      tuple.insert(tuple.end(), std::make_move_iterator(rest.begin()),
                   std::make_move_iterator(rest.end()));
      out.push_back(std::move(tuple));
    }
  }
  return out;
}

std::vector<Multiset> all_multisets_up_to(std::span<const int> variables, int order) {
  std::vector<int> vars(variables.begin(), variables.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<Multiset> out;
  if (vars.empty() || order < 1) return out;

  // Non-decreasing index sequences of every length 1..order.
  std::vector<std::vector<int>> level = {{}};
  for (int n = 1; n <= order; ++n) {
    std::vector<std::vector<int>> next;
    for (const auto& seq : level) {
      std::size_t start = 0;
      if (!seq.empty()) {
        start = static_cast<std::size_t>(
            std::lower_bound(vars.begin(), vars.end(), seq.back()) - vars.begin());
      }
      for (std::size_t v = start; v < vars.size(); ++v) {
        auto ext = seq;
        ext.push_back(vars[v]);
        next.push_back(std::move(ext));
      }
    }
    for (const auto& seq : next) out.emplace_back(seq);
    level = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Multiset> all_multisets_up_to(int r, int order) {
  std::vector<int> vars(static_cast<std::size_t>(std::max(r, 0)));
  for (int i = 0; i < r; ++i) vars[static_cast<std::size_t>(i)] = i;
  return all_multisets_up_to(vars, order);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::size_t MultisetHash::operator()(const Multiset& m) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int e : m.elements()) {
    h ^= static_cast<std::size_t>(e) + 1;
    h *= 0x100000001b3ULL;
  }
  return h ^ m.size();
}

}  // namespace perturbdyn
