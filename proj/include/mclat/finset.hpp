#ifndef MCLAT_FINSET_HPP
#define MCLAT_FINSET_HPP

#include <algorithm>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "point.hpp"

namespace mclat {

/// A finite subset of the order: an element of the weak monadic structure.
/// Elements are kept strictly increasing; the empty set is bottom.
class FinSet {
public:
  FinSet() = default;
  FinSet(std::initializer_list<Point> pts) : FinSet(std::vector<Point>(pts)) {}

  /// Accepts any order and duplicates.
  explicit FinSet(std::vector<Point> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }

  /// Builds from an already strictly increasing sequence.
  static FinSet from_sorted(std::vector<Point> pts) {
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (!(pts[i - 1] < pts[i])) throw PreconditionError("FinSet::from_sorted: sequence not strictly increasing");
    FinSet s;
    s.pts_ = std::move(pts);
    return s;
  }

  static FinSet singleton(const Point& p) { return from_sorted({p}); }

  bool empty() const noexcept { return pts_.empty(); }
  std::size_t size() const noexcept { return pts_.size(); }
  std::span<const Point> points() const noexcept { return pts_; }
  const Point& operator[](std::size_t i) const { return pts_[i]; }
  auto begin() const noexcept { return pts_.begin(); }
  auto end() const noexcept { return pts_.end(); }

  bool contains(const Point& p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

  friend bool operator==(const FinSet&, const FinSet&) = default;
  friend auto operator<=>(const FinSet& a, const FinSet& b) {
    return std::lexicographical_compare_three_way(a.pts_.begin(), a.pts_.end(), b.pts_.begin(), b.pts_.end());
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (i) out += ", ";
      out += pts_[i].str();
    }
    return out + "}";
  }

  friend std::ostream& operator<<(std::ostream& os, const FinSet& s) { return os << s.str(); }

private:
  std::vector<Point> pts_;
};

/// The constant {0}.
inline FinSet cz_set() { return FinSet::singleton(zero()); }

inline FinSet set_union(const FinSet& a, const FinSet& b) {
  std::vector<Point> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FinSet::from_sorted(std::move(out));
}

inline FinSet set_intersect(const FinSet& a, const FinSet& b) {
  std::vector<Point> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FinSet::from_sorted(std::move(out));
}

/// A \ B.
inline FinSet rel_complement(const FinSet& a, const FinSet& b) {
  std::vector<Point> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FinSet::from_sorted(std::move(out));
}

inline bool is_subset(const FinSet& a, const FinSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// min and max both fix bottom.
inline FinSet min_s(const FinSet& a) { return a.empty() ? FinSet{} : FinSet::singleton(a[0]); }
inline FinSet max_s(const FinSet& a) { return a.empty() ? FinSet{} : FinSet::singleton(a[a.size() - 1]); }

/// Next element of `a` after `i`; empty at the maximum. `i` must belong to `a`.
inline std::optional<Point> successor_in(const FinSet& a, const Point& i) {
  auto it = std::lower_bound(a.begin(), a.end(), i);
  if (it == a.end() || *it != i) throw PreconditionError("successor_in: " + i.str() + " is not an element of " + a.str());
  ++it;
  if (it == a.end()) return std::nullopt;
  return *it;
}

/// Elements of `a` whose successor in `a` lies in `b`.
inline FinSet ips(const FinSet& a, const FinSet& b) {
  std::vector<Point> out;
  for (std::size_t k = 0; k + 1 < a.size(); ++k)
    if (b.contains(a[k + 1])) out.push_back(a[k]);
  return FinSet::from_sorted(std::move(out));
}

/// Reads `{}` or `{p1, p2, ...}` (strictly increasing) starting at `pos`.
inline FinSet parse_finset_at(std::string_view s, std::size_t& pos) {
  detail::skip_ws(s, pos);
  if (pos >= s.size() || s[pos] != '{') throw ParseError("expected '{'", pos);
  ++pos;
  std::vector<Point> pts;
  detail::skip_ws(s, pos);
  if (pos < s.size() && s[pos] == '}') {
    ++pos;
    return FinSet{};
  }
  for (;;) {
    const std::size_t at = pos;
    Point p = parse_point_at(s, pos);
    if (!pts.empty() && !(pts.back() < p)) throw ParseError("set elements must be strictly increasing", at);
    pts.push_back(p);
    detail::skip_ws(s, pos);
    if (pos < s.size() && s[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos < s.size() && s[pos] == '}') {
      ++pos;
      break;
    }
    throw ParseError("expected ',' or '}'", pos);
  }
  return FinSet::from_sorted(std::move(pts));
}

inline FinSet parse_finset(std::string_view s) {
  std::size_t pos = 0;
  FinSet out = parse_finset_at(s, pos);
  detail::skip_ws(s, pos);
  if (pos != s.size()) throw ParseError("trailing characters after set", pos);
  return out;
}

} // namespace mclat

#endif // MCLAT_FINSET_HPP
