#ifndef MCLAT_FCI_HPP
#define MCLAT_FCI_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finset.hpp"
#include "point.hpp"

namespace mclat {

/// Closed segment [lo, hi]; lo == hi is a singleton.
struct Segment {
  Point lo;
  Point hi;
  friend bool operator==(const Segment&, const Segment&) = default;
  friend auto operator<=>(const Segment&, const Segment&) = default;
};

/// One piece of an unnormalized description: a segment, or a ray [lo, +inf) when `hi` is empty.
/// (-inf, j] needs no shape of its own: it is [0, j] here.
struct Component {
  Point lo;
  std::optional<Point> hi;

  static Component segment(Point lo, Point hi) { return {lo, hi}; }
  static Component ray(Point lo) { return {lo, std::nullopt}; }
};

/// A finite union of closed intervals in normal form: strictly separated
/// segments in increasing order, optionally followed by one ray. Two values
/// denote the same set iff they compare equal.
class FciSet {
public:
  FciSet() = default;

  const std::vector<Segment>& segments() const noexcept { return segs_; }
  const std::optional<Point>& ray() const noexcept { return ray_; }
  bool empty() const noexcept { return segs_.empty() && !ray_; }
  std::size_t component_count() const noexcept { return segs_.size() + (ray_ ? 1 : 0); }

  friend bool operator==(const FciSet&, const FciSet&) = default;
  friend auto operator<=>(const FciSet&, const FciSet&) = default;

  std::string str() const {
    if (empty()) return "empty";
    std::string out;
    auto sep = [&] {
      if (!out.empty()) out += "+";
    };
    for (const auto& s : segs_) {
      sep();
      out += s.lo == s.hi ? "{" + s.lo.str() + "}" : "[" + s.lo.str() + "," + s.hi.str() + "]";
    }
    if (ray_) {
      sep();
      out += "[" + ray_->str() + ",*)";
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const FciSet& s) { return os << s.str(); }

private:
  friend FciSet normalize(std::vector<Component> raw);
  std::vector<Segment> segs_;
  std::optional<Point> ray_;
};

/// Canonical form of the union of `raw`.
inline FciSet normalize(std::vector<Component> raw) {
  for (const auto& c : raw)
    if (c.hi && *c.hi < c.lo)
      throw PreconditionError("normalize: segment with hi < lo: [" + c.lo.str() + "," + c.hi->str() + "]");
  std::sort(raw.begin(), raw.end(), [](const Component& a, const Component& b) { return a.lo < b.lo; });

  FciSet out;
  std::optional<Component> cur;
  auto flush = [&] {
    if (!cur) return;
    if (cur->hi)
      out.segs_.push_back({cur->lo, *cur->hi});
    else
      out.ray_ = cur->lo;
  };
  for (const auto& c : raw) {
    if (cur && !cur->hi) break;  // everything later lies inside the ray
    if (cur && c.lo <= *cur->hi) {
      if (!c.hi)
        cur->hi.reset();
      else if (*cur->hi < *c.hi)
        cur->hi = c.hi;
      continue;
    }
    flush();
    cur = c;
  }
  flush();
  return out;
}

namespace detail {

inline std::vector<Component> components_of(const FciSet& a) {
  std::vector<Component> out;
  out.reserve(a.component_count());
  for (const auto& s : a.segments()) out.push_back(Component::segment(s.lo, s.hi));
  if (a.ray()) out.push_back(Component::ray(*a.ray()));
  return out;
}

} // namespace detail

inline FciSet union_f(const FciSet& a, const FciSet& b) {
  auto raw = detail::components_of(a);
  auto rb = detail::components_of(b);
  raw.insert(raw.end(), rb.begin(), rb.end());
  return normalize(std::move(raw));
}

inline FciSet intersect_f(const FciSet& a, const FciSet& b) {
  const auto ca = detail::components_of(a);
  const auto cb = detail::components_of(b);
  std::vector<Component> raw;
  for (const auto& x : ca) {
    for (const auto& y : cb) {
      const Point lo = std::max(x.lo, y.lo);
      std::optional<Point> hi;
      if (x.hi && y.hi)
        hi = std::min(*x.hi, *y.hi);
      else if (x.hi)
        hi = x.hi;
      else
        hi = y.hi;
      if (!hi || lo <= *hi) raw.push_back({lo, hi});
    }
  }
  return normalize(std::move(raw));
}

inline FciSet singleton_f(const Point& p) { return normalize({Component::segment(p, p)}); }

inline FciSet min_f(const FciSet& a) {
  if (a.empty()) return {};
  return singleton_f(a.segments().empty() ? *a.ray() : a.segments().front().lo);
}

/// Bottom for the empty set and for unbounded sets.
inline FciSet max_f(const FciSet& a) {
  if (a.empty() || a.ray()) return {};
  return singleton_f(a.segments().back().hi);
}

inline FinSet left_pts(const FciSet& a) {
  std::vector<Point> out;
  for (const auto& s : a.segments()) out.push_back(s.lo);
  if (a.ray()) out.push_back(*a.ray());
  return FinSet::from_sorted(std::move(out));
}

/// A ray has no right endpoint.
inline FinSet right_pts(const FciSet& a) {
  std::vector<Point> out;
  for (const auto& s : a.segments()) out.push_back(s.hi);
  return FinSet::from_sorted(std::move(out));
}

inline FinSet boundary(const FciSet& a) { return set_union(left_pts(a), right_pts(a)); }

inline bool is_bounded(const FciSet& a) { return !a.ray(); }

inline bool contains(const FciSet& a, const Point& p) {
  if (a.ray() && *a.ray() <= p) return true;
  const auto& segs = a.segments();
  auto it = std::upper_bound(segs.begin(), segs.end(), p, [](const Point& q, const Segment& s) { return q < s.lo; });
  if (it == segs.begin()) return false;
  --it;
  return p <= it->hi;
}

inline bool subseteq_f(const FciSet& a, const FciSet& b) {
  for (const auto& s : a.segments()) {
    // b is a union of closed pieces, so [lo,hi] fits iff it fits inside one piece.
    if (b.ray() && *b.ray() <= s.lo) continue;
    const auto& segs = b.segments();
    auto it = std::upper_bound(segs.begin(), segs.end(), s.lo, [](const Point& q, const Segment& t) { return q < t.lo; });
    if (it == segs.begin()) return false;
    --it;
    if (s.hi > it->hi) return false;
  }
  if (a.ray()) return b.ray() && *b.ray() <= *a.ray();
  return true;
}

/// True iff every component is a singleton, i.e. left and right endpoints agree.
inline bool is_finite_set(const FciSet& a) {
  if (a.ray()) return false;
  return std::all_of(a.segments().begin(), a.segments().end(), [](const Segment& s) { return s.lo == s.hi; });
}

inline FciSet embed_finset(const FinSet& s) {
  std::vector<Component> raw;
  raw.reserve(s.size());
  for (const auto& p : s) raw.push_back(Component::segment(p, p));
  return normalize(std::move(raw));
}

inline FinSet as_finset(const FciSet& a) {
  if (!is_finite_set(a)) throw PreconditionError("as_finset: " + a.str() + " is not finite");
  return left_pts(a);
}

/// Reconstructs the set with left endpoints `left` and right endpoints `right`.
/// Scans the endpoints in order: a proper left endpoint opens a segment that
/// the next proper right endpoint closes, a common point is a singleton, and a
/// trailing open segment becomes the ray. The empty pair gives the empty set.
inline FciSet build_from_endpoints(const FinSet& left, const FinSet& right) {
  const FinSet all = set_union(left, right);
  std::vector<Component> raw;
  std::optional<Point> open;
  for (const auto& p : all) {
    const bool is_l = left.contains(p);
    const bool is_r = right.contains(p);
    if (!open) {
      if (is_l && is_r)
        raw.push_back(Component::segment(p, p));
      else if (is_l)
        open = p;
      else
        throw PreconditionError("build_from_endpoints: right endpoint " + p.str() + " has no matching left endpoint");
    } else {
      if (is_r && !is_l) {
        raw.push_back(Component::segment(*open, p));
        open.reset();
      } else {
        throw PreconditionError("build_from_endpoints: left endpoint " + p.str() + " inside open segment from " +
                                open->str());
      }
    }
  }
  if (open) raw.push_back(Component::ray(*open));
  return normalize(std::move(raw));
}

/// The witness D = I \ E for ips(A,B) = C, where E is the union of the open
/// gaps (i, succ_A(i)) with i in C. Built directly as closed pieces:
/// [0,i1], [j1,i2], ..., [jk,+inf).
inline FciSet witness_D(const FinSet& a, const FinSet& b, const FinSet& c) {
  if (b.empty()) throw PreconditionError("witness_D: B must be nonempty");
  if (!is_subset(b, a)) throw PreconditionError("witness_D: B must be a subset of A");
  if (ips(a, b) != c) throw PreconditionError("witness_D: C must equal ips(A,B)");
  std::vector<Component> raw;
  Point start = zero();
  for (const auto& i : c) {
    raw.push_back(Component::segment(start, i));
    start = *successor_in(a, i);
  }
  raw.push_back(Component::ray(start));
  return normalize(std::move(raw));
}

/// Which disjunct of the ips characterisation a candidate D satisfies.
enum class IpsClause { none, min_in_b, min_not_in_b };

/// Whether the characterisation includes the requirement that max(A) is not in C.
/// Without it, a D with max(A) as a right endpoint satisfies the clauses for a
/// C that contains max(A) although max(A) has no successor; e.g. A={1,2},
/// B={2}, C={1,2}, D=[0,1]+{2}.
enum class ClauseForm { with_max_guard, unguarded };

/// Checks D against the two clauses for ips(A,B) = C, assuming B nonempty and B within A:
///   min(A) in B,     l(D) = (B \ min B) u {0}, r(D) = C, C <= A <= D; or
///   min(A) not in B, l(D) = B u {0},           r(D) = C, C <= A <= D.
inline IpsClause ips_clause(const FinSet& a, const FinSet& b, const FinSet& c, const FciSet& d,
                            ClauseForm form = ClauseForm::with_max_guard) {
  if (right_pts(d) != c || !is_subset(c, a)) return IpsClause::none;
  for (const auto& p : a)
    if (!contains(d, p)) return IpsClause::none;
  if (form == ClauseForm::with_max_guard && !set_intersect(max_s(a), c).empty()) return IpsClause::none;
  const bool min_in_b = is_subset(min_s(a), b);
  const FinSet expected_left =
      min_in_b ? set_union(rel_complement(b, min_s(b)), cz_set()) : set_union(b, cz_set());
  if (left_pts(d) != expected_left) return IpsClause::none;
  return min_in_b ? IpsClause::min_in_b : IpsClause::min_not_in_b;
}

/// Reads `empty`, or `+`-joined `[a,b]`, `{p}`, `[a,*)`. The result is normalized.
inline FciSet parse_fci(std::string_view s) {
  std::size_t pos = 0;
  detail::skip_ws(s, pos);
  if (s.substr(pos, 5) == "empty") {
    pos += 5;
    detail::skip_ws(s, pos);
    if (pos != s.size()) throw ParseError("trailing characters after 'empty'", pos);
    return {};
  }
  std::vector<Component> raw;
  for (;;) {
    detail::skip_ws(s, pos);
    if (pos >= s.size()) throw ParseError("expected interval", pos);
    if (s[pos] == '{') {
      ++pos;
      Point p = parse_point_at(s, pos);
      detail::skip_ws(s, pos);
      if (pos >= s.size() || s[pos] != '}') throw ParseError("expected '}'", pos);
      ++pos;
      raw.push_back(Component::segment(p, p));
    } else if (s[pos] == '[') {
      ++pos;
      Point lo = parse_point_at(s, pos);
      detail::skip_ws(s, pos);
      if (pos >= s.size() || s[pos] != ',') throw ParseError("expected ','", pos);
      ++pos;
      detail::skip_ws(s, pos);
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        detail::skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != ')') throw ParseError("expected ')' after '*'", pos);
        ++pos;
        raw.push_back(Component::ray(lo));
      } else {
        const std::size_t at = pos;
        Point hi = parse_point_at(s, pos);
        if (hi < lo) throw ParseError("interval with upper end below lower end", at);
        detail::skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != ']') throw ParseError("expected ']'", pos);
        ++pos;
        raw.push_back(Component::segment(lo, hi));
      }
    } else {
      throw ParseError("expected '[', '{' or 'empty'", pos);
    }
    detail::skip_ws(s, pos);
    if (pos == s.size()) break;
    if (s[pos] != '+') throw ParseError("expected '+'", pos);
    ++pos;
  }
  return normalize(std::move(raw));
}

} // namespace mclat

#endif // MCLAT_FCI_HPP
