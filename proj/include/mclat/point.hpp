#ifndef MCLAT_POINT_HPP
#define MCLAT_POINT_HPP

#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mclat {

/// Thrown when an operation is called outside its documented domain.
class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Malformed textual input. `position` is a 0-based offset into the text.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("mclat: rational overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("mclat: rational overflow");
  return r;
}

} // namespace detail

/// An element of the dense order of nonnegative rationals. Always stored in
/// lowest terms with a positive denominator, so equality is structural.
class Point {
public:
  constexpr Point() = default;
  Point(std::int64_t num, std::int64_t den = 1) {
    if (den <= 0) throw PreconditionError("Point: denominator must be positive");
    if (num < 0) throw PreconditionError("Point: value must be nonnegative");
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  friend bool operator==(const Point&, const Point&) = default;
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) { return os << p.str(); }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The least element of the order.
inline Point zero() { return Point{}; }

/// Arithmetic mean; witnesses density.
inline Point midpoint(const Point& a, const Point& b) {
  if (!(a < b)) throw PreconditionError("midpoint: requires a < b, got " + a.str() + " >= " + b.str());
  using detail::checked_add;
  using detail::checked_mul;
  const std::int64_t num = checked_add(checked_mul(a.numerator(), b.denominator()),
                                       checked_mul(b.numerator(), a.denominator()));
  const std::int64_t den = checked_mul(checked_mul(a.denominator(), b.denominator()), 2);
  return Point(num, den);
}

/// a + 1; witnesses the absence of a right endpoint.
inline Point above(const Point& a) {
  return Point(detail::checked_add(a.numerator(), a.denominator()), a.denominator());
}

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r')) ++pos;
}

inline std::int64_t parse_uint(std::string_view s, std::size_t& pos) {
  std::int64_t v = 0;
  const char* first = s.data() + pos;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr == first) throw ParseError("expected a nonnegative integer", pos);
  if (*first == '-' || *first == '+') throw ParseError("expected a nonnegative integer", pos);
  pos += static_cast<std::size_t>(ptr - first);
  return v;
}

} // namespace detail

/// Reads `p` or `p/q` starting at `pos`, advancing it past the point.
inline Point parse_point_at(std::string_view s, std::size_t& pos) {
  detail::skip_ws(s, pos);
  if (pos < s.size() && s[pos] == '-') throw ParseError("negative points are not in the order", pos);
  const std::int64_t num = detail::parse_uint(s, pos);
  std::int64_t den = 1;
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    const std::size_t at = pos;
    den = detail::parse_uint(s, pos);
    if (den == 0) throw ParseError("zero denominator", at);
  }
  return Point(num, den);
}

inline Point parse_point(std::string_view s) {
  std::size_t pos = 0;
  Point p = parse_point_at(s, pos);
  detail::skip_ws(s, pos);
  if (pos != s.size()) throw ParseError("trailing characters after point", pos);
  return p;
}

} // namespace mclat

template <>
struct std::hash<mclat::Point> {
  std::size_t operator()(const mclat::Point& p) const noexcept {
    return std::hash<std::int64_t>{}(p.numerator()) * 31u + std::hash<std::int64_t>{}(p.denominator());
  }
};

#endif // MCLAT_POINT_HPP
