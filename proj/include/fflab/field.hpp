#pragma once

// Exact arithmetic in the three computational domains: the prime field F_p
// (p odd), its quadratic extension F_p[w]/(w^2 - n) for a non-residue n, and
// the signed 64-bit integers standing in for characteristic zero.

#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fflab/error.hpp"

namespace fflab {

enum class Domain { prime_field, quadratic_extension, integer_line };

inline std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::prime_field: return "prime";
    case Domain::quadratic_extension: return "extension";
    case Domain::integer_line: return "integers";
  }
  return "unknown";
}

/// A field element in canonical form. Prime field: u in [0, p), v = 0.
/// Extension: u + v*w with u, v in [0, p). Integer line: u is the value, v = 0.
struct Elem {
  std::int64_t u = 0;
  std::int64_t v = 0;

  friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

struct ElemHash {
  std::size_t operator()(const Elem& e) const noexcept {
    const auto h = static_cast<std::uint64_t>(e.u) * 0x9e3779b97f4a7c15ULL ^
                   (static_cast<std::uint64_t>(e.v) + 0x7f4a7c159e3779b9ULL);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

namespace detail {

using u128 = unsigned __int128;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the fixed base set is exact for all 64-bit n.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Smallest positive quadratic non-residue modulo the odd prime p.
inline std::uint64_t find_nonresidue(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::invalid_argument, "modulus must be an odd prime");
  for (std::uint64_t r = 2;; ++r) {
    if (detail::powmod(r, (p - 1) / 2, p) == p - 1) return r;
  }
}

enum class ArithOp { add, sub, mul, neg };

/// Description of a domain plus the arithmetic on it. The arithmetic members
/// expect canonical operands (see contains()); the checked entry point is
/// arith().
class FieldSpec {
 public:
  static constexpr std::uint64_t max_modulus = 1ULL << 61;

  static FieldSpec prime(std::uint64_t p) {
    validate_modulus(p);
    return FieldSpec(Domain::prime_field, p, 0);
  }

  static FieldSpec extension(std::uint64_t p) {
    validate_modulus(p);
    if (p > (1ULL << 31)) throw Error(Errc::invalid_argument, "extension modulus too large");
    return FieldSpec(Domain::quadratic_extension, p, find_nonresidue(p));
  }

  static FieldSpec integers() { return FieldSpec(Domain::integer_line, 0, 0); }

  Domain kind() const noexcept { return kind_; }
  std::uint64_t p() const noexcept { return p_; }
  std::uint64_t nonresidue() const noexcept { return nonresidue_; }
  bool is_prime_field() const noexcept { return kind_ == Domain::prime_field; }
  bool is_finite() const noexcept { return kind_ != Domain::integer_line; }

  /// Number of elements; 0 stands for "infinite".
  std::uint64_t order() const noexcept {
    switch (kind_) {
      case Domain::prime_field: return p_;
      case Domain::quadratic_extension: return p_ * p_;
      case Domain::integer_line: return 0;
    }
    return 0;
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

  Elem zero() const noexcept { return {}; }
  Elem one() const noexcept { return {1, 0}; }
  Elem generator() const {
    if (kind_ != Domain::quadratic_extension) throw Error(Errc::unsupported, "no extension generator");
    return {0, 1};
  }

  bool contains(Elem e) const noexcept {
    const auto p = static_cast<std::int64_t>(p_);
    switch (kind_) {
      case Domain::prime_field: return e.v == 0 && e.u >= 0 && e.u < p;
      case Domain::quadratic_extension: return e.u >= 0 && e.u < p && e.v >= 0 && e.v < p;
      case Domain::integer_line: return e.v == 0;
    }
    return false;
  }

  Elem from_int(std::int64_t value) const noexcept { return {reduce(value), 0}; }

  Elem make(std::int64_t u, std::int64_t v) const {
    if (kind_ != Domain::quadratic_extension && v != 0) {
      throw Error(Errc::domain_mismatch, "extension coordinate outside quadratic extension");
    }
    return {reduce(u), kind_ == Domain::quadratic_extension ? reduce(v) : 0};
  }

  bool is_zero(Elem e) const noexcept { return e.u == 0 && e.v == 0; }

  Elem add(Elem a, Elem b) const {
    if (kind_ == Domain::integer_line) {
      std::int64_t r;
      if (__builtin_add_overflow(a.u, b.u, &r)) throw Error(Errc::domain_overflow, "integer addition");
      return {r, 0};
    }
    return {addmod(a.u, b.u), addmod(a.v, b.v)};
  }

  Elem neg(Elem a) const {
    if (kind_ == Domain::integer_line) {
      if (a.u == INT64_MIN) throw Error(Errc::domain_overflow, "integer negation");
      return {-a.u, 0};
    }
    return {a.u == 0 ? 0 : static_cast<std::int64_t>(p_) - a.u,
            a.v == 0 ? 0 : static_cast<std::int64_t>(p_) - a.v};
  }

  Elem sub(Elem a, Elem b) const {
    if (kind_ == Domain::integer_line) {
      std::int64_t r;
      if (__builtin_sub_overflow(a.u, b.u, &r)) throw Error(Errc::domain_overflow, "integer subtraction");
      return {r, 0};
    }
    return add(a, neg(b));
  }

  Elem mul(Elem a, Elem b) const {
    switch (kind_) {
      case Domain::prime_field: return {mulmod(a.u, b.u), 0};
      case Domain::quadratic_extension: {
        // (a.u + a.v w)(b.u + b.v w) with w^2 = n.
        const auto uu = mulmod(a.u, b.u);
        const auto vv = mulmod(mulmod(a.v, b.v), static_cast<std::int64_t>(nonresidue_));
        const auto cross = addmod(mulmod(a.u, b.v), mulmod(a.v, b.u));
        return {addmod(uu, vv), cross};
      }
      case Domain::integer_line: {
        std::int64_t r;
        if (__builtin_mul_overflow(a.u, b.u, &r)) throw Error(Errc::domain_overflow, "integer multiplication");
        return {r, 0};
      }
    }
    return {};
  }

  Elem pow(Elem base, std::uint64_t exp) const {
    Elem result = one();
    while (exp > 0) {
      if (exp & 1) result = mul(result, base);
      exp >>= 1;
      if (exp > 0) base = mul(base, base);
    }
    return result;
  }

  Elem inv(Elem a) const {
    if (kind_ == Domain::integer_line) throw Error(Errc::unsupported, "inverse on the integer line");
    if (is_zero(a)) throw Error(Errc::division_by_zero, "inverse of zero");
    if (kind_ == Domain::prime_field) return pow(a, p_ - 2);
    // 1/(u + v w) = (u - v w) / (u^2 - n v^2); the norm is nonzero since n is a non-residue.
    const auto norm = addmod(mulmod(a.u, a.u), static_cast<std::int64_t>(p_) -
                                                   mulmod(mulmod(a.v, a.v), static_cast<std::int64_t>(nonresidue_)));
    const auto norm_inv = static_cast<std::int64_t>(detail::powmod(static_cast<std::uint64_t>(norm), p_ - 2, p_));
    return {mulmod(a.u, norm_inv), mulmod(a.v == 0 ? 0 : static_cast<std::int64_t>(p_) - a.v, norm_inv)};
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// Euler's criterion; zero counts as a square.
  bool is_square(Elem a) const {
    require_prime("is_square");
    if (a.u == 0) return true;
    return detail::powmod(static_cast<std::uint64_t>(a.u), (p_ - 1) / 2, p_) == 1;
  }

  /// All r with r^2 = a, ascending. Tonelli-Shanks with the smallest
  /// non-residue, so the result is deterministic.
  std::vector<Elem> sqrt(Elem a) const {
    require_prime("sqrt");
    if (a.u == 0) return {zero()};
    if (!is_square(a)) return {};
    std::uint64_t q = p_ - 1;
    int s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    const auto n = static_cast<std::uint64_t>(a.u);
    std::uint64_t z = find_nonresidue(p_);
    std::uint64_t c = detail::powmod(z, q, p_);
    std::uint64_t r = detail::powmod(n, (q + 1) / 2, p_);
    std::uint64_t t = detail::powmod(n, q, p_);
    int m = s;
    while (t != 1) {
      int i = 0;
      std::uint64_t t2 = t;
      while (t2 != 1) {
        t2 = detail::mulmod(t2, t2, p_);
        ++i;
      }
      std::uint64_t b = c;
      for (int j = 0; j < m - i - 1; ++j) b = detail::mulmod(b, b, p_);
      r = detail::mulmod(r, b, p_);
      c = detail::mulmod(b, b, p_);
      t = detail::mulmod(t, c, p_);
      m = i;
    }
    Elem r1{static_cast<std::int64_t>(r), 0};
    Elem r2 = neg(r1);
    if (r2 < r1) std::swap(r1, r2);
    return {r1, r2};
  }

  /// Dense index in [0, order()); lexicographic in (u, v), so index order is
  /// canonical element order.
  std::uint64_t index(Elem e) const noexcept {
    return kind_ == Domain::quadratic_extension ? static_cast<std::uint64_t>(e.u) * p_ + static_cast<std::uint64_t>(e.v)
                                                : static_cast<std::uint64_t>(e.u);
  }

  Elem from_index(std::uint64_t i) const noexcept {
    if (kind_ == Domain::quadratic_extension) {
      return {static_cast<std::int64_t>(i / p_), static_cast<std::int64_t>(i % p_)};
    }
    return {static_cast<std::int64_t>(i), 0};
  }

 private:
  FieldSpec(Domain kind, std::uint64_t p, std::uint64_t n) : kind_(kind), p_(p), nonresidue_(n) {}

  static void validate_modulus(std::uint64_t p) {
    if (p == 2) throw Error(Errc::invalid_argument, "characteristic 2 is not supported");
    if (p < 3 || p > max_modulus || !is_prime(p)) {
      throw Error(Errc::invalid_argument, "modulus " + std::to_string(p) + " is not an odd prime below 2^61");
    }
  }

  void require_prime(const char* what) const {
    if (kind_ != Domain::prime_field) throw Error(Errc::unsupported, std::string(what) + " needs a prime field");
  }

  std::int64_t reduce(std::int64_t value) const noexcept {
    if (kind_ == Domain::integer_line) return value;
    const auto p = static_cast<std::int64_t>(p_);
    std::int64_t r = value % p;
    return r < 0 ? r + p : r;
  }

  std::int64_t addmod(std::int64_t a, std::int64_t b) const noexcept {
    const auto sum = static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b);
    return static_cast<std::int64_t>(sum >= p_ ? sum - p_ : sum);
  }

  std::int64_t mulmod(std::int64_t a, std::int64_t b) const noexcept {
    return static_cast<std::int64_t>(detail::mulmod(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), p_));
  }

  Domain kind_;
  std::uint64_t p_;
  std::uint64_t nonresidue_;
};

/// Checked arithmetic: operands must be canonical members of `field`. For
/// neg the second operand is ignored.
inline Elem arith(const FieldSpec& field, ArithOp op, Elem a, Elem b = {}) {
  if (!field.contains(a) || (op != ArithOp::neg && !field.contains(b))) {
    throw Error(Errc::domain_mismatch, "operand is not a canonical element of the field");
  }
  switch (op) {
    case ArithOp::add: return field.add(a, b);
    case ArithOp::sub: return field.sub(a, b);
    case ArithOp::mul: return field.mul(a, b);
    case ArithOp::neg: return field.neg(a);
  }
  return {};
}

inline std::string format_elem(const FieldSpec& field, Elem e) {
  if (field.kind() == Domain::quadratic_extension) {
    return std::to_string(e.u) + "+" + std::to_string(e.v) + "*w";
  }
  return std::to_string(e.u);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

inline std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::parse, "bad integer '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace detail

/// Parses "7", "-3", and for the extension also "u+v*w", "v*w", "w".
inline Elem parse_elem(const FieldSpec& field, std::string_view token) {
  token = detail::trim(token);
  if (token.empty()) throw Error(Errc::parse, "empty element");
  const auto wpos = token.find('w');
  if (wpos == std::string_view::npos) return field.make(detail::parse_int(token), 0);
  if (field.kind() != Domain::quadratic_extension) {
    throw Error(Errc::parse, "extension literal '" + std::string(token) + "' outside extension field");
  }
  if (wpos + 1 != token.size()) throw Error(Errc::parse, "bad extension literal '" + std::string(token) + "'");
  // Split at the last sign that is not the leading one.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = 1; i < wpos; ++i) {
    if (token[i] == '+' || token[i] == '-') split = i;
  }
  std::string_view real_part = split == std::string_view::npos ? std::string_view{} : token.substr(0, split);
  std::string_view w_part = split == std::string_view::npos ? token : token.substr(split);
  w_part = w_part.substr(0, w_part.size() - 1);  // drop 'w'
  if (!w_part.empty() && w_part.back() == '*') w_part.remove_suffix(1);
  std::int64_t v = 1;
  const auto wt = detail::trim(w_part);
  if (wt.empty() || wt == "+") {
    v = 1;
  } else if (wt == "-") {
    v = -1;
  } else {
    v = detail::parse_int(wt);
  }
  const std::int64_t u = real_part.empty() ? 0 : detail::parse_int(real_part);
  return field.make(u, v);
}

}  // namespace fflab
