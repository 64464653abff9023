#pragma once

// Quadratic polynomials in three variables: representation, evaluation,
// translation normalization, and the expander/degenerate classification of
// quadratics over F_p.

#include <array>
#include <boost/rational.hpp>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fflab/field.hpp"
#include "fflab/sets.hpp"

namespace fflab {

using Rational = boost::rational<std::int64_t>;

/// Monomial slots of a three-variable quadratic, in storage order.
enum class Mono { xx, yy, zz, xy, xz, yz, x, y, z, one };

inline constexpr std::size_t square_slot(int i) { return static_cast<std::size_t>(i); }
inline constexpr std::size_t linear_slot(int i) { return 6 + static_cast<std::size_t>(i); }
inline constexpr std::size_t mixed_slot(int i, int j) {
  if (i > j) std::swap(i, j);
  return i == 0 ? (j == 1 ? 3 : 4) : 5;
}

class Quad3 {
 public:
  explicit Quad3(FieldSpec field) : field_(field) {}

  /// Coefficients in Mono order, reduced into the field.
  static Quad3 from_coeffs(FieldSpec field, const std::array<std::int64_t, 10>& raw) {
    Quad3 q(field);
    for (std::size_t i = 0; i < 10; ++i) q.c_[i] = field.from_int(raw[i]);
    return q;
  }

  const FieldSpec& field() const noexcept { return field_; }
  const std::array<Elem, 10>& coeffs() const noexcept { return c_; }

  Elem operator[](Mono m) const noexcept { return c_[static_cast<std::size_t>(m)]; }
  Elem coeff(std::size_t slot) const noexcept { return c_[slot]; }
  Quad3& set(Mono m, Elem value) {
    if (!field_.contains(value)) throw Error(Errc::domain_mismatch, "coefficient outside the field");
    c_[static_cast<std::size_t>(m)] = value;
    return *this;
  }
  Quad3& set_slot(std::size_t slot, Elem value) { return set(static_cast<Mono>(slot), value); }

  Elem square(int i) const noexcept { return c_[square_slot(i)]; }
  Elem mixed(int i, int j) const noexcept { return c_[mixed_slot(i, j)]; }
  Elem linear(int i) const noexcept { return c_[linear_slot(i)]; }
  Elem constant() const noexcept { return c_[9]; }

  /// Univariate parts: f = a xy + b xz + c yz + r(x) + s(y) + t(z); the
  /// constant term is carried by r.
  Univariate r() const { return {c_[0], c_[6], c_[9]}; }
  Univariate s() const { return {c_[1], c_[7], Elem{}}; }
  Univariate t() const { return {c_[2], c_[8], Elem{}}; }

  bool is_quadratic() const noexcept {
    for (std::size_t i = 0; i < 6; ++i) {
      if (c_[i] != Elem{}) return true;
    }
    return false;
  }

  Elem operator()(Elem x, Elem y, Elem z) const { return evaluate(x, y, z); }

  Elem evaluate(Elem x, Elem y, Elem z) const {
    const auto& f = field_;
    Elem acc = c_[9];
    acc = f.add(acc, f.mul(f.add(f.mul(c_[0], x), c_[6]), x));
    acc = f.add(acc, f.mul(f.add(f.mul(c_[1], y), c_[7]), y));
    acc = f.add(acc, f.mul(f.add(f.mul(c_[2], z), c_[8]), z));
    acc = f.add(acc, f.mul(f.add(f.mul(c_[3], y), f.mul(c_[4], z)), x));
    acc = f.add(acc, f.mul(f.mul(c_[5], y), z));
    return acc;
  }

  /// Whether some monomial containing x / y / z has a nonzero coefficient.
  std::array<bool, 3> depends_on() const noexcept {
    std::array<bool, 3> dep{};
    for (int i = 0; i < 3; ++i) {
      dep[i] = c_[square_slot(i)] != Elem{} || c_[linear_slot(i)] != Elem{};
      for (int j = 0; j < 3; ++j) {
        if (j != i && c_[mixed_slot(i, j)] != Elem{}) dep[i] = true;
      }
    }
    return dep;
  }

  friend bool operator==(const Quad3& a, const Quad3& b) { return a.field_ == b.field_ && a.c_ == b.c_; }

 private:
  FieldSpec field_;
  std::array<Elem, 10> c_{};
};

/// Two-variable quadratic g(x, y) = c_xx x^2 + c_yy y^2 + c_xy xy + c_x x + c_y y + c_1.
struct Quad2 {
  FieldSpec field;
  Elem xx{}, yy{}, xy{}, x{}, y{}, one{};

  /// Needs a nonzero xy term to take part in the iterated constructions.
  bool eligible() const noexcept { return xy != Elem{}; }

  Elem operator()(Elem a, Elem b) const {
    const auto& f = field;
    Elem acc = one;
    acc = f.add(acc, f.mul(f.add(f.mul(xx, a), x), a));
    acc = f.add(acc, f.mul(f.add(f.mul(yy, b), y), b));
    return f.add(acc, f.mul(f.mul(xy, a), b));
  }

  /// (x - y)^2
  static Quad2 difference_square(FieldSpec f) {
    return {f, f.one(), f.one(), f.from_int(-2), {}, {}, {}};
  }
  /// xy
  static Quad2 product(FieldSpec f) { return {f, {}, {}, f.one(), {}, {}, {}}; }
};

/// alpha x + beta y + delta z + constant.
struct LinearForm3 {
  Elem alpha{}, beta{}, delta{}, constant{};
  friend bool operator==(const LinearForm3&, const LinearForm3&) = default;
};

/// role[i] is the original variable that plays variable i after permuting.
struct Perm3 {
  std::array<int, 3> role{0, 1, 2};
  friend bool operator==(const Perm3&, const Perm3&) = default;

  static std::array<Perm3, 6> all() {
    return {{{{0, 1, 2}}, {{0, 2, 1}}, {{1, 0, 2}}, {{1, 2, 0}}, {{2, 0, 1}}, {{2, 1, 0}}}};
  }
};

/// h(u0, u1, u2) = f evaluated with original variable role[i] set to u_i.
inline Quad3 permute(const Quad3& f, const Perm3& pi) {
  Quad3 h(f.field());
  for (int i = 0; i < 3; ++i) {
    h.set_slot(square_slot(i), f.square(pi.role[i]));
    h.set_slot(linear_slot(i), f.linear(pi.role[i]));
    for (int j = i + 1; j < 3; ++j) h.set_slot(mixed_slot(i, j), f.mixed(pi.role[i], pi.role[j]));
  }
  h.set(Mono::one, f.constant());
  return h;
}

/// Expands g(lambda(x, y, z)) into a Quad3.
inline Quad3 compose(const Univariate& g, const LinearForm3& lambda, const FieldSpec& field) {
  const auto& f = field;
  const std::array<Elem, 3> v{lambda.alpha, lambda.beta, lambda.delta};
  const Elem two = f.from_int(2);
  Quad3 h(f);
  // g2 (v.x + k)^2 + g1 (v.x + k) + g0
  for (int i = 0; i < 3; ++i) {
    h.set_slot(square_slot(i), f.mul(g.c2, f.mul(v[i], v[i])));
    for (int j = i + 1; j < 3; ++j) h.set_slot(mixed_slot(i, j), f.mul(f.mul(two, g.c2), f.mul(v[i], v[j])));
    const Elem lin = f.add(f.mul(f.mul(two, g.c2), f.mul(lambda.constant, v[i])), f.mul(g.c1, v[i]));
    h.set_slot(linear_slot(i), lin);
  }
  h.set(Mono::one, g(f, lambda.constant));
  return h;
}

// ---------------------------------------------------------------------------
// Normalization

struct Normalized {
  Quad3 poly;                        ///< constant-free, linear terms removed where solvable
  std::array<Elem, 3> translation;   ///< f(x + t) = poly + constant
  Elem constant;
  bool partial;                      ///< quadratic-part matrix is singular
};

namespace detail {

inline void require_prime_field(const FieldSpec& f, const char* what) {
  if (!f.is_prime_field()) throw Error(Errc::unsupported, std::string(what) + " needs a prime field");
}

/// Solves A t = rhs over F_p by Gauss-Jordan elimination. Free variables are
/// set to zero and inconsistent rows are ignored. Returns (t, full_rank).
inline std::pair<std::array<Elem, 3>, bool> solve3(const FieldSpec& f, std::array<std::array<Elem, 4>, 3> m) {
  std::array<int, 3> pivot_col{-1, -1, -1};
  int row = 0;
  for (int col = 0; col < 3 && row < 3; ++col) {
    int sel = -1;
    for (int r = row; r < 3; ++r) {
      if (m[r][col] != Elem{}) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(m[row], m[sel]);
    const Elem inv = f.inv(m[row][col]);
    for (auto& e : m[row]) e = f.mul(e, inv);
    for (int r = 0; r < 3; ++r) {
      if (r == row || m[r][col] == Elem{}) continue;
      const Elem factor = m[r][col];
      for (int k = 0; k < 4; ++k) m[r][k] = f.sub(m[r][k], f.mul(factor, m[row][k]));
    }
    pivot_col[row] = col;
    ++row;
  }
  std::array<Elem, 3> t{};
  for (int r = 0; r < row; ++r) t[pivot_col[r]] = m[r][3];
  return {t, row == 3};
}

}  // namespace detail

/// Translates variables to cancel linear terms (x -> x + t). Succeeds fully
/// when the symmetric matrix of the quadratic part is invertible; otherwise
/// cancels what the consistent part of the system allows and sets `partial`.
inline Normalized normalize(const Quad3& f) {
  const auto& F = f.field();
  detail::require_prime_field(F, "normalize");
  if (!f.is_quadratic()) throw Error(Errc::invalid_argument, "normalize needs a quadratic polynomial");
  const Elem two = F.from_int(2);
  // Gradient of the quadratic part is (2M) t with 2M = [[2d, a, b], [a, 2e, c], [b, c, 2g]].
  auto twice_m = [&](int i, int j) { return i == j ? F.mul(two, f.square(i)) : f.mixed(i, j); };
  std::array<std::array<Elem, 4>, 3> system{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) system[i][j] = twice_m(i, j);
    system[i][3] = F.neg(f.linear(i));
  }
  const auto [t, full_rank] = detail::solve3(F, system);

  Quad3 poly = f;
  for (int i = 0; i < 3; ++i) {
    Elem lin = f.linear(i);
    for (int j = 0; j < 3; ++j) lin = F.add(lin, F.mul(twice_m(i, j), t[j]));
    poly.set_slot(linear_slot(i), lin);
  }
  poly.set(Mono::one, Elem{});
  return {poly, t, f.evaluate(t[0], t[1], t[2]), !full_rank};
}

// ---------------------------------------------------------------------------
// Classification

enum class VerdictKind {
  not_quadratic,
  missing_variable,
  degenerate_additive,
  degenerate_composed_square,
  expander_partial_mixed,
  expander_full_mixed,
};

inline std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::not_quadratic: return "NotQuadratic";
    case VerdictKind::missing_variable: return "MissingVariable";
    case VerdictKind::degenerate_additive: return "DegenerateAdditive";
    case VerdictKind::degenerate_composed_square: return "DegenerateComposedSquare";
    case VerdictKind::expander_partial_mixed: return "ExpanderPartialMixed";
    case VerdictKind::expander_full_mixed: return "ExpanderFullMixed";
  }
  return "?";
}

/// How closely the chosen permutation matches the incidence construction's
/// coefficient hypotheses.
///  exact:      partial mixed: xy != 0, yz = 0, t(z) nonconstant.
///              full mixed: 4eg != c^2.
///  relaxed:    partial mixed: xy != 0, yz = 0, z enters only through xz.
///              full mixed: 4eg = c^2 but the fiber quadratic
///              (b^2 e - abc + a^2 g) y^2 + (bc - 2ag) v y + ... is not identically zero.
///  unresolved: no permutation satisfies either (singular quadratic part
///              whose linear terms cannot be translated away).
enum class RouteFit { exact, relaxed, unresolved };

inline std::string_view to_string(RouteFit r) {
  switch (r) {
    case RouteFit::exact: return "exact";
    case RouteFit::relaxed: return "relaxed";
    case RouteFit::unresolved: return "unresolved";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::not_quadratic;
  std::array<bool, 3> missing{};            // MissingVariable
  std::optional<LinearForm3> lambda;         // DegenerateComposedSquare
  std::optional<Univariate> outer;           // DegenerateComposedSquare: f = outer(lambda)
  std::optional<Perm3> perm;                 // Expander*
  RouteFit route = RouteFit::exact;          // Expander*
  Rational alpha{0}, beta{0};                // Expander*: 3/2 and 2/3

  bool is_expander() const noexcept {
    return kind == VerdictKind::expander_partial_mixed || kind == VerdictKind::expander_full_mixed;
  }
  bool is_degenerate() const noexcept {
    return kind == VerdictKind::degenerate_additive || kind == VerdictKind::degenerate_composed_square;
  }
};

namespace detail {

/// Rank-1 quadratic part mu * lambda^2 with linear part proportional to
/// lambda, i.e. f = g(lambda) for a univariate quadratic g.
inline std::optional<std::pair<LinearForm3, Univariate>> composed_square(const Quad3& f) {
  const auto& F = f.field();
  const Elem half = F.inv(F.from_int(2));
  std::array<std::array<Elem, 3>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = i == j ? f.square(i) : F.mul(f.mixed(i, j), half);
  }
  for (int r1 = 0; r1 < 3; ++r1) {
    for (int r2 = r1 + 1; r2 < 3; ++r2) {
      for (int c1 = 0; c1 < 3; ++c1) {
        for (int c2 = c1 + 1; c2 < 3; ++c2) {
          if (F.mul(m[r1][c1], m[r2][c2]) != F.mul(m[r1][c2], m[r2][c1])) return std::nullopt;
        }
      }
    }
  }
  // Symmetric rank 1: some diagonal entry is nonzero and M = row_i row_i^T / M_ii.
  int i = 0;
  while (i < 3 && m[i][i] == Elem{}) ++i;
  if (i == 3) return std::nullopt;
  std::array<Elem, 3> v = m[i];
  Elem mu = F.inv(m[i][i]);
  const Elem nu = F.div(f.linear(i), v[i]);
  for (int j = 0; j < 3; ++j) {
    if (f.linear(j) != F.mul(nu, v[j])) return std::nullopt;
  }
  // Scale lambda so its first nonzero coefficient is 1.
  int lead = 0;
  while (v[lead] == Elem{}) ++lead;
  const Elem s = v[lead];
  const Elem s_inv = F.inv(s);
  for (auto& e : v) e = F.mul(e, s_inv);
  LinearForm3 lambda{v[0], v[1], v[2], Elem{}};
  Univariate g{F.mul(mu, F.mul(s, s)), F.mul(nu, s), f.constant()};
  return std::pair{lambda, g};
}

inline bool partial_exact(const Quad3& h) {
  return h.mixed(0, 1) != Elem{} && h.mixed(1, 2) == Elem{} && h.t().degree() >= 1;
}

inline bool partial_relaxed(const Quad3& h) {
  return h.mixed(0, 1) != Elem{} && h.mixed(1, 2) == Elem{} && (h.t().degree() >= 1 || h.mixed(0, 2) != Elem{});
}

inline bool full_exact(const Quad3& h) {
  const auto& F = h.field();
  const Elem four_eg = F.mul(F.from_int(4), F.mul(h.square(1), h.square(2)));
  const Elem c = h.mixed(1, 2);
  return four_eg != F.mul(c, c);
}

inline bool full_relaxed(const Quad3& h) {
  const auto& F = h.field();
  const Elem a = h.mixed(0, 1), b = h.mixed(0, 2), c = h.mixed(1, 2);
  const Elem e = h.square(1), g = h.square(2);
  const Elem lead = F.add(F.sub(F.mul(F.mul(b, b), e), F.mul(F.mul(a, b), c)), F.mul(F.mul(a, a), g));
  const Elem lin = F.sub(F.mul(b, c), F.mul(F.from_int(2), F.mul(a, g)));
  return lead != Elem{} || lin != Elem{};
}

}  // namespace detail

/// Classifies a quadratic over F_p as non-quadratic, missing a variable,
/// degenerate (h(x)+k(y)+l(z) or g(linear form)), or an expander. Expander
/// verdicts carry the lexicographically first variable permutation that
/// brings f into the shape used by the incidence constructions.
inline Verdict classify(const Quad3& f) {
  detail::require_prime_field(f.field(), "classify");
  Verdict v;
  if (!f.is_quadratic()) {
    v.kind = VerdictKind::not_quadratic;
    return v;
  }
  const auto dep = f.depends_on();
  if (!dep[0] || !dep[1] || !dep[2]) {
    v.kind = VerdictKind::missing_variable;
    v.missing = {!dep[0], !dep[1], !dep[2]};
    return v;
  }
  const int mixed_terms = (f.mixed(0, 1) != Elem{}) + (f.mixed(0, 2) != Elem{}) + (f.mixed(1, 2) != Elem{});
  if (mixed_terms == 0) {
    v.kind = VerdictKind::degenerate_additive;
    return v;
  }
  if (auto witness = detail::composed_square(f)) {
    v.kind = VerdictKind::degenerate_composed_square;
    v.lambda = witness->first;
    v.outer = witness->second;
    return v;
  }

  v.alpha = Rational(3, 2);
  v.beta = Rational(2, 3);
  const bool full = mixed_terms == 3;
  v.kind = full ? VerdictKind::expander_full_mixed : VerdictKind::expander_partial_mixed;
  auto exact = full ? detail::full_exact : detail::partial_exact;
  auto relaxed = full ? detail::full_relaxed : detail::partial_relaxed;
  std::optional<Perm3> fallback;
  for (const auto& pi : Perm3::all()) {
    const Quad3 h = permute(f, pi);
    if (exact(h)) {
      v.perm = pi;
      v.route = RouteFit::exact;
      return v;
    }
    if (!fallback && relaxed(h)) fallback = pi;
  }
  v.perm = fallback.value_or(Perm3{});
  v.route = fallback ? RouteFit::relaxed : RouteFit::unresolved;
  return v;
}

// ---------------------------------------------------------------------------
// Text format: "x^2 - 2*x*y + y^2 + z", "(x - y)^2 + z", "(1+2*w)*x*y".

namespace detail {

using Exponents = std::array<int, 3>;
using SparsePoly = std::map<Exponents, Elem>;

class PolyParser {
 public:
  PolyParser(const FieldSpec& field, std::string_view text, int nvars)
      : field_(field), text_(text), nvars_(nvars) {}

  SparsePoly parse() {
    SparsePoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::parse, why + " at column " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char ch) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  SparsePoly add(SparsePoly a, const SparsePoly& b, bool negate) {
    for (const auto& [mono, c] : b) {
      Elem& slot = a[mono];
      slot = negate ? field_.sub(slot, c) : field_.add(slot, c);
    }
    prune(a);
    return a;
  }

  SparsePoly mul(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out;
    for (const auto& [ma, ca] : a) {
      for (const auto& [mb, cb] : b) {
        const Exponents m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
        if (m[0] + m[1] + m[2] > 2) fail("degree exceeds 2");
        Elem& slot = out[m];
        slot = field_.add(slot, field_.mul(ca, cb));
      }
    }
    prune(out);
    return out;
  }

  static void prune(SparsePoly& p) {
    for (auto it = p.begin(); it != p.end();) {
      it = it->second == Elem{} ? p.erase(it) : std::next(it);
    }
  }

  SparsePoly expr() {
    bool negate = false;
    if (eat('-')) negate = true;
    else eat('+');
    SparsePoly acc = add({}, term(), negate);
    for (;;) {
      if (eat('+')) acc = add(acc, term(), false);
      else if (eat('-')) acc = add(acc, term(), true);
      else return acc;
    }
  }

  SparsePoly term() {
    SparsePoly acc = power();
    while (eat('*')) acc = mul(acc, power());
    return acc;
  }

  SparsePoly power() {
    SparsePoly base = atom();
    if (eat('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const int exp = static_cast<int>(parse_int(text_.substr(start, pos_ - start)));
      SparsePoly acc{{Exponents{0, 0, 0}, field_.one()}};
      for (int i = 0; i < exp; ++i) acc = mul(acc, base);
      return acc;
    }
    return base;
  }

  SparsePoly atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      SparsePoly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const Elem c = field_.from_int(parse_int(text_.substr(start, pos_ - start)));
      SparsePoly p;
      if (c != Elem{}) p[{0, 0, 0}] = c;
      return p;
    }
    ++pos_;
    if (ch == 'w') {
      if (field_.kind() != Domain::quadratic_extension) fail("'w' only exists in the extension field");
      return {{Exponents{0, 0, 0}, field_.generator()}};
    }
    const int var = ch == 'x' ? 0 : ch == 'y' ? 1 : ch == 'z' ? 2 : -1;
    if (var < 0 || var >= nvars_) {
      --pos_;
      fail("unknown symbol '" + std::string(1, ch) + "'");
    }
    Exponents e{0, 0, 0};
    e[var] = 1;
    return {{e, field_.one()}};
  }

  const FieldSpec& field_;
  std::string_view text_;
  int nvars_;
  std::size_t pos_ = 0;
};

/// Coefficient text plus a flag telling whether it printed with a leading minus.
inline std::pair<std::string, bool> format_coeff(const FieldSpec& f, Elem c) {
  if (f.kind() == Domain::quadratic_extension && c.v != 0) return {"(" + format_elem(f, c) + ")", false};
  std::int64_t value = c.u;
  if (f.is_finite() && static_cast<std::uint64_t>(value) > f.p() / 2) value -= static_cast<std::int64_t>(f.p());
  if (value == INT64_MIN) return {"9223372036854775808", true};
  if (value < 0) return {std::to_string(-value), true};
  return {std::to_string(value), false};
}

inline std::string format_terms(const FieldSpec& f, const std::vector<std::pair<Elem, std::string>>& terms) {
  std::string out;
  for (const auto& [c, mono] : terms) {
    if (c == Elem{}) continue;
    auto [text, negative] = format_coeff(f, c);
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (mono.empty()) out += text;
    else if (text == "1") out += mono;
    else out += text + "*" + mono;
  }
  return out.empty() ? "0" : out;
}

}  // namespace detail

inline Quad3 parse_quad3(const FieldSpec& field, std::string_view text) {
  const auto sparse = detail::PolyParser(field, text, 3).parse();
  Quad3 q(field);
  for (const auto& [e, c] : sparse) {
    const int degree = e[0] + e[1] + e[2];
    std::size_t slot = 9;
    if (degree == 1) {
      slot = linear_slot(e[0] ? 0 : e[1] ? 1 : 2);
    } else if (degree == 2) {
      int vars[2], k = 0;
      for (int i = 0; i < 3; ++i) {
        for (int r = 0; r < e[i]; ++r) vars[k++] = i;
      }
      slot = vars[0] == vars[1] ? square_slot(vars[0]) : mixed_slot(vars[0], vars[1]);
    }
    q.set_slot(slot, c);
  }
  return q;
}

inline Quad2 parse_quad2(const FieldSpec& field, std::string_view text) {
  const auto sparse = detail::PolyParser(field, text, 2).parse();
  Quad2 g{field};
  for (const auto& [e, c] : sparse) {
    if (e == detail::Exponents{2, 0, 0}) g.xx = c;
    else if (e == detail::Exponents{0, 2, 0}) g.yy = c;
    else if (e == detail::Exponents{1, 1, 0}) g.xy = c;
    else if (e == detail::Exponents{1, 0, 0}) g.x = c;
    else if (e == detail::Exponents{0, 1, 0}) g.y = c;
    else g.one = c;
  }
  return g;
}

inline std::string to_string(const Quad3& q) {
  return detail::format_terms(q.field(), {{q[Mono::xx], "x^2"},
                                          {q[Mono::xy], "x*y"},
                                          {q[Mono::xz], "x*z"},
                                          {q[Mono::yy], "y^2"},
                                          {q[Mono::yz], "y*z"},
                                          {q[Mono::zz], "z^2"},
                                          {q[Mono::x], "x"},
                                          {q[Mono::y], "y"},
                                          {q[Mono::z], "z"},
                                          {q[Mono::one], ""}});
}

inline std::string to_string(const Quad2& g) {
  return detail::format_terms(g.field, {{g.xx, "x^2"}, {g.xy, "x*y"}, {g.yy, "y^2"}, {g.x, "x"}, {g.y, "y"}, {g.one, ""}});
}

inline std::string to_string(const FieldSpec& f, const LinearForm3& l) {
  return detail::format_terms(f, {{l.alpha, "x"}, {l.beta, "y"}, {l.delta, "z"}, {l.constant, ""}});
}

inline std::string to_string(const FieldSpec& f, const Univariate& u) {
  return detail::format_terms(f, {{u.c2, "u^2"}, {u.c1, "u"}, {u.c0, ""}});
}

inline std::string to_string(const Perm3& pi) {
  static constexpr char names[] = {'x', 'y', 'z'};
  return std::string{'(', names[pi.role[0]], ',', names[pi.role[1]], ',', names[pi.role[2]], ')'};
}

}  // namespace fflab
