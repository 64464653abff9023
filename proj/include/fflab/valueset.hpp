#pragma once

// Value sets f(A x B x C), the solution-counting energy
// E = #{f(x,y,z) = f(x',y',z')}, and the quadruple counts behind the
// |A + A^2| and max(|A + A|, |A^2 + A^2|) arguments.

#include <boost/multiprecision/cpp_int.hpp>
#include <unordered_map>

#include "fflab/quadpoly.hpp"
#include "fflab/sets.hpp"

namespace fflab {

using BigInt = boost::multiprecision::cpp_int;

struct EvalBudget {
  std::uint64_t max_evaluations = 200'000'000;
};

struct EnergyReport {
  std::uint64_t energy = 0;                // sum over values v of m(v)^2
  std::uint64_t value_histogram_size = 0;  // total multiplicity, |A||B||C|
  std::uint64_t value_set_size = 0;
  BigInt cs_lhs;                           // |A|^2 |B|^2 |C|^2
  BigInt cs_rhs;                           // E * |f(A x B x C)|

  bool cauchy_schwarz_holds() const { return cs_lhs <= cs_rhs; }
};

namespace detail {

inline std::uint64_t checked_triple_count(const Quad3& f, const ESet& a, const ESet& b, const ESet& c,
                                          const EvalBudget& budget) {
  if (!(a.field() == f.field() && b.field() == f.field() && c.field() == f.field())) {
    throw Error(Errc::domain_mismatch, "polynomial and sets live in different domains");
  }
  const auto n = static_cast<unsigned __int128>(a.size()) * b.size() * c.size();
  if (n > budget.max_evaluations) {
    throw Error(Errc::resource_bound, "triple count exceeds evaluation budget of " +
                                          std::to_string(budget.max_evaluations));
  }
  return static_cast<std::uint64_t>(n);
}

/// Calls sink(f(x, y, z)) for every triple, splitting f as
/// [r(x) + s(y) + a xy] + [b x + c y] z + t(z) so the inner loop is one
/// multiply-add plus a table lookup.
template <typename Sink>
void for_each_value(const Quad3& f, const ESet& a, const ESet& b, const ESet& c, Sink&& sink) {
  const auto& F = f.field();
  const auto r = f.r();
  const auto s = f.s();
  const auto t = f.t();
  std::vector<Elem> t_of_z;
  t_of_z.reserve(c.size());
  for (const auto& z : c) t_of_z.push_back(t(F, z));
  const Elem cxy = f.mixed(0, 1), cxz = f.mixed(0, 2), cyz = f.mixed(1, 2);
  for (const auto& x : a) {
    check_deadline();
    const Elem rx = r(F, x);
    const Elem bx = F.mul(cxz, x);
    for (const auto& y : b) {
      const Elem head = F.add(F.add(rx, s(F, y)), F.mul(F.mul(cxy, x), y));
      const Elem slope = F.add(bx, F.mul(cyz, y));
      for (std::size_t k = 0; k < c.size(); ++k) sink(F.add(head, F.add(F.mul(slope, c[k]), t_of_z[k])));
    }
  }
}

/// Multiplicity histogram of f over A x B x C, dense for small finite fields.
class ValueHistogram {
 public:
  explicit ValueHistogram(const FieldSpec& field) : field_(field), dense_(dense_eligible(field)) {
    if (dense_) counts_.assign(field.order(), 0);
  }

  void add(Elem v) {
    if (dense_) ++counts_[field_.index(v)];
    else ++sparse_[v];
  }

  template <typename F>
  void for_each(F&& fn) const {
    if (dense_) {
      for (std::uint64_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] != 0) fn(field_.from_index(i), static_cast<std::uint64_t>(counts_[i]));
      }
    } else {
      for (const auto& [v, m] : sparse_) fn(v, m);
    }
  }

 private:
  FieldSpec field_;
  bool dense_;
  std::vector<std::uint32_t> counts_;
  std::unordered_map<Elem, std::uint64_t, ElemHash> sparse_;
};

}  // namespace detail

/// {f(a, b, c) : a in A, b in B, c in C}.
inline ESet value_set(const Quad3& f, const ESet& a, const ESet& b, const ESet& c, const EvalBudget& budget = {}) {
  detail::checked_triple_count(f, a, b, c, budget);
  const auto& F = f.field();
  if (dense_eligible(F)) {
    DenseBitset bits(F.order());
    detail::for_each_value(f, a, b, c, [&](Elem v) { bits.set(F.index(v)); });
    return ESet::from_bitset(F, bits);
  }
  std::vector<Elem> values;
  values.reserve(a.size() * b.size() * c.size());
  detail::for_each_value(f, a, b, c, [&](Elem v) { values.push_back(v); });
  return ESet::from(F, std::move(values));
}

/// One histogram pass, then E = sum of squared multiplicities.
inline EnergyReport energy(const Quad3& f, const ESet& a, const ESet& b, const ESet& c, const EvalBudget& budget = {}) {
  const std::uint64_t triples = detail::checked_triple_count(f, a, b, c, budget);
  detail::ValueHistogram hist(f.field());
  detail::for_each_value(f, a, b, c, [&](Elem v) { hist.add(v); });
  EnergyReport report;
  report.value_histogram_size = triples;
  hist.for_each([&](Elem, std::uint64_t m) {
    report.energy += m * m;
    ++report.value_set_size;
  });
  const BigInt n = triples;
  report.cs_lhs = n * n;
  report.cs_rhs = BigInt(report.energy) * report.value_set_size;
  return report;
}

struct QuadrupleCount {
  std::uint64_t count = 0;
  std::uint64_t threshold = 0;  // |A|^3

  bool holds() const noexcept { return count >= threshold; }
};

/// #{(x, y, z, t) in X x Y x Z x T : (x - y)^2 + z = t}.
inline std::uint64_t count_square_quadruples(const ESet& xs, const ESet& ys, const ESet& zs, const ESet& ts,
                                             const EvalBudget& budget = {}) {
  const auto& F = xs.field();
  for (const ESet* s : {&ys, &zs, &ts}) {
    if (!(s->field() == F)) throw Error(Errc::domain_mismatch, "sets live in different domains");
  }
  const auto n = static_cast<unsigned __int128>(xs.size()) * ys.size() * zs.size();
  if (n > budget.max_evaluations) throw Error(Errc::resource_bound, "quadruple enumeration exceeds budget");
  const bool dense = dense_eligible(F);
  const DenseBitset t_bits = dense ? ts.to_bitset() : DenseBitset{};
  std::uint64_t count = 0;
  for (const auto& x : xs) {
    check_deadline();
    for (const auto& y : ys) {
      const Elem diff = F.sub(x, y);
      const Elem sq = F.mul(diff, diff);
      for (const auto& z : zs) {
        const Elem t = F.add(sq, z);
        count += dense ? t_bits.test(F.index(t)) : ts.contains(t);
      }
    }
  }
  return count;
}

namespace detail {

inline void require_prime_or_integer(const ESet& a) {
  if (a.field().kind() == Domain::quadratic_extension) {
    throw Error(Errc::unsupported, "quadruple counts need a prime field or the integer line");
  }
}

}  // namespace detail

/// Quadruples in (A + A^2) x A^2 x A x (A + A^2); every (a, b, c) in A^3
/// yields the solution (a + b^2, b^2, c, c + a^2).
inline QuadrupleCount count_eq2_quadruples(const ESet& a, const EvalBudget& budget = {}) {
  detail::require_prime_or_integer(a);
  const ESet squares = image(a, Univariate::square());
  const ESet shifted = sumset(a, squares);
  const auto n = static_cast<std::uint64_t>(a.size());
  return {count_square_quadruples(shifted, squares, a, shifted, budget), n * n * n};
}

/// Quadruples in (A + A) x A x A^2 x (A^2 + A^2); (a + b, b, c^2, a^2 + c^2) is
/// a solution for every (a, b, c).
inline QuadrupleCount count_sum_square_quadruples(const ESet& a, const EvalBudget& budget = {}) {
  detail::require_prime_or_integer(a);
  const ESet squares = image(a, Univariate::square());
  const ESet sums = sumset(a, a);
  const ESet square_sums = sumset(squares, squares);
  const auto n = static_cast<std::uint64_t>(a.size());
  return {count_square_quadruples(sums, a, squares, square_sums, budget), n * n * n};
}

}  // namespace fflab
