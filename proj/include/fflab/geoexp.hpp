#pragma once

// Distance sets and dot-product sets of Cartesian products A^d, built as
// iterated sumsets of two-variable quadratic images, plus growth tables that
// compare measured sizes with the predicted exponents.

#include <cmath>
#include <span>
#include <vector>

#include "fflab/quadpoly.hpp"
#include "fflab/sets.hpp"

namespace fflab {

/// g(A x A).
inline ESet quad2_image(const Quad2& g, const ESet& a) {
  if (!(g.field == a.field())) throw Error(Errc::domain_mismatch, "polynomial and set live in different domains");
  const auto& F = a.field();
  if (dense_eligible(F)) {
    DenseBitset bits(F.order());
    for (const auto& x : a) {
      check_deadline();
      for (const auto& y : a) bits.set(F.index(g(x, y)));
    }
    return ESet::from_bitset(F, bits);
  }
  std::vector<Elem> out;
  out.reserve(a.size() * a.size());
  for (const auto& x : a) {
    for (const auto& y : a) out.push_back(g(x, y));
  }
  return ESet::from(F, std::move(out));
}

/// (A - A)^2: the one-dimensional distance set.
inline ESet squared_differences(const ESet& a) { return image(difference_set(a, a), Univariate::square()); }

/// Delta(A^d) = (A - A)^2 + ... + (A - A)^2 (d summands).
inline ESet distance_set(const ESet& a, int d) {
  if (d < 1) throw Error(Errc::invalid_argument, "dimension must be >= 1");
  return iterated_sumset(squared_differences(a), d);
}

/// Pi(A^d) = A.A + ... + A.A (d summands).
inline ESet dot_set(const ESet& a, int d) {
  if (d < 1) throw Error(Errc::invalid_argument, "dimension must be >= 1");
  return iterated_sumset(product_set(a, a), d);
}

/// Value set of G_k = g_1(x_1, y_1) + ... + g_k(x_k, y_k) on A^{2k}.
inline ESet iterated_g_sum(std::span<const Quad2> gs, const ESet& a) {
  if (gs.empty()) throw Error(Errc::invalid_argument, "need at least one polynomial");
  for (const auto& g : gs) {
    if (!g.eligible()) throw Error(Errc::ineligible, to_string(g) + " has no xy term");
  }
  ESet acc = quad2_image(gs.front(), a);
  const auto order = a.field().order();
  for (std::size_t i = 1; i < gs.size(); ++i) {
    if (order != 0 && acc.size() == order) break;
    acc = sumset(acc, quad2_image(gs[i], a));
  }
  return acc;
}

/// g(A x A) + C.
inline ESet g_plus_c(const Quad2& g, const ESet& a, const ESet& c) {
  if (!g.eligible()) throw Error(Errc::ineligible, to_string(g) + " has no xy term");
  return sumset(quad2_image(g, a), c);
}

struct SumProduct {
  std::size_t difference = 0;  // |A - A|
  std::size_t product = 0;     // |A . A|
  std::size_t max = 0;
};

inline SumProduct sum_product_pair(const ESet& a) {
  SumProduct sp;
  sp.difference = difference_set(a, a).size();
  sp.product = product_set(a, a).size();
  sp.max = std::max(sp.difference, sp.product);
  return sp;
}

enum class GrowthStatistic { distance, dot, max_of_both };

inline std::string_view to_string(GrowthStatistic s) {
  switch (s) {
    case GrowthStatistic::distance: return "distance";
    case GrowthStatistic::dot: return "dot";
    case GrowthStatistic::max_of_both: return "max_proxy";
  }
  return "?";
}

/// 2 - 1/2^{d-1}.
inline Rational tower_exponent(int d) { return Rational(2) - Rational(1, std::int64_t{1} << (d - 1)); }

/// 2 - 1/(5 * 2^{d-3}); equals 6/5 at d = 1.
inline Rational max_proxy_exponent(int d) {
  if (d >= 3) return Rational(2) - Rational(1, 5 * (std::int64_t{1} << (d - 3)));
  return Rational(2) - Rational(std::int64_t{1} << (3 - d), 5);
}

inline double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

struct GrowthRow {
  int d = 1;
  std::uint64_t cardinality = 0;
  Rational predicted_exponent{0};
  double ratio = 0;        // cardinality / |A|^exponent, or cardinality / p once saturated
  bool saturated = false;  // cardinality equals the field size
  std::optional<std::uint64_t> distance_cardinality;  // max_of_both only
  std::optional<std::uint64_t> dot_cardinality;
};

/// Rows d = 1..d_max. For max_of_both the row reports both pure towers and
/// their pointwise maximum (a proxy for the adaptive choice between them).
inline std::vector<GrowthRow> growth_table(const ESet& a, int d_max, GrowthStatistic stat) {
  if (d_max < 1) throw Error(Errc::invalid_argument, "d_max must be >= 1");
  const auto order = a.field().order();
  const ESet dist_base = stat == GrowthStatistic::dot ? ESet(a.field()) : squared_differences(a);
  const ESet dot_base = stat == GrowthStatistic::distance ? ESet(a.field()) : product_set(a, a);
  ESet dist = dist_base, dot = dot_base;
  std::vector<GrowthRow> rows;
  for (int d = 1; d <= d_max; ++d) {
    if (d > 1) {
      if (stat != GrowthStatistic::dot && !(order != 0 && dist.size() == order)) dist = sumset(dist, dist_base);
      if (stat != GrowthStatistic::distance && !(order != 0 && dot.size() == order)) dot = sumset(dot, dot_base);
    }
    GrowthRow row;
    row.d = d;
    switch (stat) {
      case GrowthStatistic::distance:
        row.cardinality = dist.size();
        row.predicted_exponent = tower_exponent(d);
        break;
      case GrowthStatistic::dot:
        row.cardinality = dot.size();
        row.predicted_exponent = tower_exponent(d);
        break;
      case GrowthStatistic::max_of_both:
        row.distance_cardinality = dist.size();
        row.dot_cardinality = dot.size();
        row.cardinality = std::max(dist.size(), dot.size());
        row.predicted_exponent = max_proxy_exponent(d);
        break;
    }
    row.saturated = order != 0 && row.cardinality == order;
    if (row.saturated) {
      row.ratio = static_cast<double>(row.cardinality) / static_cast<double>(order);
    } else if (!a.empty()) {
      row.ratio = static_cast<double>(row.cardinality) /
                  std::pow(static_cast<double>(a.size()), to_double(row.predicted_exponent));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fflab
