#pragma once

// Seeded ground-set generators.

#include <algorithm>
#include <string>
#include <unordered_set>

#include "fflab/rng.hpp"
#include "fflab/sets.hpp"

namespace fflab {

enum class GeneratorKind { random_subset, interval, geometric, subfield };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::random_subset;
  std::uint64_t n = 0;
  std::int64_t base = 2;                    // geometric
  std::optional<std::int64_t> lo, hi;       // random_subset on the integer line; default [1, n^2]
  std::uint64_t seed = 0;
};

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::random_subset: return "random_subset";
    case GeneratorKind::interval: return "interval";
    case GeneratorKind::geometric: return "geometric";
    case GeneratorKind::subfield: return "subfield";
  }
  return "?";
}

inline GeneratorKind parse_generator_kind(std::string_view s) {
  if (s == "random_subset") return GeneratorKind::random_subset;
  if (s == "interval") return GeneratorKind::interval;
  if (s == "geometric") return GeneratorKind::geometric;
  if (s == "subfield") return GeneratorKind::subfield;
  throw Error(Errc::parse, "unknown generator '" + std::string(s) + "'");
}

/// Short label for reports, e.g. "geometric(3)".
inline std::string describe(const GeneratorSpec& g) {
  std::string out(to_string(g.kind));
  if (g.kind == GeneratorKind::geometric) out += "(" + std::to_string(g.base) + ")";
  if (g.kind == GeneratorKind::random_subset && g.lo && g.hi) {
    out += "[" + std::to_string(*g.lo) + ".." + std::to_string(*g.hi) + "]";
  }
  return out;
}

namespace detail {

/// Floyd's sampling: `count` distinct indices from [0, range).
inline std::vector<std::uint64_t> sample_indices(std::uint64_t range, std::uint64_t count, SplitMix64& rng) {
  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t j = range - count; j < range; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
  return out;
}

[[noreturn]] inline void infeasible(const std::string& what) { throw Error(Errc::infeasible_generator, what); }

}  // namespace detail

/// Deterministic in (spec, field). Every generator returns exactly spec.n
/// elements except subfield, which returns the p elements of F_p inside F_{p^2}.
inline ESet generate(const GeneratorSpec& spec, const FieldSpec& field) {
  const std::uint64_t n = spec.n;
  const bool finite = field.is_finite();
  switch (spec.kind) {
    case GeneratorKind::subfield: {
      if (field.kind() != Domain::quadratic_extension) {
        detail::infeasible("subfield generator needs a quadratic extension field");
      }
      std::vector<Elem> out;
      for (std::uint64_t u = 0; u < field.p(); ++u) out.push_back(Elem{static_cast<std::int64_t>(u)});
      return ESet::from(field, std::move(out));
    }
    case GeneratorKind::interval: {
      if (finite && n > field.order()) detail::infeasible("interval of length " + std::to_string(n) + " exceeds field size");
      std::vector<Elem> out;
      for (std::uint64_t i = 1; i <= n; ++i) out.push_back(field.from_int(static_cast<std::int64_t>(i)));
      return ESet::from(field, std::move(out));
    }
    case GeneratorKind::geometric: {
      std::vector<Elem> out;
      Elem term = field.one();
      const Elem base = field.from_int(spec.base);
      for (std::uint64_t i = 0; i < n; ++i) {
        out.push_back(term);
        if (i + 1 < n) term = field.mul(term, base);
      }
      ESet s = ESet::from(field, std::move(out));
      if (s.size() != n) {
        detail::infeasible("base " + std::to_string(spec.base) + " has too small a multiplicative order for N = " +
                           std::to_string(n));
      }
      return s;
    }
    case GeneratorKind::random_subset: {
      SplitMix64 rng(spec.seed);
      if (finite) {
        if (n > field.order()) detail::infeasible("N = " + std::to_string(n) + " exceeds field size");
        std::vector<Elem> out;
        for (auto i : detail::sample_indices(field.order(), n, rng)) out.push_back(field.from_index(i));
        return ESet::from(field, std::move(out));
      }
      const std::int64_t lo = spec.lo.value_or(1);
      const std::int64_t hi = spec.hi.value_or(static_cast<std::int64_t>(std::max<std::uint64_t>(n * n, 1)));
      if (hi < lo || static_cast<std::uint64_t>(hi - lo) + 1 < n) detail::infeasible("range too small for N distinct integers");
      std::vector<Elem> out;
      for (auto i : detail::sample_indices(static_cast<std::uint64_t>(hi - lo) + 1, n, rng)) {
        out.push_back(Elem{lo + static_cast<std::int64_t>(i)});
      }
      return ESet::from(field, std::move(out));
    }
  }
  throw Error(Errc::invalid_argument, "unknown generator");
}

}  // namespace fflab
