#pragma once

// Brute-force referees. Each one enumerates the definition directly and
// shares nothing with the fast paths it checks beyond field arithmetic and
// polynomial evaluation.

#include <vector>

#include "fflab/quadpoly.hpp"
#include "fflab/sets.hpp"

namespace fflab::oracle {

/// True iff f = g(alpha x + beta y + delta z) as functions on F_p^3 for some
/// alpha, beta, delta, g0, g1, g2 in F_p, or f has no mixed monomial.
inline bool degenerate_oracle(const Quad3& f) {
  const auto& F = f.field();
  if (!F.is_prime_field()) throw Error(Errc::unsupported, "oracle needs a prime field");
  if (F.p() > 11) throw Error(Errc::resource_bound, "oracle limited to p <= 11");
  if (f.mixed(0, 1) == Elem{} && f.mixed(0, 2) == Elem{} && f.mixed(1, 2) == Elem{}) return true;

  const auto p = static_cast<std::int64_t>(F.p());
  std::vector<std::array<Elem, 3>> grid;
  std::vector<Elem> values;
  for (std::int64_t x = 0; x < p; ++x) {
    for (std::int64_t y = 0; y < p; ++y) {
      for (std::int64_t z = 0; z < p; ++z) {
        grid.push_back({Elem{x}, Elem{y}, Elem{z}});
        values.push_back(f(Elem{x}, Elem{y}, Elem{z}));
      }
    }
  }
  std::vector<Elem> lam(grid.size());
  for (std::int64_t al = 0; al < p; ++al) {
    for (std::int64_t be = 0; be < p; ++be) {
      for (std::int64_t de = 0; de < p; ++de) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const auto& [x, y, z] = grid[i];
          lam[i] = F.add(F.add(F.mul(Elem{al}, x), F.mul(Elem{be}, y)), F.mul(Elem{de}, z));
        }
        for (std::int64_t g2 = 0; g2 < p; ++g2) {
          for (std::int64_t g1 = 0; g1 < p; ++g1) {
            for (std::int64_t g0 = 0; g0 < p; ++g0) {
              const Univariate g{Elem{g2}, Elem{g1}, Elem{g0}};
              bool all = true;
              for (std::size_t i = 0; i < grid.size() && all; ++i) all = g(F, lam[i]) == values[i];
              if (all) return true;
            }
          }
        }
      }
    }
  }
  return false;
}

/// #{(x,y,z,x',y',z') in (A x B x C)^2 : f(x,y,z) = f(x',y',z')}, pair by pair.
inline std::uint64_t energy_bruteforce(const Quad3& f, const ESet& a, const ESet& b, const ESet& c) {
  if (a.size() * b.size() * c.size() > 10'000) throw Error(Errc::resource_bound, "brute-force energy limited to 10^4 triples");
  std::vector<Elem> values;
  for (const auto& x : a) {
    for (const auto& y : b) {
      for (const auto& z : c) values.push_back(f(x, y, z));
    }
  }
  std::uint64_t count = 0;
  for (const auto& v : values) {
    for (const auto& w : values) count += v == w;
  }
  return count;
}

/// Delta(A^d) from all pairs of points of A^d.
inline ESet distance_set_bruteforce(const ESet& a, int d) {
  if (d < 1 || d > 3) throw Error(Errc::invalid_argument, "brute-force distances need 1 <= d <= 3");
  const auto& F = a.field();
  std::uint64_t points = 1;
  for (int i = 0; i < d; ++i) points *= a.size();
  if (points * points > 10'000'000) throw Error(Errc::resource_bound, "brute-force distances limited to 10^7 pairs");
  if (a.empty()) return ESet(F);

  // Points of A^d as index tuples; coordinate squared differences are memoized.
  const std::size_t n = a.size();
  std::vector<Elem> sq(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Elem diff = F.sub(a[i], a[j]);
      sq[i * n + j] = F.mul(diff, diff);
    }
  }
  std::vector<std::size_t> cloud;  // points * d indices
  std::vector<std::size_t> digit(static_cast<std::size_t>(d), 0);
  for (std::uint64_t k = 0; k < points; ++k) {
    cloud.insert(cloud.end(), digit.begin(), digit.end());
    for (int i = 0; i < d && ++digit[i] == n; ++i) digit[i] = 0;
  }
  const bool finite = F.is_finite() && F.order() <= (std::uint64_t{1} << 24);
  std::vector<bool> seen(finite ? F.order() : 0);
  std::vector<Elem> out;
  for (std::uint64_t pi = 0; pi < points; ++pi) {
    const std::size_t* pc = &cloud[pi * d];
    for (std::uint64_t qi = 0; qi < points; ++qi) {
      const std::size_t* qc = &cloud[qi * d];
      Elem acc{};
      for (int i = 0; i < d; ++i) acc = F.add(acc, sq[pc[i] * n + qc[i]]);
      if (!finite) {
        out.push_back(acc);
      } else if (!seen[F.index(acc)]) {
        seen[F.index(acc)] = true;
        out.push_back(acc);
      }
    }
  }
  return ESet::from(F, std::move(out));
}

}  // namespace fflab::oracle
