#pragma once

// Point-plane incidences in F_p^3 and the two point/plane constructions that
// turn the energy of a quadratic into an incidence count.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <unordered_map>

#include "fflab/quadpoly.hpp"
#include "fflab/valueset.hpp"

namespace fflab {

struct Point3 {
  Elem x{}, y{}, z{};
  friend constexpr auto operator<=>(const Point3&, const Point3&) = default;
};

/// The plane u X + v Y + w Z = s, scaled so the first nonzero of (u, v, w) is 1.
struct Plane3 {
  Elem u{}, v{}, w{}, s{};
  friend constexpr auto operator<=>(const Plane3&, const Plane3&) = default;
};

/// base + t * dir; dir has leading coordinate 1 and base is zero in that
/// coordinate, so equal lines have equal representations.
struct Line3 {
  Point3 base, dir;
  friend constexpr auto operator<=>(const Line3&, const Line3&) = default;
};

namespace detail {

inline void require_incidence_field(const FieldSpec& f) {
  if (!f.is_prime_field()) throw Error(Errc::unsupported, "incidence geometry needs a prime field");
}

inline std::array<Elem, 3> coords(const Point3& p) { return {p.x, p.y, p.z}; }
inline Point3 point(const std::array<Elem, 3>& c) { return {c[0], c[1], c[2]}; }

struct Point3Hash {
  std::size_t operator()(const Point3& p) const noexcept {
    ElemHash h;
    return h(p.x) * 31 + h(p.y) * 17 + h(p.z);
  }
};

/// Scales a nonzero vector so its first nonzero coordinate is 1.
inline Point3 projective(const FieldSpec& f, Point3 d) {
  const auto c = coords(d);
  int lead = 0;
  while (lead < 3 && c[lead] == Elem{}) ++lead;
  if (lead == 3) throw Error(Errc::invalid_argument, "zero direction");
  const Elem inv = f.inv(c[lead]);
  return {f.mul(d.x, inv), f.mul(d.y, inv), f.mul(d.z, inv)};
}

}  // namespace detail

inline Plane3 make_plane(const FieldSpec& f, Elem u, Elem v, Elem w, Elem s) {
  detail::require_incidence_field(f);
  Elem lead = u != Elem{} ? u : v != Elem{} ? v : w;
  if (lead == Elem{}) throw Error(Errc::invalid_argument, "plane normal is zero");
  const Elem inv = f.inv(lead);
  return {f.mul(u, inv), f.mul(v, inv), f.mul(w, inv), f.mul(s, inv)};
}

inline bool on_plane(const FieldSpec& f, const Point3& p, const Plane3& pl) {
  return f.add(f.add(f.mul(pl.u, p.x), f.mul(pl.v, p.y)), f.mul(pl.w, p.z)) == pl.s;
}

inline Line3 make_line(const FieldSpec& f, const Point3& base, const Point3& dir) {
  detail::require_incidence_field(f);
  const Point3 d = detail::projective(f, dir);
  const auto dc = detail::coords(d);
  int lead = 0;
  while (dc[lead] == Elem{}) ++lead;
  auto b = detail::coords(base);
  const Elem shift = b[lead];
  for (int i = 0; i < 3; ++i) b[i] = f.sub(b[i], f.mul(shift, dc[i]));
  return {detail::point(b), d};
}

inline Line3 line_through(const FieldSpec& f, const Point3& p, const Point3& q) {
  if (p == q) throw Error(Errc::invalid_argument, "line through coincident points");
  return make_line(f, p, {f.sub(q.x, p.x), f.sub(q.y, p.y), f.sub(q.z, p.z)});
}

inline bool on_line(const FieldSpec& f, const Point3& p, const Line3& l) {
  const Point3 r{f.sub(p.x, l.base.x), f.sub(p.y, l.base.y), f.sub(p.z, l.base.z)};
  // r parallel to dir <=> cross product vanishes.
  return f.mul(r.y, l.dir.z) == f.mul(r.z, l.dir.y) && f.mul(r.z, l.dir.x) == f.mul(r.x, l.dir.z) &&
         f.mul(r.x, l.dir.y) == f.mul(r.y, l.dir.x);
}

inline bool line_in_plane(const FieldSpec& f, const Line3& l, const Plane3& pl) {
  const Elem dot = f.add(f.add(f.mul(pl.u, l.dir.x), f.mul(pl.v, l.dir.y)), f.mul(pl.w, l.dir.z));
  return dot == Elem{} && on_plane(f, l.base, pl);
}

/// |{(r, s) in R x S : r lies on s}|.
inline std::uint64_t count_incidences(const FieldSpec& f, std::span<const Point3> points, std::span<const Plane3> planes) {
  detail::require_incidence_field(f);
  std::uint64_t count = 0;
  for (const auto& pl : planes) {
    check_deadline();
    for (const auto& p : points) count += on_plane(f, p, pl);
  }
  return count;
}

struct Collinearity {
  std::uint64_t k_star = 0;
  std::optional<Line3> witness;
};

/// max over lines l of min(#points of R on l, #planes of S containing l).
/// Candidate lines are those through two points of R; a line meeting R at
/// most once contributes at most 1, which is attained iff some point of R lies
/// on some plane of S.
inline Collinearity collinearity_k(const FieldSpec& f, std::span<const Point3> points, std::span<const Plane3> planes,
                                   std::size_t max_points = 5000) {
  detail::require_incidence_field(f);
  if (points.size() > max_points) {
    throw Error(Errc::resource_bound, "collinearity search limited to " + std::to_string(max_points) + " points");
  }
  Collinearity best;
  std::unordered_map<Point3, std::pair<std::uint64_t, bool>, detail::Point3Hash> dirs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    check_deadline();
    dirs.clear();
    const Point3& p = points[i];
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      const Point3& q = points[j];
      auto& slot = dirs[detail::projective(f, {f.sub(q.x, p.x), f.sub(q.y, p.y), f.sub(q.z, p.z)})];
      ++slot.first;
      if (j < i) slot.second = true;  // already handled from an earlier anchor
    }
    for (const auto& [dir, info] : dirs) {
      if (info.second) continue;
      const std::uint64_t on = info.first + 1;
      if (on <= best.k_star) continue;
      const Line3 line = make_line(f, p, dir);
      std::uint64_t containing = 0;
      for (const auto& pl : planes) {
        if (line_in_plane(f, line, pl) && ++containing >= on) break;
      }
      const std::uint64_t value = std::min(on, containing);
      if (value > best.k_star) {
        best.k_star = value;
        best.witness = line;
      }
    }
  }
  if (best.k_star == 0) {
    for (const auto& pl : planes) {
      for (const auto& p : points) {
        if (!on_plane(f, p, pl)) continue;
        // Any direction inside the plane through p.
        const Point3 dir = (pl.u != Elem{} || pl.v != Elem{}) ? Point3{f.neg(pl.v), pl.u, Elem{}}
                                                               : Point3{f.one(), Elem{}, Elem{}};
        best.k_star = 1;
        best.witness = make_line(f, p, dir);
        return best;
      }
    }
  }
  return best;
}

struct RudnevReport {
  std::uint64_t incidences = 0;
  std::uint64_t k_star = 0;
  std::uint64_t k_used = 1;     // k_star + 1: the smallest k for which no line is k-rich on both sides
  double bound = 0;             // |R|^{1/2} |S| + k_used |S|
  double ratio = 0;             // incidences / bound
  std::size_t points = 0;
  std::size_t planes = 0;
  bool points_le_planes = true;  // |R| <= |S|
  bool points_le_p2 = true;      // |R| <= p^2
  std::optional<Line3> witness;
  std::optional<std::uint64_t> k_construction;  // construction-specific upper bound, if supplied
  std::optional<double> bound_construction;
};

inline RudnevReport rudnev_report(const FieldSpec& f, std::span<const Point3> points, std::span<const Plane3> planes,
                                  std::optional<std::uint64_t> k_construction = std::nullopt) {
  RudnevReport rep;
  rep.incidences = count_incidences(f, points, planes);
  const auto col = collinearity_k(f, points, planes);
  rep.k_star = col.k_star;
  rep.k_used = col.k_star + 1;
  rep.witness = col.witness;
  rep.points = points.size();
  rep.planes = planes.size();
  const double r = static_cast<double>(points.size());
  const double s = static_cast<double>(planes.size());
  rep.bound = std::sqrt(r) * s + static_cast<double>(rep.k_used) * s;
  rep.ratio = rep.bound > 0 ? static_cast<double>(rep.incidences) / rep.bound : 0.0;
  rep.points_le_planes = points.size() <= planes.size();
  rep.points_le_p2 = static_cast<double>(points.size()) <= static_cast<double>(f.p()) * static_cast<double>(f.p());
  if (k_construction) {
    rep.k_construction = k_construction;
    rep.bound_construction = std::sqrt(r) * s + static_cast<double>(*k_construction) * s;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Constructions

struct ConstructionStats {
  std::size_t point_multiset = 0;
  std::size_t distinct_points = 0;
  std::size_t plane_multiset = 0;
  std::size_t distinct_planes = 0;
  std::uint64_t max_point_fiber = 0;      // excluding triples with x = excluded_x
  std::uint64_t max_plane_fiber = 0;      // excluding triples with x' = excluded_x
  std::uint64_t max_point_fiber_all = 0;  // no exclusion
  std::uint64_t max_plane_fiber_all = 0;
  std::optional<Elem> excluded_x;         // partial-mixed: the single x where the z-dependence cancels
  bool excluded_zero_slice = false;       // full-mixed: b^2 e - abc + a^2 g = 0, so fibers with a y + b z = 0 are unbounded
  std::optional<std::uint64_t> slice_line_max;    // most points of R on a line inside some plane x = x0
  std::optional<std::uint64_t> slice_line_bound;  // 2|B| + |C|
};

struct Construction {
  std::vector<Point3> points;  // distinct, sorted
  std::vector<Plane3> planes;  // distinct, sorted
  ConstructionStats stats;
  std::uint64_t k_construction = 0;  // line-richness bound the proof uses
};

enum class ConstructionKind { partial_mixed, full_mixed };

inline std::string_view to_string(ConstructionKind k) {
  return k == ConstructionKind::partial_mixed ? "partial_mixed" : "full_mixed";
}

namespace detail {

template <typename Key>
struct FiberTable {
  std::map<Key, std::pair<std::uint64_t, std::uint64_t>> fibers;  // (all, non-excluded)
  std::size_t multiset = 0;

  void add(const Key& k, bool excluded) {
    auto& f = fibers[k];
    ++f.first;
    if (!excluded) ++f.second;
    ++multiset;
  }

  std::vector<Key> keys() const {
    std::vector<Key> out;
    out.reserve(fibers.size());
    for (const auto& [k, _] : fibers) out.push_back(k);
    return out;
  }

  std::pair<std::uint64_t, std::uint64_t> max_fibers() const {
    std::uint64_t all = 0, kept = 0;
    for (const auto& [_, f] : fibers) {
      all = std::max(all, f.first);
      kept = std::max(kept, f.second);
    }
    return {all, kept};
  }
};

inline void require_sets(const Quad3& f, const ESet& a, const ESet& b, const ESet& c) {
  require_incidence_field(f.field());
  if (!(a.field() == f.field() && b.field() == f.field() && c.field() == f.field())) {
    throw Error(Errc::domain_mismatch, "polynomial and sets live in different domains");
  }
}

/// Most points of a planar point set (given as (Y, Z) pairs) on one line.
inline std::uint64_t max_collinear_2d(const FieldSpec& f, const std::vector<std::pair<Elem, Elem>>& pts) {
  if (pts.size() <= 2) return pts.size();
  std::uint64_t best = 2;
  std::map<std::pair<Elem, Elem>, std::uint64_t> dirs;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    dirs.clear();
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Elem dy = f.sub(pts[j].first, pts[i].first), dz = f.sub(pts[j].second, pts[i].second);
      const Elem inv = f.inv(dy != Elem{} ? dy : dz);
      best = std::max(best, 1 + ++dirs[{f.mul(dy, inv), f.mul(dz, inv)}]);
    }
  }
  return best;
}

inline void fill_stats(ConstructionStats& st, const FiberTable<Point3>& pts, const FiberTable<Plane3>& pls) {
  st.point_multiset = pts.multiset;
  st.distinct_points = pts.fibers.size();
  st.plane_multiset = pls.multiset;
  st.distinct_planes = pls.fibers.size();
  std::tie(st.max_point_fiber_all, st.max_point_fiber) = pts.max_fibers();
  std::tie(st.max_plane_fiber_all, st.max_plane_fiber) = pls.max_fibers();
}

}  // namespace detail

/// True when f = a xy + b xz + r(x) + s(y) + t(z) with a != 0 and z present
/// (through t, or through b xz when t is constant).
inline bool matches_partial_mixed(const Quad3& f) { return detail::partial_relaxed(f); }

/// True when f = a xy + b xz + c yz + d x^2 + e y^2 + g z^2 (+ constant) with
/// a, b, c nonzero and 4eg != c^2.
inline bool matches_full_mixed(const Quad3& f) {
  for (int i = 0; i < 3; ++i) {
    if (f.linear(i) != Elem{}) return false;
  }
  return f.mixed(0, 1) != Elem{} && f.mixed(0, 2) != Elem{} && f.mixed(1, 2) != Elem{} && detail::full_exact(f);
}

/// Points (x, y', b x z + r(x) + t(z) - s(y')) over A x B x C and planes
/// a y X - a x' Y + Z = b x' z' + r(x') + t(z') - s(y) over A x B x C. A solution
/// of f(x,y,z) = f(x',y',z') is exactly an incidence between the two.
inline Construction build_partial_mixed(const Quad3& f, const ESet& a_set, const ESet& b_set, const ESet& c_set) {
  detail::require_sets(f, a_set, b_set, c_set);
  if (!matches_partial_mixed(f)) throw Error(Errc::pattern_mismatch, "polynomial is not of the form a xy + b xz + r(x) + s(y) + t(z)");
  const auto& F = f.field();
  const Elem a = f.mixed(0, 1), b = f.mixed(0, 2);
  const auto r = f.r(), s = f.s(), t = f.t();

  Construction out;
  // With t linear (or constant) the z-coefficient b x + t1 vanishes at one x.
  if (t.c2 == Elem{} && b != Elem{}) {
    const Elem x0 = F.neg(F.div(t.c1, b));
    if (a_set.contains(x0)) out.stats.excluded_x = x0;
  }
  const auto excluded = [&](Elem x) { return out.stats.excluded_x && *out.stats.excluded_x == x; };

  detail::FiberTable<Point3> pts;
  detail::FiberTable<Plane3> pls;
  for (const auto& x : a_set) {
    check_deadline();
    const Elem rx = r(F, x);
    for (const auto& y : b_set) {
      const Elem sy = s(F, y);
      const Elem u = F.mul(a, y);
      const Elem v = F.neg(F.mul(a, x));
      for (const auto& z : c_set) {
        const Elem third = F.sub(F.add(F.add(F.mul(F.mul(b, x), z), rx), t(F, z)), sy);
        // Read (x, y, z) once as the point triple (x, y', z) and once as the plane triple (x', y, z').
        pts.add({x, y, third}, excluded(x));
        pls.add(make_plane(F, u, v, F.one(), third), excluded(x));
      }
    }
  }
  detail::fill_stats(out.stats, pts, pls);
  out.points = pts.keys();
  out.planes = pls.keys();
  out.k_construction = std::max(a_set.size(), b_set.size());
  return out;
}

/// Points (x, a y' + b z', d x^2 - (e y'^2 + c y' z' + g z'^2)) and planes
/// (a y + b z) X - x' Y + Z = d x'^2 - (e y^2 + c y z + g z^2).
inline Construction build_full_mixed(const Quad3& f, const ESet& a_set, const ESet& b_set, const ESet& c_set,
                              bool slice_stats = false) {
  detail::require_sets(f, a_set, b_set, c_set);
  if (!matches_full_mixed(f)) {
    throw Error(Errc::pattern_mismatch, "polynomial is not a xy + b xz + c yz + d x^2 + e y^2 + g z^2 with abc != 0, 4eg != c^2");
  }
  const auto& F = f.field();
  const Elem a = f.mixed(0, 1), b = f.mixed(0, 2), c = f.mixed(1, 2);
  const Elem d = f.square(0), e = f.square(1), g = f.square(2);

  // The fiber over a point (u, v, w) solves
  // (b^2 e - abc + a^2 g) y^2 + (bc - 2ag) v y + (b^2 w - b^2 d u^2 + g v^2) = 0,
  // which is identically zero when the leading coefficient and v both vanish.
  const Elem lead = F.add(F.sub(F.mul(F.mul(b, b), e), F.mul(F.mul(a, b), c)), F.mul(F.mul(a, a), g));
  const bool zero_slice = lead == Elem{};

  detail::FiberTable<Point3> pts;
  detail::FiberTable<Plane3> pls;
  for (const auto& x : a_set) {
    check_deadline();
    const Elem dx2 = F.mul(d, F.mul(x, x));
    for (const auto& y : b_set) {
      for (const auto& z : c_set) {
        const Elem lin = F.add(F.mul(a, y), F.mul(b, z));
        const Elem quad = F.add(F.add(F.mul(e, F.mul(y, y)), F.mul(c, F.mul(y, z))), F.mul(g, F.mul(z, z)));
        const Elem third = F.sub(dx2, quad);
        const bool excluded = zero_slice && lin == Elem{};
        pts.add({x, lin, third}, excluded);
        pls.add(make_plane(F, lin, F.neg(x), F.one(), third), excluded);
      }
    }
  }
  Construction out;
  out.stats.excluded_zero_slice = zero_slice;
  detail::fill_stats(out.stats, pts, pls);
  out.points = pts.keys();
  out.planes = pls.keys();
  out.k_construction = std::max(a_set.size(), 2 * b_set.size() + c_set.size());
  if (slice_stats) {
    std::map<Elem, std::vector<std::pair<Elem, Elem>>> slices;
    for (const auto& p : out.points) slices[p.x].push_back({p.y, p.z});
    std::uint64_t best = 0;
    for (const auto& [_, slice] : slices) best = std::max(best, detail::max_collinear_2d(F, slice));
    out.stats.slice_line_max = best;
    out.stats.slice_line_bound = 2 * b_set.size() + c_set.size();
  }
  return out;
}

inline Construction build(ConstructionKind kind, const Quad3& f, const ESet& a, const ESet& b, const ESet& c) {
  return kind == ConstructionKind::partial_mixed ? build_partial_mixed(f, a, b, c) : build_full_mixed(f, a, b, c);
}

/// A polynomial and sets rewritten into the shape a construction accepts.
/// The rewrite is a bijection on triples that shifts every value by `offset`,
/// so value-set sizes and energies are unchanged.
struct LemmaInstance {
  ConstructionKind kind;
  Quad3 poly;
  ESet a, b, c;
  Elem offset;
};

/// Classifies f, permutes variables (and sets) into the construction's
/// pattern, and for the full-mixed case first translates away linear terms.
inline LemmaInstance lemma_instance(const Quad3& f, const ESet& a, const ESet& b, const ESet& c) {
  detail::require_sets(f, a, b, c);
  const Verdict verdict = classify(f);
  if (!verdict.is_expander()) {
    throw Error(Errc::pattern_mismatch, "no incidence construction for verdict " + std::string(to_string(verdict.kind)));
  }
  const auto& F = f.field();
  const std::array<const ESet*, 3> sets{&a, &b, &c};
  if (verdict.kind == VerdictKind::expander_partial_mixed) {
    const Perm3 pi = *verdict.perm;
    return {ConstructionKind::partial_mixed, permute(f, pi), *sets[pi.role[0]], *sets[pi.role[1]], *sets[pi.role[2]], Elem{}};
  }
  const Normalized n = normalize(f);
  for (int i = 0; i < 3; ++i) {
    if (n.poly.linear(i) != Elem{}) throw Error(Errc::pattern_mismatch, "linear terms cannot be translated away");
  }
  // f(x) = poly(x - t) + constant, so f(A x B x C) = poly((A - t_x) x ...) + constant.
  std::array<ESet, 3> shifted{ESet(F), ESet(F), ESet(F)};
  for (int i = 0; i < 3; ++i) {
    std::vector<Elem> moved;
    for (const auto& x : *sets[i]) moved.push_back(F.sub(x, n.translation[i]));
    shifted[i] = ESet::from(F, std::move(moved));
  }
  for (const auto& pi : Perm3::all()) {
    const Quad3 h = permute(n.poly, pi);
    if (matches_full_mixed(h)) {
      return {ConstructionKind::full_mixed, h, shifted[pi.role[0]], shifted[pi.role[1]], shifted[pi.role[2]], n.constant};
    }
  }
  throw Error(Errc::pattern_mismatch, "no permutation satisfies 4eg != c^2");
}

struct Sandwich {
  std::uint64_t incidences = 0;
  std::uint64_t energy = 0;
  bool holds = false;  // I <= E <= 4 I
  std::optional<Elem> excluded_x;  // partial-mixed only; fibers over this x are unbounded
  bool excluded_zero_slice = false;  // full-mixed only; fibers with a y + b z = 0 are unbounded
};

/// Builds the construction on (f, A, B, C), counts incidences between its
/// distinct points and planes, and compares with the energy of f.
inline Sandwich sandwich_check(const Quad3& f, const ESet& a, const ESet& b, const ESet& c, ConstructionKind kind,
                               const EvalBudget& budget = {}) {
  const Construction con = build(kind, f, a, b, c);
  Sandwich out;
  out.incidences = count_incidences(f.field(), con.points, con.planes);
  out.energy = energy(f, a, b, c, budget).energy;
  out.holds = out.incidences <= out.energy && out.energy <= 4 * out.incidences;
  out.excluded_x = con.stats.excluded_x;
  out.excluded_zero_slice = con.stats.excluded_zero_slice;
  return out;
}

}  // namespace fflab
