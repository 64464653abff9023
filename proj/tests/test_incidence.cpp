#include "fflab/incidence.hpp"

#include <gtest/gtest.h>

#include <set>

#include "fflab/oracles.hpp"
#include "test_support.hpp"

namespace fflab {
namespace {

const FieldSpec F7 = FieldSpec::prime(7);
const FieldSpec F101 = FieldSpec::prime(101);

Point3 pt(std::int64_t x, std::int64_t y, std::int64_t z) { return {Elem{x}, Elem{y}, Elem{z}}; }

Plane3 plane(const FieldSpec& f, std::int64_t u, std::int64_t v, std::int64_t w, std::int64_t s) {
  return make_plane(f, f.from_int(u), f.from_int(v), f.from_int(w), f.from_int(s));
}

// Incidence count by testing every pair against the raw plane equation.
std::uint64_t incidences_by_equation(const FieldSpec& f, const std::vector<Point3>& r, const std::vector<Plane3>& s) {
  std::uint64_t n = 0;
  for (const auto& p : r)
    for (const auto& pl : s)
      n += f.add(f.add(f.mul(pl.u, p.x), f.mul(pl.v, p.y)), f.mul(pl.w, p.z)) == pl.s;
  return n;
}

// Brute-force fiber sizes: how many (x, y, z) triples land on each point.
std::uint64_t max_fiber_by_search(const std::vector<std::pair<Point3, Elem>>& tagged, std::optional<Elem> skip) {
  std::map<Point3, std::uint64_t> counts;
  for (const auto& [p, x] : tagged) {
    if (skip && *skip == x) continue;
    ++counts[p];
  }
  std::uint64_t best = 0;
  for (const auto& [_, c] : counts) best = std::max(best, c);
  return best;
}

TEST(Incidences, Examples) {
  EXPECT_EQ(count_incidences(F7, std::vector<Point3>{}, std::vector{plane(F7, 0, 0, 1, 0)}), 0u);
  EXPECT_EQ(count_incidences(F7, std::vector{pt(0, 0, 0)}, std::vector{plane(F7, 0, 0, 1, 0)}), 1u);
  const std::vector axis{pt(0, 0, 1), pt(0, 0, 2), pt(0, 0, 3)};
  const std::vector planes{plane(F7, 1, 0, 0, 0), plane(F7, 0, 1, 0, 0)};
  EXPECT_EQ(count_incidences(F7, axis, planes), 6u);
  EXPECT_THROW(count_incidences(FieldSpec::integers(), axis, planes), Error);
}

TEST(Geometry, CanonicalPlanes) {
  EXPECT_EQ(plane(F7, 2, 4, 6, 1), plane(F7, 1, 2, 3, 4));
  EXPECT_EQ(plane(F7, 0, 3, 0, 6).v, Elem{1});
  EXPECT_THROW(plane(F7, 0, 0, 0, 1), Error);
}

TEST(Geometry, CanonicalLinesAgreeForEveryPointPair) {
  SplitMix64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point3 base{testing::random_elem(F101, rng), testing::random_elem(F101, rng), testing::random_elem(F101, rng)};
    Point3 dir{testing::random_elem(F101, rng), testing::random_elem(F101, rng), testing::random_elem(F101, rng)};
    if (dir == Point3{}) continue;
    auto at = [&](std::int64_t s) {
      const Elem k = F101.from_int(s);
      return Point3{F101.add(base.x, F101.mul(k, dir.x)), F101.add(base.y, F101.mul(k, dir.y)),
                    F101.add(base.z, F101.mul(k, dir.z))};
    };
    const Line3 l = line_through(F101, at(0), at(1));
    EXPECT_EQ(line_through(F101, at(5), at(17)), l);
    EXPECT_EQ(line_through(F101, at(40), at(-3)), l);
    EXPECT_TRUE(on_line(F101, at(77), l));
  }
  EXPECT_THROW(line_through(F7, pt(1, 1, 1), pt(1, 1, 1)), Error);
}

TEST(Collinearity, Examples) {
  // Three points on the Z-axis; planes X = 0 and Y = 0 both contain it.
  const std::vector axis{pt(0, 0, 1), pt(0, 0, 2), pt(0, 0, 3)};
  const std::vector planes{plane(F7, 1, 0, 0, 0), plane(F7, 0, 1, 0, 0)};
  const auto c = collinearity_k(F7, axis, planes);
  EXPECT_EQ(c.k_star, 2u);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(*c.witness, line_through(F7, pt(0, 0, 0), pt(0, 0, 1)));

  EXPECT_EQ(collinearity_k(F7, std::vector<Point3>{}, planes).k_star, 0u);
  // One point on one plane: only the baseline line through it.
  const auto single = collinearity_k(F7, std::vector{pt(0, 0, 0)}, std::vector{plane(F7, 0, 0, 1, 0)});
  EXPECT_EQ(single.k_star, 1u);
  ASSERT_TRUE(single.witness);
  EXPECT_TRUE(line_in_plane(F7, *single.witness, plane(F7, 0, 0, 1, 0)));
  EXPECT_EQ(collinearity_k(F7, std::vector{pt(1, 0, 0)}, std::vector{plane(F7, 0, 0, 1, 3)}).k_star, 0u);
  EXPECT_THROW(collinearity_k(F7, axis, planes, 2), Error);
}

// k* over every line of F_7^3, each line given by a canonical (base, dir).
std::uint64_t k_star_over_all_lines(const FieldSpec& f, const std::vector<Point3>& r, const std::vector<Plane3>& s) {
  const auto p = static_cast<std::int64_t>(f.p());
  std::set<Line3> lines;
  for (std::int64_t a = 0; a < p; ++a)
    for (std::int64_t b = 0; b < p; ++b)
      for (std::int64_t c = 0; c < p; ++c)
        for (std::int64_t u = 0; u < p; ++u)
          for (std::int64_t v = 0; v < p; ++v)
            for (std::int64_t w = 0; w < p; ++w)
              if (u || v || w) lines.insert(make_line(f, pt(a, b, c), pt(u, v, w)));
  std::uint64_t best = 0;
  for (const auto& l : lines) {
    std::uint64_t on = 0, in = 0;
    for (const auto& q : r) on += on_line(f, q, l);
    for (const auto& pl : s) in += line_in_plane(f, l, pl);
    best = std::max(best, std::min(on, in));
  }
  return best;
}

TEST(Collinearity, MatchesEnumerationOfAllLines) {
  const auto F5 = FieldSpec::prime(5);
  SplitMix64 rng(12);
  for (int trial = 0; trial < 6; ++trial) {
    std::set<Point3> r;
    std::set<Plane3> s;
    while (r.size() < 12) r.insert(pt(rng.below(5), rng.below(5), rng.below(5)));
    while (s.size() < 10) {
      Plane3 pl{};
      try {
        pl = plane(F5, rng.below(5), rng.below(5), rng.below(5), rng.below(5));
      } catch (const Error&) {
        continue;
      }
      s.insert(pl);
    }
    const std::vector rv(r.begin(), r.end());
    const std::vector sv(s.begin(), s.end());
    EXPECT_EQ(collinearity_k(F5, rv, sv).k_star, k_star_over_all_lines(F5, rv, sv));
  }
}

TEST(Rudnev, Report) {
  const auto empty = rudnev_report(F7, std::vector<Point3>{}, std::vector{plane(F7, 0, 0, 1, 0)});
  EXPECT_EQ(empty.incidences, 0u);
  EXPECT_EQ(empty.ratio, 0.0);

  const std::vector axis{pt(0, 0, 1), pt(0, 0, 2), pt(0, 0, 3)};
  const std::vector planes{plane(F7, 1, 0, 0, 0), plane(F7, 0, 1, 0, 0)};
  const auto r = rudnev_report(F7, axis, planes, 3);
  EXPECT_EQ(r.incidences, 6u);
  EXPECT_EQ(r.k_star, 2u);
  EXPECT_EQ(r.k_used, 3u);
  EXPECT_DOUBLE_EQ(r.bound, std::sqrt(3.0) * 2 + 3 * 2);
  EXPECT_DOUBLE_EQ(r.ratio, 6 / (std::sqrt(3.0) * 2 + 6));
  EXPECT_FALSE(r.points_le_planes);
  EXPECT_TRUE(r.points_le_p2);
  EXPECT_DOUBLE_EQ(*r.bound_construction, std::sqrt(3.0) * 2 + 6);
}

TEST(PartialMixedConstruction, XyPlusZOnBinarySets) {
  const auto a = ESet::from_ints(F7, {0, 1});
  const auto f = parse_quad3(F7, "x*y + z");
  const auto con = build_partial_mixed(f, a, a, a);
  EXPECT_EQ(con.points.size(), 8u);
  EXPECT_EQ(con.planes.size(), 8u);
  EXPECT_EQ(con.stats.max_point_fiber_all, 1u);
  EXPECT_FALSE(con.stats.excluded_x);
  const auto s = sandwich_check(f, a, a, a, ConstructionKind::partial_mixed);
  EXPECT_EQ(s.energy, 26u);
  EXPECT_EQ(s.incidences, incidences_by_equation(F7, con.points, con.planes));
  EXPECT_TRUE(s.holds);
}

TEST(PartialMixedConstruction, SingletonsAndPatternErrors) {
  const auto one = ESet::from_ints(F7, {2});
  const auto con = build_partial_mixed(parse_quad3(F7, "3*x*y + x*z + z^2 + y"), one, one, one);
  EXPECT_EQ(con.points.size(), 1u);
  EXPECT_EQ(con.planes.size(), 1u);
  const auto s = sandwich_check(parse_quad3(F7, "x*y + z"), one, one, one, ConstructionKind::partial_mixed);
  EXPECT_EQ(s.incidences, 1u);
  EXPECT_EQ(s.energy, 1u);
  EXPECT_TRUE(s.holds);
  try {
    build_partial_mixed(parse_quad3(F7, "x*y + y*z + z"), one, one, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::pattern_mismatch);
  }
  EXPECT_THROW(build_partial_mixed(parse_quad3(F7, "x*z + y"), one, one, one), Error);
}

TEST(PartialMixedConstruction, DifferenceSquareFibers) {
  SplitMix64 rng(6);
  const auto f = parse_quad3(F101, "(x - y)^2 + z");
  const auto a = testing::random_subset(F101, 6, rng);
  const auto b = testing::random_subset(F101, 6, rng);
  const auto c = testing::random_subset(F101, 6, rng);
  const auto con = build_partial_mixed(f, a, b, c);
  EXPECT_LE(con.stats.max_point_fiber, 2u);
  EXPECT_LE(con.stats.max_plane_fiber, 2u);
  EXPECT_EQ(con.stats.point_multiset, 216u);
}

TEST(PartialMixedConstruction, PlanesContainNoVerticalLines) {
  SplitMix64 rng(8);
  for (int i = 0; i < 30; ++i) {
    const auto f = testing::random_partial_mixed(F101, rng);
    const auto sets = std::array{testing::random_subset(F101, 1 + rng.below(8), rng),
                                 testing::random_subset(F101, 1 + rng.below(8), rng),
                                 testing::random_subset(F101, 1 + rng.below(8), rng)};
    const auto con = build_partial_mixed(f, sets[0], sets[1], sets[2]);
    for (const auto& pl : con.planes) {
      EXPECT_NE(pl.w, Elem{});  // (0, 0, 1) is not parallel to the plane
      EXPECT_FALSE(line_in_plane(F101, make_line(F101, pt(0, 0, 0), pt(0, 0, 1)), pl) &&
                   line_in_plane(F101, make_line(F101, pt(1, 0, 0), pt(0, 0, 1)), pl));
    }
  }
}

// Recomputes point fibers of a partial-mixed construction from its defining formula.
std::vector<std::pair<Point3, Elem>> partial_mixed_tagged_points(const Quad3& f, const ESet& a, const ESet& b, const ESet& c) {
  const auto& F = f.field();
  std::vector<std::pair<Point3, Elem>> out;
  for (auto x : a)
    for (auto y : b)
      for (auto z : c) {
        // b x z + r(x) + t(z) - s(y) = f(x, y, z) - a x y - 2 s(y).
        const Elem third = F.sub(F.sub(f(x, y, z), F.mul(f.mixed(0, 1), F.mul(x, y))), F.add(f.s()(F, y), f.s()(F, y)));
        out.push_back({Point3{x, y, third}, x});
      }
  return out;
}

TEST(PartialMixedConstruction, FiberBoundsAndSandwichOnSeededInstances) {
  SplitMix64 rng(2222);
  for (int i = 0; i < 60; ++i) {
    const auto F = FieldSpec::prime(i % 2 ? 101 : 13);
    const auto f = testing::random_partial_mixed(F, rng);
    const auto a = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto b = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto c = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto con = build_partial_mixed(f, a, b, c);
    EXPECT_LE(con.stats.max_point_fiber, 2u) << to_string(f);
    EXPECT_LE(con.stats.max_plane_fiber, 2u) << to_string(f);
    const auto tagged = partial_mixed_tagged_points(f, a, b, c);
    EXPECT_EQ(max_fiber_by_search(tagged, con.stats.excluded_x), con.stats.max_point_fiber);
    EXPECT_EQ(max_fiber_by_search(tagged, std::nullopt), con.stats.max_point_fiber_all);
    const auto s = sandwich_check(f, a, b, c, ConstructionKind::partial_mixed);
    EXPECT_EQ(s.energy, oracle::energy_bruteforce(f, a, b, c));
    EXPECT_EQ(s.incidences, incidences_by_equation(F, con.points, con.planes));
    EXPECT_LE(s.incidences, s.energy);
    EXPECT_TRUE(s.holds || con.stats.excluded_x) << to_string(f);
  }
}

TEST(PartialMixedConstruction, ExceptionalXCanBreakTheUpperSandwich) {
  // t(z) = z and b = 1: the z-coefficient x + 1 vanishes at x = -1, and every
  // z in C then lands on the same point.
  const auto f = parse_quad3(F101, "x*y + x*z + z");
  const auto a = ESet::from_ints(F101, {-1, 5});
  const auto b = ESet::from_ints(F101, {1, 2, 3});
  const auto c = ESet::from_ints(F101, {0, 1, 2, 3, 4, 5});
  const auto con = build_partial_mixed(f, a, b, c);
  ASSERT_TRUE(con.stats.excluded_x);
  EXPECT_EQ(*con.stats.excluded_x, F101.from_int(-1));
  EXPECT_EQ(con.stats.max_point_fiber_all, 6u);
  EXPECT_LE(con.stats.max_point_fiber, 2u);
  const auto s = sandwich_check(f, a, b, c, ConstructionKind::partial_mixed);
  EXPECT_EQ(s.excluded_x, con.stats.excluded_x);
  EXPECT_LE(s.incidences, s.energy);
  EXPECT_GT(s.energy, 4 * s.incidences);
  EXPECT_FALSE(s.holds);
}

TEST(PartialMixedConstruction, SeededExceptionalInstances) {
  SplitMix64 rng(2224);
  for (int i = 0; i < 200; ++i) {
    const auto F = FieldSpec::prime(i % 2 ? 101 : 13);
    auto f = testing::random_partial_mixed(F, rng);
    f.set(Mono::zz, Elem{});
    f.set(Mono::xz, testing::random_nonzero(F, rng));
    if (f.linear(2) == Elem{}) f.set(Mono::z, testing::random_nonzero(F, rng));
    const Elem x0 = F.neg(F.div(f.linear(2), f.mixed(0, 2)));
    std::vector<Elem> av{x0};
    for (auto x : testing::random_subset(F, 1 + rng.below(7), rng)) av.push_back(x);
    const auto a = ESet::from(F, av);
    const auto b = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto c = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto con = build_partial_mixed(f, a, b, c);
    ASSERT_EQ(con.stats.excluded_x, x0);
    EXPECT_LE(con.stats.max_point_fiber, 2u);
    EXPECT_LE(con.stats.max_plane_fiber, 2u);
    const auto s = sandwich_check(f, a, b, c, ConstructionKind::partial_mixed);
    EXPECT_LE(s.incidences, s.energy);
  }
}

TEST(FullMixedConstruction, SymmetricExample) {
  const auto f = parse_quad3(F7, "x*y + x*z + y*z");
  const auto a = ESet::from_ints(F7, {1, 2});
  const auto con = build_full_mixed(f, a, a, a, true);
  EXPECT_EQ(con.stats.point_multiset, 8u);
  EXPECT_EQ(con.stats.plane_multiset, 8u);
  EXPECT_LE(con.stats.max_point_fiber, 2u);
  ASSERT_TRUE(con.stats.slice_line_max);
  EXPECT_LE(*con.stats.slice_line_max, *con.stats.slice_line_bound);
  const auto s = sandwich_check(f, a, a, a, ConstructionKind::full_mixed);
  EXPECT_TRUE(s.holds);
  EXPECT_EQ(s.energy, oracle::energy_bruteforce(f, a, a, a));

  const auto one = ESet::from_ints(F7, {3});
  const auto single = build_full_mixed(f, one, one, one);
  EXPECT_EQ(single.stats.max_point_fiber, 1u);
  EXPECT_EQ(single.stats.max_plane_fiber, 1u);
}

TEST(FullMixedConstruction, PatternErrors) {
  const auto one = ESet::from_ints(F7, {3});
  EXPECT_THROW(build_full_mixed(parse_quad3(F7, "x*y + x*z"), one, one, one), Error);
  EXPECT_THROW(build_full_mixed(parse_quad3(F7, "x*y + x*z + y*z + x"), one, one, one), Error);
  // 4eg = c^2: e = g = 1, c = 2.
  EXPECT_THROW(build_full_mixed(parse_quad3(F7, "x*y + x*z + 2*y*z + y^2 + z^2"), one, one, one), Error);
}

TEST(FullMixedConstruction, FiberBoundsAndSandwichOnSeededInstances) {
  SplitMix64 rng(2323);
  for (int i = 0; i < 40; ++i) {
    const auto F = FieldSpec::prime(i % 2 ? 101 : 11);
    const auto f = testing::random_full_mixed(F, rng);
    const auto a = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto b = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto c = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto con = build_full_mixed(f, a, b, c, true);
    EXPECT_LE(con.stats.max_point_fiber, 2u) << to_string(f);
    EXPECT_LE(con.stats.max_plane_fiber, 2u) << to_string(f);
    EXPECT_TRUE(con.stats.max_point_fiber_all <= 2 || con.stats.excluded_zero_slice) << to_string(f);
    EXPECT_LE(*con.stats.slice_line_max, *con.stats.slice_line_bound);
    const auto s = sandwich_check(f, a, b, c, ConstructionKind::full_mixed);
    EXPECT_TRUE(s.holds || s.excluded_zero_slice) << to_string(f) << " I=" << s.incidences << " E=" << s.energy;
    EXPECT_EQ(s.incidences, incidences_by_equation(F, con.points, con.planes));
  }
  const auto five = ESet::from_ints(F101, {3, 17, 40, 41, 90});
  const auto sym = build_full_mixed(parse_quad3(F101, "x*y + x*z + y*z"), five, five, five);
  EXPECT_LE(sym.stats.max_point_fiber, 2u);
}

// b^2 e - abc + a^2 g = 3 + 6 + 12 = 0 in F_7: every (y, -2y) maps to the point (x, 0, 3x^2).
TEST(FullMixedConstruction, ZeroSliceFibersAreUnbounded) {
  const auto f = parse_quad3(F7, "3*x^2 + 2*x*y + x*z + 3*y^2 - 3*y*z + 3*z^2");
  const auto a = ESet::from_ints(F7, {1});
  const auto b = ESet::from_ints(F7, {1, 2, 3});
  const auto c = ESet::from_ints(F7, {5, 3, 1});
  const auto con = build_full_mixed(f, a, b, c);
  EXPECT_TRUE(con.stats.excluded_zero_slice);
  EXPECT_EQ(con.stats.max_point_fiber_all, 3u);
  EXPECT_EQ(con.stats.max_plane_fiber_all, 3u);
  EXPECT_LE(con.stats.max_point_fiber, 2u);
  EXPECT_LE(con.stats.max_plane_fiber, 2u);
  const auto s = sandwich_check(f, a, b, c, ConstructionKind::full_mixed);
  EXPECT_TRUE(s.excluded_zero_slice);
  EXPECT_LE(s.incidences, s.energy);
  EXPECT_EQ(s.energy, oracle::energy_bruteforce(f, a, b, c));

  EXPECT_FALSE(build_full_mixed(parse_quad3(F7, "x*y + x*z + y*z"), a, b, c).stats.excluded_zero_slice);
}

// Random full-mixed forms forced onto the zero slice: a, b, c, e random, g solved from
// b^2 e - abc + a^2 g = 0, rejecting 4eg = c^2.
TEST(FullMixedConstruction, SeededZeroSliceInstances) {
  SplitMix64 rng(2324);
  const auto F = FieldSpec::prime(31);
  int checked = 0;
  while (checked < 200) {
    const Elem a = testing::random_nonzero(F, rng), b = testing::random_nonzero(F, rng);
    const Elem c = testing::random_nonzero(F, rng), e = testing::random_elem(F, rng);
    const Elem g = F.div(F.sub(F.mul(F.mul(a, b), c), F.mul(F.mul(b, b), e)), F.mul(a, a));
    Quad3 f(F);
    f.set(Mono::xy, a);
    f.set(Mono::xz, b);
    f.set(Mono::yz, c);
    f.set(Mono::yy, e);
    f.set(Mono::zz, g);
    f.set(Mono::xx, testing::random_elem(F, rng));
    if (!matches_full_mixed(f)) continue;
    ++checked;
    const auto xs = testing::random_subset(F, 1 + rng.below(4), rng);
    const auto ys = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto zs = testing::random_subset(F, 1 + rng.below(8), rng);
    const auto con = build_full_mixed(f, xs, ys, zs);
    ASSERT_TRUE(con.stats.excluded_zero_slice);
    EXPECT_LE(con.stats.max_point_fiber, 2u) << to_string(f);
    EXPECT_LE(con.stats.max_plane_fiber, 2u) << to_string(f);
    const auto s = sandwich_check(f, xs, ys, zs, ConstructionKind::full_mixed);
    EXPECT_LE(s.incidences, s.energy) << to_string(f);
  }
}

TEST(LemmaInstance, PreservesEnergyAndValueSetSize) {
  SplitMix64 rng(4040);
  int built = 0;
  for (int i = 0; i < 200 && built < 40; ++i) {
    const auto f = testing::random_mixed_quad3(F101, rng);
    if (!classify(f).is_expander()) continue;
    const auto a = testing::random_subset(F101, 1 + rng.below(6), rng);
    const auto b = testing::random_subset(F101, 1 + rng.below(6), rng);
    const auto c = testing::random_subset(F101, 1 + rng.below(6), rng);
    std::optional<LemmaInstance> li;
    try {
      li = lemma_instance(f, a, b, c);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::pattern_mismatch);
      continue;
    }
    ++built;
    EXPECT_EQ(energy(li->poly, li->a, li->b, li->c).energy, energy(f, a, b, c).energy);
    EXPECT_EQ(value_set(li->poly, li->a, li->b, li->c).size(), value_set(f, a, b, c).size());
    EXPECT_NO_THROW(build(li->kind, li->poly, li->a, li->b, li->c));
  }
  EXPECT_GT(built, 10);
}

}  // namespace
}  // namespace fflab
