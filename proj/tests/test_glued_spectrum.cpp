#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "holab/errors.hpp"
#include "holab/glued_spectrum.hpp"

using namespace holab;
using std::numbers::pi;

namespace {

const NumericBasis kOne = parse_numeric_basis("1");
const NumericBasis kTwo = parse_numeric_basis("1,sqrt2");
const NumericBasis kZero = parse_numeric_basis("");

AlgebraElement chi1(const NumericBasis& b = kOne) { return AlgebraElement::make(b, f0_zero(), {{1.0, {1}}}); }

F0 half_at_two() {
  return F0{"custom", {}, [](double y) { return Complex{0.5 * std::exp(-(y - 2) * (y - 2) * 50.0), 0.0}; }};
}

}  // namespace

TEST_CASE("numeric basis labels") {
  CHECK(kTwo.rank() == 2);
  CHECK(kTwo.values[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(parse_numeric_basis("pi, 0.5").values[0] == doctest::Approx(pi));
  CHECK(kZero.rank() == 0);
  CHECK_THROWS_AS(parse_numeric_basis("1,1"), ValidationError);
  CHECK_THROWS_AS(parse_numeric_basis("sqrtx"), ValidationError);
  CHECK_THROWS_AS(parse_numeric_basis("0"), ValidationError);
}

TEST_CASE("points") {
  CHECK_THROWS_AS(GluedPoint::real(0.0), ValidationError);
  CHECK_THROWS_AS(GluedPoint::torus({7.0}), ValidationError);
  CHECK(GluedPoint::torus_wrapped({-0.5}).theta()[0] == doctest::Approx(2 * pi - 0.5));
  CHECK(parse_point("real:2.5").y() == 2.5);
  CHECK(parse_point("torus:0.1,3").theta().size() == 2);
  CHECK(parse_point("torus:").theta().empty());
  CHECK_THROWS_AS(parse_point("disc:1"), ValidationError);
}

TEST_CASE("evaluation examples") {
  const auto g = AlgebraElement::make(kOne, half_at_two(), {{1.0, {1}}});
  CHECK(std::abs(evaluate(GluedPoint::real(2.0), g) - (0.5 + std::polar(1.0, 2.0))) < 1e-15);
  CHECK(std::abs(evaluate(GluedPoint::torus({0.0}), g) - 1.0) < 1e-15);
  const auto h = AlgebraElement::make(kOne, f0_zero(), {{2.0, {1}}, {1.0, {2}}});
  CHECK(std::abs(evaluate(GluedPoint::torus({pi}), h) - (-1.0)) < 1e-14);
  CHECK_THROWS_AS(evaluate(GluedPoint::torus({0.0, 0.0}), g), RankMismatch);
  CHECK_THROWS_AS(AlgebraElement::make(kOne, f0_zero(), {{1.0, {1, 0}}}), RankMismatch);
}

TEST_CASE("f0 must vanish at 0 and infinity") {
  const F0 constant{"const", {}, [](double) { return Complex{1.0}; }};
  CHECK_THROWS_AS(AlgebraElement::make(kOne, constant, {}), AlgebraMembership);
  CHECK_NOTHROW(AlgebraElement::make(kOne, f0_frt(1.0, 2 * pi), {}));
  CHECK_NOTHROW(AlgebraElement::make(kOne, f0_bump(3.0, 1.0), {}));
  CHECK_THROWS_AS(f0_bump(0.5, 1.0), ValidationError);
}

TEST_CASE("iota and homomorphism consistency") {
  CHECK(iota(3.0, kOne).y() == 3.0);
  CHECK(iota(0.0, kTwo).theta() == std::vector<double>{0.0, 0.0});
  const auto g = AlgebraElement::make(kTwo, f0_bump(2.0, 1.5), {{Complex{0.3, 1.0}, {1, 0}}, {-2.0, {2, -1}}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int k = 0; k < 20; ++k) {
    const double c = u(rng);
    // Term-by-term sum written out directly.
    const double uu = (c - 2.0) / 1.5;
    const double bump = std::abs(uu) < 1 ? std::exp(1.0 - 1.0 / (1.0 - uu * uu)) : 0.0;
    const Complex expect = bump + Complex{0.3, 1.0} * std::polar(1.0, c) - 2.0 * std::polar(1.0, (2.0 - std::sqrt(2.0)) * c);
    CHECK(std::abs(evaluate(iota(c, kTwo), g) - expect) < 1e-12);
  }
}

TEST_CASE("evaluation is multiplicative") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ang(0.0, 2 * pi);
  std::uniform_int_distribution<long> n(-3, 3);
  const std::vector<F0> f0s{f0_zero(), f0_bump(2.0, 1.0), f0_bump(-4.0, 2.0), f0_frt(1.0, 2 * pi)};
  for (int k = 0; k < 50; ++k) {
    auto make = [&] {
      std::vector<LatticeTerm> terms;
      for (int j = 0; j < 3; ++j) terms.push_back({{u(rng), u(rng)}, {n(rng), n(rng)}});
      return AlgebraElement::make(kTwo, f0s[rng() % f0s.size()], terms);
    };
    const auto g = make(), h = make();
    const auto gh = g * h;
    const GluedPoint pts[] = {GluedPoint::real(u(rng) + 3.5), GluedPoint::real(-1.7),
                              GluedPoint::torus({ang(rng), ang(rng)})};
    for (const auto& p : pts)
      CHECK(std::abs(evaluate(p, gh) - evaluate(p, g) * evaluate(p, h)) < 1e-11);
  }
}

TEST_CASE("separation by built-in elements") {
  // Real vs real: a bump at one point vanishing at the other.
  const auto bump = AlgebraElement::make(kOne, f0_bump(2.0, 0.5), {});
  CHECK(std::abs(evaluate(GluedPoint::real(2.0), bump) - evaluate(GluedPoint::real(3.0), bump)) > 0.5);
  // Real vs torus: f0 nonzero at y, while every torus point sees 0.
  CHECK(std::abs(evaluate(GluedPoint::real(2.0), bump)) > 0.5);
  CHECK(evaluate(GluedPoint::torus({0.0}), bump) == Complex{});
  // Torus vs torus: a character.
  CHECK(std::abs(evaluate(GluedPoint::torus({0.0}), chi1()) - evaluate(GluedPoint::torus({1.0}), chi1())) > 0.5);
}

TEST_CASE("subbasis membership") {
  const auto K = type2({{1.0, 2.0}});
  CHECK(in_subbasis(GluedPoint::real(5.0), K));
  CHECK_FALSE(in_subbasis(GluedPoint::real(1.5), K));
  CHECK(in_subbasis(GluedPoint::torus({2.0}), K));
  const auto U = type3(chi1(), {{1.0, 0.1}});
  CHECK(in_subbasis(GluedPoint::torus({0.0}), U));
  CHECK(in_subbasis(GluedPoint::real(2 * pi), U));
  CHECK_FALSE(in_subbasis(GluedPoint::real(pi), U));
  const auto I = type1({{-1.0, 1.0}});
  CHECK(in_subbasis(GluedPoint::real(0.5), I));
  CHECK_FALSE(in_subbasis(GluedPoint::torus({0.0}), I));
  CHECK_THROWS_AS(type2({{-1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(type1({{2.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(type3(chi1(), {{1.0, 0.0}}), ValidationError);
}

TEST_CASE("relative topology on the real part") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  const auto I = type1({{-3.0, -1.0}, {2.0, 7.5}});
  const auto f = AlgebraElement::make(kTwo, f0_bump(5.0, 1.0), {{1.0, {1, 0}}, {0.5, {0, 1}}});
  const auto U = type3(f, {{1.2, 0.4}});
  for (int k = 0; k < 100; ++k) {
    const double y = u(rng);
    CHECK(in_subbasis(GluedPoint::real(y), I) == ((-3 < y && y < -1) || (2 < y && y < 7.5)));
    const Complex fy = std::polar(1.0, y) + 0.5 * std::polar(1.0, std::sqrt(2.0) * y);
    CHECK(in_subbasis(GluedPoint::real(y), U) == (std::abs(fy - 1.2) < 0.4));
    const std::vector<double> th{std::fmod(std::abs(y), 2 * pi), std::fmod(std::abs(2 * y), 2 * pi)};
    const Complex ft = std::polar(1.0, th[0]) + 0.5 * std::polar(1.0, th[1]);
    CHECK(in_subbasis(GluedPoint::torus(th), U) == (std::abs(ft - 1.2) < 0.4));
  }
}

TEST_CASE("convergence certificates") {
  const auto two_pi_n = generate_sequence("2pi*n", 2000);
  const std::vector<SubbasisSet> nbhd{type2({{-10.0, -1.0}, {1.0, 10.0}}), type3(chi1(), {{1.0, 0.05}})};
  CHECK(converges(two_pi_n, GluedPoint::torus({0.0}), nbhd, kOne));
  CHECK_FALSE(converges(generate_sequence("n", 2000), GluedPoint::torus({0.0}), nbhd, kOne));
  CHECK(converges(generate_sequence("3+1/n", 2000), GluedPoint::real(3.0), {type1({{2.5, 3.5}})}, kOne));
  CHECK_THROWS_AS(converges(two_pi_n, GluedPoint::real(3.0), nbhd, kOne), TargetNotInNeighborhood);
  CHECK_THROWS_AS(converges(generate_sequence("n", 10), GluedPoint::torus({0.0}), nbhd, kOne), ValidationError);
  const auto cert = convergence_certificate(two_pi_n, GluedPoint::torus({0.0}), nbhd, kOne);
  CHECK(cert.entry_index[0] == 1);  // 2 pi lies in [1, 10], 4 pi does not
  CHECK(cert.entry_index[1] == 0);
  CHECK(generate_sequence("0.5*n", 3) == std::vector<double>{0.5, 1.0, 1.5});
  CHECK_THROWS_AS(generate_sequence("n^2", 3), ValidationError);
}

TEST_CASE("rank zero reduces to the one-point compactification") {
  // k = 0: the almost periodic summand is the constants and the torus is one point.
  const GluedPoint inf = GluedPoint::torus({});
  std::vector<GluedPoint> pts{inf};
  for (double y : {-1e3, -5.0, -1.0, -0.25, 0.25, 1.0, 2.5, 7.0, 1e3}) pts.push_back(GluedPoint::real(y));

  for (Complex a : {Complex{0.0}, Complex{1.0}, Complex{0.3, -0.9}})
    for (const Disc& d : {Disc{{1.0, 0.0}, 0.5}, Disc{{0.0, 0.0}, 0.1}, Disc{{0.3, -1.0}, 0.2}}) {
      const auto f = AlgebraElement::make(kZero, f0_zero(), a == Complex{} ? std::vector<LatticeTerm>{}
                                                                            : std::vector<LatticeTerm>{{a, {}}});
      const auto S = type3(f, {d});
      const bool all_in = in_subbasis(pts[0], S);
      for (const auto& p : pts) CHECK(in_subbasis(p, S) == all_in);  // empty or everything
      CHECK(all_in == (std::abs(a - d.center) < d.radius));
    }

  for (const auto& K : {std::vector<Interval>{}, std::vector<Interval>{{1.0, 3.0}},
                        std::vector<Interval>{{-6.0, -0.5}, {0.2, 8.0}}}) {
    const auto S = type2(K);
    CHECK(in_subbasis(inf, S));  // neighborhoods of infinity are complements of compacta
    for (std::size_t i = 1; i < pts.size(); ++i) {
      bool in_K = false;
      for (const auto& iv : K) in_K = in_K || (iv.lo <= pts[i].y() && pts[i].y() <= iv.hi);
      CHECK(in_subbasis(pts[i], S) == !in_K);
    }
  }

  for (const auto& I : {std::vector<Interval>{{-2.0, 2.0}}, std::vector<Interval>{{0.5, 1e4}}}) {
    const auto S = type1(I);
    CHECK_FALSE(in_subbasis(inf, S));  // open sets of Y never contain infinity
  }
}
