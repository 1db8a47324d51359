#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <random>

#include "holab/dop853.hpp"
#include "holab/errors.hpp"
#include "holab/holonomy.hpp"
#include "oracles.hpp"

using namespace holab;
using std::numbers::pi;

namespace {

SU2 from_matrix(const oracle::Mat2& g) { return SU2{g(0, 0), g(0, 1)}; }

}  // namespace

TEST_CASE("SU(2) algebra") {
  const SU2 g{std::polar(0.6, 0.3), std::polar(0.8, -1.1)};
  const SU2 h{std::polar(0.28, 2.0), std::polar(0.96, 0.4)};
  // compose agrees with the matrix product.
  const SU2 gh = compose(g, h);
  CHECK((gh.matrix() - g.matrix() * h.matrix()).norm() < 1e-15);
  CHECK(frobenius_distance(compose(g, inverse(g)), SU2::identity()) < 1e-15);
  CHECK(gh.unitarity_defect() < 1e-15);
  CHECK(entry_distance(g, g) == 0.0);
}

TEST_CASE("DOP853 integrates y' = i y to round-off") {
  using State = Eigen::Matrix<std::complex<double>, 1, 1>;
  StepControl ctl;
  ctl.rtol = ctl.atol = 1e-12;
  State y0;
  y0 << 1.0;
  const auto res = integrate_dop853([](double, const State& y) -> State { return Complex{0, 1} * y; },
                                    0.0, 10.0, y0, ctl);
  CHECK(std::abs(res.y[0] - std::polar(1.0, 10.0)) < 1e-10);
  CHECK(res.accepted > 0);
}

TEST_CASE("step budget exhaustion raises ToleranceNotMet") {
  HolonomyOptions opt;
  opt.max_steps = 10;
  CHECK_THROWS_AS(integrate_holonomy(circle_profile(1.0, 2 * pi), 40.0, opt), ToleranceNotMet);
  CHECK_THROWS_AS(integrate_holonomy(circle_profile(1.0, 2 * pi), 1.0, 1e-2), ValidationError);
}

TEST_CASE("straight segment against the matrix exponential") {
  double worst = 0.0;
  for (double l : {0.3, 1.0, 2.0})
    for (double c = -50.0; c <= 50.0; c += 0.5) {
      const SU2 h = integrate_holonomy(straight_profile(l), c);
      worst = std::max(worst, frobenius_distance(h, from_matrix(oracle::straight(l, c))));
      CHECK(h.unitarity_defect() < 100 * 1e-10);
    }
  CHECK(worst < 10 * 1e-10);
  // Closed form used elsewhere agrees with the oracle.
  CHECK(frobenius_distance(holonomy_straight(1.3, 7.0), from_matrix(oracle::straight(1.3, 7.0))) < 1e-13);
}

TEST_CASE("circle against the co-rotating frame solution") {
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0})
    for (double t : {pi, 2 * pi})
      for (double c = -50.0; c <= 50.0; c += 0.5) {
        const SU2 h = integrate_holonomy(circle_profile(r, t), c);
        worst = std::max(worst, frobenius_distance(h, from_matrix(oracle::circle(r, t, c))));
      }
  CHECK(worst < 10 * 1e-10);
}

TEST_CASE("circle closed form for beta") {
  for (double r : {0.5, 1.0, 2.0})
    for (double t : {pi, 2 * pi}) {
      const PathProfile p = circle_profile(r, t);
      for (double c : {0.1, 1.0, 7.3, 31.0}) {
        const Complex b = oracle::circle(r, t, c)(0, 1);
        CHECK(std::abs(b / p.sqrt_m(t) - holonomy_circle_beta(r, t, c)) < 1e-11);
      }
    }
  CHECK(std::abs(i_three_halves() - std::polar(1.0, 0.75 * pi)) < 1e-16);
}

TEST_CASE("sweep over a short grid") {
  const CSweep s = sweep(straight_profile(1.0), {0.0, pi, 2 * pi});
  REQUIRE(s.values.size() == 3);
  CHECK(entry_distance(s.values[0], SU2{1.0, 0.0}) < 1e-9);
  CHECK(entry_distance(s.values[1], SU2{-1.0, 0.0}) < 1e-9);
  CHECK(entry_distance(s.values[2], SU2{1.0, 0.0}) < 1e-9);
  CHECK(sweep(straight_profile(1.0), {}).values.empty());
  CHECK_THROWS_AS(sweep(straight_profile(1.0), {1.0, 1.0}), ValidationError);

  const auto grid = linear_grid(5.0, 50.0, 64);
  const CSweep cs = sweep(circle_profile(1.0, 2 * pi), grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(frobenius_distance(cs.values[k], from_matrix(oracle::circle(1.0, 2 * pi, grid[k]))) < 10 * 1e-10);
}

TEST_CASE("composition over a split path") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const std::vector<PathProfile> paths{circle_profile(1.0, 2 * pi), pitch_ramp_profile(0.2, 0.1, 1.0, 3.0),
                                       pitch_wobble_profile(0.5, 3.0)};
  for (const auto& p : paths)
    for (int k = 0; k < 4; ++k) {
      const double ts = u(rng) * p.t_end();
      const double c = 20.0 * u(rng);
      const SU2 whole = integrate_holonomy(p, c);
      const SU2 joined = compose(integrate_holonomy(p.restrict(ts, p.t_end()), c),
                                 integrate_holonomy(p.restrict(0.0, ts), c));
      CHECK(frobenius_distance(whole, joined) < 20 * 1e-10);
      CHECK(whole.unitarity_defect() < 100 * 1e-10);
    }
}

TEST_CASE("halving the step cuts the error at least fourfold") {
  // Fixed DOP853 steps against the exact circle holonomy.
  const PathProfile p = circle_profile(1.0, 2 * pi);
  const SU2 exact = from_matrix(oracle::circle(1.0, 2 * pi, 10.0));
  double prev = 0.0;
  for (long steps : {40L, 80L, 160L}) {
    const double err = frobenius_distance(integrate_holonomy_fixed(p, 10.0, steps), exact);
    if (prev > 0.0) CHECK(prev / err >= 4.0);
    prev = err;
  }
}

TEST_CASE("c -> 0 limit is the identity") {
  for (const auto& p : {straight_profile(2.0), circle_profile(0.5, 2 * pi),
                        pitch_ramp_profile(0.2, 0.1, 1.0, 3.0), pitch_wobble_profile(0.5, 3.0)})
    CHECK(frobenius_distance(integrate_holonomy(p, 1e-8), SU2::identity()) < 1e-6);
}

TEST_CASE("f_rt") {
  CHECK(f_rt(1.0, 2 * pi, 0.0) == 0.0);
  CHECK(f_rt(0.5, pi, 0.0) == 0.0);
  // Lipschitz near the origin with a modest constant.
  for (double r : {0.5, 1.0, 2.0})
    for (double c : {1e-6, 1e-4, 1e-2}) CHECK(std::abs(f_rt(r, 2 * pi, c)) <= 100.0 * c);
  CHECK_THROWS_AS(f_rt(0.0, 1.0, 1.0), ValidationError);
}
