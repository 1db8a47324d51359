#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "holab/asymptotics.hpp"
#include "holab/errors.hpp"

using namespace holab;
using std::numbers::pi;

namespace {

std::vector<ResidualSample> synthetic(const std::vector<double>& grid, const std::function<Complex(double)>& f) {
  std::vector<ResidualSample> out;
  for (double c : grid) out.push_back({c, f(c)});
  return out;
}

}  // namespace

TEST_CASE("trig polynomial arithmetic") {
  const auto p = TrigPolynomial<double>{{Complex{2.0}, 1.0}, {Complex{0.5}, 0.0}};
  const auto q = TrigPolynomial<double>::character(-1.0);
  const auto pq = p * q;
  CHECK(pq.mean() == Complex{2.0});
  CHECK(pq.terms().size() == 2);
  CHECK(std::abs(pq(0.3) - p(0.3) * q(0.3)) < 1e-15);
  CHECK(std::abs((p + p.conj())(1.7) - 2.0 * p(1.7).real()) < 1e-15);
  CHECK(p.coefficient_l1() == doctest::Approx(2.5));
}

TEST_CASE("asymptotic part of the straight segment is exact") {
  const PathProfile p = straight_profile(1.3);
  const AsymptoticPart a = asymptotic_part(p, Branch::Alpha);
  const AsymptoticPart b = asymptotic_part(p, Branch::Beta);
  for (double c : {-3.0, 0.0, 2.2, 40.0}) {
    CHECK(std::abs(a(c) - std::cos(1.3 * c)) < 1e-15);
    CHECK(std::abs(b(c) - Complex{0, std::sin(1.3 * c)}) < 1e-15);
  }
  const auto res = residual_sweep(p, Branch::Beta, linear_grid(0.0, 60.0, 121));
  for (const auto& r : res) CHECK(std::abs(r.value) < 1e-8);
}

TEST_CASE("circle residual equals i^{3/2} f_rt for every radius") {
  for (double r : {0.5, 1.0, 2.0}) {
    const PathProfile p = circle_profile(r, 2 * pi);
    const auto res = residual_sweep(p, Branch::Beta, linear_grid(1.0, 200.0, 200));
    double worst = 0.0;
    for (const auto& s : res)
      worst = std::max(worst, std::abs(s.value - i_three_halves() * f_rt(r, 2 * pi, s.c)));
    // Global error grows with the number of oscillations, about c t.
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("phase integral of a general profile") {
  // With M = i - n n'/(1 - n^2): rho1 = n + i n' + i n^2 n'/(1 - n^2), integrable in closed form.
  const double n0 = 0.2, s = 0.1, T = 3.0;
  const double nT = n0 + s * T;
  const auto G = [](double n) { return -n + std::atanh(n); };  // int n^2/(1-n^2) dn
  const Complex expect = Complex{0, nT - n0} + (n0 * T + 0.5 * s * T * T) + Complex{0, G(nT) - G(n0)};
  const AsymptoticPart a = asymptotic_part(pitch_ramp_profile(n0, s, 1.0, T), Branch::Alpha);
  CHECK(std::abs(a.phase_phi - 0.5 * expect) < 1e-12);
}

TEST_CASE("dyadic grid layout") {
  const auto g = dyadic_grid(5.0, 7, 64);
  CHECK(g.size() == 7 * 64 + 1);
  CHECK(g.front() == 5.0);
  CHECK(g.back() == doctest::Approx(640.0).epsilon(1e-14));
  CHECK_THROWS_AS(dyadic_grid(0.0, 3), ValidationError);
}

TEST_CASE("decay certification on synthetic residuals") {
  const auto g = dyadic_grid(5.0, 7, 64);
  const auto bounded = verify_decay_bound(synthetic(g, [](double c) { return Complex{std::sin(c) / c}; }), 5.0);
  CHECK(bounded.verdict == DecayVerdict::Bounded);
  CHECK(bounded.windows.size() == 7);
  for (const auto& w : bounded.windows) CHECK(w.samples >= 64);

  const auto growing = verify_decay_bound(synthetic(g, [](double) { return Complex{1.0}; }), 5.0);
  CHECK(growing.verdict == DecayVerdict::Suspicious);
  REQUIRE(growing.offending_window.has_value());
  CHECK(*growing.offending_window == 1);

  auto with_nan = synthetic(g, [](double c) { return Complex{1.0 / c}; });
  with_nan[100].value = Complex{NAN, 0.0};
  CHECK(verify_decay_bound(with_nan, 5.0).verdict == DecayVerdict::Suspicious);

  CHECK_THROWS_AS(verify_decay_bound(synthetic(dyadic_grid(5.0, 3), [](double) { return Complex{}; }), 5.0),
                  InsufficientGrid);
  CHECK_THROWS_AS(verify_decay_bound(synthetic(dyadic_grid(5.0, 7, 16), [](double) { return Complex{}; }), 5.0),
                  InsufficientGrid);
}

TEST_CASE("Bohr mean of trig polynomials") {
  const auto p = TrigPolynomial<double>{{Complex{0.7, -0.2}, 0.0}, {Complex{1.5}, 1.0}, {Complex{0, 2.0}, -std::sqrt(2.0)}};
  const BohrMean m = bohr_mean([&](double c) { return p(c); }, 1e4, 2'000'000);
  CHECK(std::abs(m.value - p.mean()) < 5e-3 * p.coefficient_l1());
  CHECK(m.error_estimate < 1e-6);
  const BohrMean f = fourier_bohr_coefficient([&](double c) { return p(c); }, 1.0, 1e4, 2'000'000);
  CHECK(std::abs(f.value - Complex{1.5}) < 5e-3 * p.coefficient_l1());
  CHECK_THROWS_AS(bohr_mean([](double) { return Complex{}; }, 0.0, 2048), ValidationError);
}

TEST_CASE("Simpson error estimate is honest on a smooth integrand") {
  // (1/2T) int_{-T}^{T} e^{-c^2} dc = sqrt(pi) erf(T) / (2T).
  const double T = 3.0;
  const BohrMean m = bohr_mean([](double c) { return Complex{std::exp(-c * c)}; }, T, 1024);
  const double exact = std::sqrt(pi) * std::erf(T) / (2 * T);
  CHECK(std::abs(m.value.real() - exact) <= 10 * m.error_estimate + 1e-15);
}

TEST_CASE("non-almost-periodic witness") {
  std::vector<double> grid;
  for (int k = -2000; k < 2000; ++k) grid.push_back(0.5 * k);
  for (int k = 0; k <= 600; ++k) {
    const double c = 1e3 * std::pow(10.0, 3.0 * k / 600.0);
    grid.push_back(c);
    grid.push_back(-c);
  }
  CHECK(is_nonap_witness([](double c) { return Complex{f_rt(1.0, 2 * pi, c)}; }, grid));
  CHECK_FALSE(is_nonap_witness([](double c) { return Complex{std::sin(c)}; }, grid));
  CHECK_FALSE(is_nonap_witness([](double) { return Complex{}; }, grid));
  CHECK_THROWS_AS(is_nonap_witness([](double c) { return Complex{std::abs(c) < 1e3 ? 1.0 : 0.1}; }, grid),
                  Inconclusive);
  CHECK_THROWS_AS(is_nonap_witness([](double c) { return Complex{c}; }, {1.0, 2.0}), InsufficientGrid);
}
