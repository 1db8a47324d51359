#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>

#include "holab/errors.hpp"
#include "holab/io.hpp"

using namespace holab;
using std::numbers::pi;

namespace {

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }
bool same_bits(Complex x, Complex y) { return same_bits(x.real(), y.real()) && same_bits(x.imag(), y.imag()); }

std::vector<double> awkward_doubles() {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xs{0.0, -0.0, 0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -2.2250738585072014e-308};
  for (int k = 0; k < 40; ++k) xs.push_back(u(rng) * std::pow(10.0, (k % 30) - 15));
  return xs;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double x : awkward_doubles()) CHECK(same_bits(std::strtod(format_double(x).c_str(), nullptr), x));
}

TEST_CASE("sweep CSV and JSON round-trip bit for bit") {
  const auto xs = awkward_doubles();
  CSweep s;
  s.profile_id = "straight(l=1)";
  s.t_end = 1.0;
  for (std::size_t k = 0; k + 4 < xs.size(); k += 4) {
    s.c_grid.push_back(xs[k]);
    s.values.push_back(SU2{{xs[k + 1], xs[k + 2]}, {xs[k + 3], xs[k + 4]}});
  }
  const CSweep a = parse_sweep_csv(sweep_csv(s));
  const CSweep b = sweep_from_json(Json::parse(to_json(s).dump()));
  REQUIRE(a.c_grid.size() == s.c_grid.size());
  REQUIRE(b.c_grid.size() == s.c_grid.size());
  for (std::size_t k = 0; k < s.c_grid.size(); ++k) {
    CHECK(same_bits(a.c_grid[k], s.c_grid[k]));
    CHECK(same_bits(a.values[k].a, s.values[k].a));
    CHECK(same_bits(a.values[k].b, s.values[k].b));
    CHECK(same_bits(b.c_grid[k], s.c_grid[k]));
    CHECK(same_bits(b.values[k].a, s.values[k].a));
    CHECK(same_bits(b.values[k].b, s.values[k].b));
  }
  CHECK(b.profile_id == s.profile_id);
  CHECK(sweep_csv(a) == sweep_csv(s));
}

TEST_CASE("sweep CSV has one header and one row per point") {
  const CSweep s = sweep(straight_profile(1.0), {0.0, 1.0, 2.0});
  const std::string text = sweep_csv(s);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.rfind("c,a_re,a_im,b_re,b_im\n", 0) == 0);
}

TEST_CASE("residuals round-trip, including non-finite values") {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<ResidualSample> rs{{5.0, {1e-3, -2e-4}}, {7.25, {inf, 0.0}}, {9.0, {1.0 / 3.0, -0.0}}};
  const auto a = parse_residual_csv(residual_csv(rs));
  const auto b = residuals_from_json(Json::parse(residuals_to_json(rs).dump()));
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    CHECK(same_bits(a[k].c, rs[k].c));
    CHECK(same_bits(a[k].value, rs[k].value));
    CHECK(same_bits(b[k].c, rs[k].c));
  }
  CHECK(same_bits(b[0].value, rs[0].value));
  CHECK(std::isinf(b[1].value.real()));
}

TEST_CASE("decay report round-trip") {
  DecayReport r;
  r.windows = {{5.0, 10.0, 0.25, 64}, {10.0, 20.0, 1.0 / 3.0, 65}};
  r.global_sup = 1.0 / 3.0;
  r.verdict = DecayVerdict::Suspicious;
  r.offending_window = 1;
  const Json j = to_json(r);
  const DecayReport q = decay_report_from_json(Json::parse(j.dump()));
  CHECK(q.windows.size() == 2);
  CHECK(same_bits(q.windows[1].sup_c_residual, 1.0 / 3.0));
  CHECK(q.windows[1].samples == 65);
  CHECK(q.verdict == DecayVerdict::Suspicious);
  CHECK(q.offending_window == 1);
  CHECK(to_json(q).dump() == j.dump());
}

TEST_CASE("matrix JSON round-trip and determinism") {
  const auto m = constellation_matrix("paper");
  const std::string once = to_json(m).dump(2);
  CHECK(once == to_json(constellation_matrix("paper")).dump(2));
  const auto back = matrix_from_json(Json::parse(once));
  CHECK(to_json(back).dump(2) == once);
  CHECK(back.mismatches() == 0);
  CHECK(matrix_text(m).find("mismatches on non-exception cells: 0") != std::string::npos);
}

TEST_CASE("envelope checks") {
  const Json doc = envelope("sweep", Json::object());
  CHECK(doc.at("schema") == kSchema);
  CHECK(doc.begin().key() == "schema");
  CHECK_NOTHROW(check_envelope(doc, "sweep"));
  CHECK_THROWS_AS(check_envelope(doc, "decay_report"), ValidationError);
  Json other = doc;
  other["schema"] = "something/2";
  CHECK_THROWS_AS(check_envelope(other, "sweep"), ValidationError);
}

TEST_CASE("path specs") {
  const PathProfile s = path_from_json(Json::parse(R"({"kind":"straight","length":2.5})"));
  CHECK(s.t_end() == 2.5);
  const PathProfile c = load_path(R"({"kind":"circle","radius":2})");
  CHECK(c.t_end() == doctest::Approx(4 * pi));
  const PathProfile r = load_path(R"({"kind":"general","preset":"ramp","n0":0.1,"slope":0.05,"t_end":2})");
  CHECK(r.n(0.0) == doctest::Approx(0.1));
  CHECK(r.n(2.0) == doctest::Approx(0.2));

  Json samples = Json::array();
  const PathProfile ref = circle_profile(1.0, 1.0);
  for (int k = 0; k <= 100; ++k) {
    const double t = k / 100.0;
    const Complex m = ref.m(t), md = ref.m_dot(t), mdd = ref.m_ddot(t);
    samples.push_back({t, m.real(), m.imag(), 0.0, md.real(), md.imag(), 0.0, mdd.real(), mdd.imag()});
  }
  Json g;
  g["kind"] = "general";
  g["samples"] = samples;
  const PathProfile sp = path_from_json(g);
  CHECK(std::abs(sp.m(0.505) - ref.m(0.505)) < 1e-8);

  CHECK_THROWS_AS(load_path(R"({"kind":"helix"})"), ValidationError);
  CHECK_THROWS_AS(load_path(R"({"kind":"straight"})"), ValidationError);
  CHECK_THROWS_AS(load_path(R"({"kind":"straight","length":"long"})"), ValidationError);
  CHECK_THROWS_AS(load_path(R"({"kind":"general","samples":[[0,1,0]]})"), ValidationError);
  CHECK_THROWS_AS(load_path(R"({"kind":"general"})"), ValidationError);
  CHECK_THROWS_AS(load_path(R"({"kind":)"), ValidationError);
  CHECK_THROWS_AS(load_path("/nonexistent/path.json"), ValidationError);
}

TEST_CASE("malformed CSV is rejected") {
  CHECK_THROWS_AS(parse_sweep_csv("c,a\n1,2\n"), ValidationError);
  CHECK_THROWS_AS(parse_sweep_csv("c,a_re,a_im,b_re,b_im\n1,2,3\n"), ValidationError);
  CHECK_THROWS_AS(parse_residual_csv("c,res_re,res_im,abs_c_res\n1,x,3,4\n"), ValidationError);
}

TEST_CASE("algebra elements and neighborhoods from JSON") {
  const auto basis = parse_numeric_basis("1,sqrt2");
  const auto g = algebra_element_from_json(
      Json::parse(R"({"f0":{"kind":"bump","center":3,"width":1},"f1":[{"re":1,"n":[1,0]},{"im":2,"n":[0,1]}]})"),
      basis);
  const Complex expect = std::exp(1.0 - 1.0 / (1.0 - 0.25)) + std::polar(1.0, 3.5) +
                         Complex{0, 2} * std::polar(1.0, 3.5 * std::sqrt(2.0));
  CHECK(std::abs(evaluate(GluedPoint::real(3.5), g) - expect) < 1e-13);
  CHECK_THROWS_AS(algebra_element_from_json(Json::parse(R"({"f0":{"kind":"gauss"}})"), basis),
                  ValidationError);
  CHECK_THROWS_AS(algebra_element_from_json(Json::parse(R"({"f1":[{"re":1,"n":[1]}]})"), basis), RankMismatch);

  const auto nb = neighborhoods_from_json(
      Json::parse(R"([{"type":1,"intervals":[[1,2]]},{"type":2,"compact":[[3,4]]},
                      {"type":3,"f1":[{"re":1,"n":[1,0]}],"discs":[{"re":1,"r":0.1}]}])"),
      basis);
  REQUIRE(nb.size() == 3);
  CHECK(in_subbasis(GluedPoint::real(1.5), nb[0]));
  CHECK_FALSE(in_subbasis(GluedPoint::real(3.5), nb[1]));
  CHECK(in_subbasis(GluedPoint::torus({0.0, 1.0}), nb[2]));
  CHECK_THROWS_AS(neighborhoods_from_json(Json::parse(R"([{"type":4}])"), basis), ValidationError);
  CHECK_THROWS_AS(neighborhoods_from_json(Json::parse(R"({"type":1})"), basis), ValidationError);
}
