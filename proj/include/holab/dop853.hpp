#pragma once

// Adaptive eighth-order Dormand-Prince integrator (DOP853 of Hairer and
// Wanner) with the 5(3) combined error estimator and PI step control.
// Works on any Eigen column vector; complex components are measured by
// their modulus in the error norm.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "holab/errors.hpp"

namespace holab {

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 1'000'000;
  double safety = 0.9;
  double beta = 0.04;  // PI stabilization
  double fac_min = 1.0 / 3.0;
  double fac_max = 6.0;
};

template <typename State>
struct IntegrationResult {
  State y;
  long accepted = 0;
  long rejected = 0;
  double last_error = 0.0;  // normalized error of the last accepted step
};

namespace dop853_detail {

// clang-format off
inline constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
  c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
  c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00, c8 = 0.307692307692307692307692307692E+00,
  c9 = 0.651282051282051282051282051282E+00, c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;
inline constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
  b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
  b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
  b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
inline constexpr double a21 = 5.26001519587677318785587544488E-2,
  a31 = 1.97250569845378994544595329183E-2, a32 = 5.91751709536136983633785987549E-2,
  a41 = 2.95875854768068491816892993775E-2, a43 = 8.87627564304205475450678981324E-2,
  a51 = 2.41365134159266685502369798665E-1, a53 = -8.84549479328286085344864962717E-1,
  a54 = 9.24834003261792003115737966543E-1,
  a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
  a65 = 1.25467687566822425016691814123E-1,
  a71 = 3.7109375E-2, a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
  a76 = -1.7578125E-2,
  a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
  a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
  a87 = 8.27378916381402288758473766002E-3,
  a91 = 6.24110958716075717114429577812E-1, a94 = -3.36089262944694129406857109825E0,
  a95 = -8.68219346841726006818189891453E-1, a96 = 2.75920996994467083049415600797E1,
  a97 = 2.01540675504778934086186788979E1, a98 = -4.34898841810699588477366255144E1,
  a101 = 4.77662536438264365890433908527E-1, a104 = -2.48811461997166764192642586468E0,
  a105 = -5.90290826836842996371446475743E-1, a106 = 2.12300514481811942347288949897E1,
  a107 = 1.52792336328824235832596922938E1, a108 = -3.32882109689848629194453265587E1,
  a109 = -2.03312017085086261358222928593E-2,
  a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
  a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
  a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
  a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
  a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
  a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
  a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
  a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
  a1211 = 6.43392746015763530355970484046E-1;
inline constexpr double bhh1 = 0.244094488188976377952755905512E+00,
  bhh2 = 0.733846688281611857341361741547E+00, bhh3 = 0.220588235294117647058823529412E-01;
inline constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
  er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
  er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
  er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;
// clang-format on

template <typename State>
struct Stages {
  State k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12;
};

// One DOP853 step of size h from (t, y) with k1 = f(t, y) precomputed.
// Returns the eighth-order solution; stages are left in `s` for the error estimate.
template <typename State, typename Rhs>
State step(Rhs& f, double t, const State& y, double h, Stages<State>& s) {
  s.k2 = f(t + c2 * h, (y + h * a21 * s.k1).eval());
  s.k3 = f(t + c3 * h, (y + h * (a31 * s.k1 + a32 * s.k2)).eval());
  s.k4 = f(t + c4 * h, (y + h * (a41 * s.k1 + a43 * s.k3)).eval());
  s.k5 = f(t + c5 * h, (y + h * (a51 * s.k1 + a53 * s.k3 + a54 * s.k4)).eval());
  s.k6 = f(t + c6 * h, (y + h * (a61 * s.k1 + a64 * s.k4 + a65 * s.k5)).eval());
  s.k7 = f(t + c7 * h, (y + h * (a71 * s.k1 + a74 * s.k4 + a75 * s.k5 + a76 * s.k6)).eval());
  s.k8 = f(t + c8 * h,
           (y + h * (a81 * s.k1 + a84 * s.k4 + a85 * s.k5 + a86 * s.k6 + a87 * s.k7)).eval());
  s.k9 = f(t + c9 * h, (y + h * (a91 * s.k1 + a94 * s.k4 + a95 * s.k5 + a96 * s.k6 +
                                 a97 * s.k7 + a98 * s.k8))
                           .eval());
  s.k10 = f(t + c10 * h, (y + h * (a101 * s.k1 + a104 * s.k4 + a105 * s.k5 + a106 * s.k6 +
                                   a107 * s.k7 + a108 * s.k8 + a109 * s.k9))
                             .eval());
  s.k11 = f(t + c11 * h, (y + h * (a111 * s.k1 + a114 * s.k4 + a115 * s.k5 + a116 * s.k6 +
                                   a117 * s.k7 + a118 * s.k8 + a119 * s.k9 + a1110 * s.k10))
                             .eval());
  s.k12 = f(t + h, (y + h * (a121 * s.k1 + a124 * s.k4 + a125 * s.k5 + a126 * s.k6 +
                             a127 * s.k7 + a128 * s.k8 + a129 * s.k9 + a1210 * s.k10 +
                             a1211 * s.k11))
                       .eval());
  s.k4 = b1 * s.k1 + b6 * s.k6 + b7 * s.k7 + b8 * s.k8 + b9 * s.k9 + b10 * s.k10 +
         b11 * s.k11 + b12 * s.k12;
  return (y + h * s.k4).eval();
}

// Normalized error (<= 1 means acceptable) of the step just taken.
template <typename State>
double error_norm(const Stages<State>& s, const State& y, const State& y_new, double h,
                  const StepControl& ctl) {
  double err = 0.0, err2 = 0.0;
  const Eigen::Index n = y.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sk = 1.0 / (ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(y_new[i])));
    const double e2 = std::abs(s.k4[i] - bhh1 * s.k1[i] - bhh2 * s.k9[i] - bhh3 * s.k12[i]) * sk;
    const double e = std::abs(er1 * s.k1[i] + er6 * s.k6[i] + er7 * s.k7[i] + er8 * s.k8[i] +
                              er9 * s.k9[i] + er10 * s.k10[i] + er11 * s.k11[i] +
                              er12 * s.k12[i]) *
                     sk;
    err += e * e;
    err2 += e2 * e2;
  }
  const double deno = err + 0.01 * err2;
  return std::abs(h) * err * std::sqrt(1.0 / (deno <= 0.0 ? n : deno * n));
}

}  // namespace dop853_detail

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0) with adaptive steps.
/// Throws ToleranceNotMet when the step budget is exhausted or the step
/// size underflows; the exception carries the last normalized error.
template <typename State, typename Rhs>
IntegrationResult<State> integrate_dop853(Rhs&& f, double t0, double t1, State y,
                                          const StepControl& ctl = {}) {
  using namespace dop853_detail;
  IntegrationResult<State> out;
  if (t1 == t0) {
    out.y = std::move(y);
    return out;
  }
  const double span = t1 - t0;
  const double h_max = std::min(ctl.h_max, span);
  Stages<State> s;
  s.k1 = f(t0, y);

  // Initial step guess (Hairer's hinit, order 8).
  double h;
  {
    auto scaled = [&](const State& v) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double sk = ctl.atol + ctl.rtol * std::abs(y[i]);
        acc += std::norm(v[i]) / (sk * sk);
      }
      return std::sqrt(acc / v.size());
    };
    const double dnf = scaled(s.k1), dny = scaled(y);
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, h_max);
    const State y1 = (y + h * s.k1).eval();
    const State f1 = f(t0 + h, y1);
    const double der2 = scaled((f1 - s.k1).eval()) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 1.0 / 8.0);
    h = std::min({100 * std::abs(h), h1, h_max});
  }

  const double expo1 = 1.0 / 8.0 - ctl.beta * 0.2;
  double facold = 1e-4;
  double t = t0;
  bool last = false, reject = false;
  long steps = 0;
  for (;;) {
    if (steps++ >= ctl.max_steps)
      throw ToleranceNotMet("step budget of " + std::to_string(ctl.max_steps) +
                                " exhausted at t = " + std::to_string(t),
                            out.last_error);
    if (0.1 * std::abs(h) <= std::abs(t) * std::numeric_limits<double>::epsilon())
      throw ToleranceNotMet("step size underflow at t = " + std::to_string(t), out.last_error);
    if (t + 1.01 * h - t1 > 0.0) {
      h = t1 - t;
      last = true;
    }
    const State y_new = step(f, t, y, h, s);
    const double err = error_norm(s, y, y_new, h, ctl);
    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, ctl.beta);
    fac = std::clamp(fac / ctl.safety, 1.0 / ctl.fac_max, 1.0 / ctl.fac_min);
    double h_new = h / fac;
    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      ++out.accepted;
      out.last_error = err;
      y = y_new;
      t += h;
      if (last) {
        out.y = std::move(y);
        return out;
      }
      s.k1 = f(t, y);
      h_new = std::min(h_new, h_max);
      if (reject) h_new = std::min(h_new, h);
      reject = false;
    } else {
      h_new = h / std::min(1.0 / ctl.fac_min, fac11 / ctl.safety);
      reject = true;
      last = false;
      if (out.accepted >= 1) ++out.rejected;
    }
    h = h_new;
  }
}

/// Fixed-step DOP853 with `steps` equal steps; used for convergence-order checks.
template <typename State, typename Rhs>
State integrate_dop853_fixed(Rhs&& f, double t0, double t1, State y, long steps) {
  dop853_detail::Stages<State> s;
  const double h = (t1 - t0) / steps;
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    s.k1 = f(t, y);
    y = dop853_detail::step(f, t, y, h, s);
  }
  return y;
}

}  // namespace holab
