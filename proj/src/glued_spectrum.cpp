#include "holab/glued_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "holab/errors.hpp"
#include "holab/holonomy.hpp"

namespace holab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  return s;
}

double parse_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("malformed " + what + " '" + raw + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ValidationError("malformed " + what + " '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

void check_rank(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw RankMismatch(std::string(what) + " has rank " + std::to_string(got) + ", expected " +
                       std::to_string(want));
}

bool in_discs(Complex z, const std::vector<Disc>& discs) {
  return std::any_of(discs.begin(), discs.end(),
                     [&](const Disc& d) { return std::abs(z - d.center) < d.radius; });
}

std::vector<LatticeTerm> merge_terms(std::vector<LatticeTerm> terms) {
  std::map<std::vector<long>, Complex> acc;
  for (auto& t : terms) acc[t.n] += t.coeff;
  std::vector<LatticeTerm> out;
  for (auto& [n, a] : acc)
    if (a != Complex{}) out.push_back({a, n});
  return out;
}

}  // namespace

double basis_label_value(const std::string& label) {
  if (label == "1") return 1.0;
  if (label == "pi") return std::numbers::pi;
  if (label.rfind("sqrt", 0) == 0) {
    const std::string arg = label.substr(4);
    if (arg.empty() || !std::all_of(arg.begin(), arg.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ValidationError("malformed basis label '" + label + "'");
    const double v = std::stod(arg);
    if (v <= 0.0) throw ValidationError("basis label '" + label + "' is zero");
    return std::sqrt(v);
  }
  const double v = parse_double(label, "basis label");
  if (v == 0.0) throw ValidationError("basis label '" + label + "' is zero");
  return v;
}

NumericBasis parse_numeric_basis(const std::string& s) {
  NumericBasis b;
  if (trim(s).empty()) return b;
  for (const auto& tok : split(s, ',')) {
    const std::string label = trim(tok);
    if (std::find(b.labels.begin(), b.labels.end(), label) != b.labels.end())
      throw ValidationError("duplicate basis label '" + label + "'");
    b.values.push_back(basis_label_value(label));
    b.labels.push_back(label);
  }
  return b;
}

GluedPoint GluedPoint::real(double y) {
  if (!std::isfinite(y) || y == 0.0) throw ValidationError("real point must be finite and nonzero");
  return GluedPoint(RealPoint{y});
}

GluedPoint GluedPoint::torus(std::vector<double> theta) {
  for (double t : theta)
    if (!(t >= 0.0 && t < kTwoPi)) throw ValidationError("torus angles must lie in [0, 2pi)");
  return GluedPoint(TorusPoint{std::move(theta)});
}

GluedPoint GluedPoint::torus_wrapped(std::vector<double> theta) {
  for (double& t : theta) {
    if (!std::isfinite(t)) throw ValidationError("torus angles must be finite");
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
  }
  return torus(std::move(theta));
}

std::string GluedPoint::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_real()) {
    os << "real:" << y();
  } else {
    os << "torus:";
    for (std::size_t i = 0; i < theta().size(); ++i) os << (i ? "," : "") << theta()[i];
  }
  return os.str();
}

GluedPoint parse_point(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("point must be real:<y> or torus:<angles>");
  const std::string kind = trim(s.substr(0, colon)), rest = s.substr(colon + 1);
  if (kind == "real") return GluedPoint::real(parse_double(rest, "real point"));
  if (kind == "torus") {
    std::vector<double> theta;
    if (!trim(rest).empty())
      for (const auto& tok : split(rest, ',')) theta.push_back(parse_double(tok, "torus angle"));
    return GluedPoint::torus(std::move(theta));
  }
  throw ValidationError("unknown point kind '" + kind + "'");
}

F0 f0_zero() { return F0{"zero", {}, [](double) { return Complex{}; }}; }

F0 f0_bump(double center, double width) {
  if (!(width > 0.0) || !(std::abs(center) > width) || !std::isfinite(center))
    throw ValidationError("bump needs width > 0 and support avoiding 0 (|center| > width)");
  return F0{"bump", {center, width}, [center, width](double y) {
              const double u = (y - center) / width;
              if (std::abs(u) >= 1.0) return Complex{};
              return Complex{std::exp(1.0 - 1.0 / (1.0 - u * u)), 0.0};
            }};
}

F0 f0_frt(double r, double t) {
  f_rt(r, t, 1.0);  // validates r, t
  return F0{"frt", {r, t}, [r, t](double y) { return Complex{f_rt(r, t, y), 0.0}; }};
}

AlgebraElement AlgebraElement::make(NumericBasis basis, F0 f0, std::vector<LatticeTerm> f1,
                                    double eps_tail) {
  for (const auto& t : f1) check_rank(t.n.size(), basis.rank(), "frequency vector");
  for (double probe : {0.0, 1e3, -1e3, 1e6, -1e6}) {
    const double v = std::abs(f0(probe));
    if (!(v < eps_tail))
      throw AlgebraMembership("f0 (" + f0.kind + ") is " + std::to_string(v) + " at probe " +
                              std::to_string(probe) + "; it must vanish at 0 and at infinity");
  }
  return AlgebraElement(std::move(basis), std::move(f0), merge_terms(std::move(f1)));
}

double AlgebraElement::frequency(const LatticeTerm& t) const {
  double l = 0.0;
  for (std::size_t j = 0; j < t.n.size(); ++j) l += static_cast<double>(t.n[j]) * basis_.values[j];
  return l;
}

Complex AlgebraElement::f1_at_real(double y) const {
  Complex acc{};
  for (const auto& t : f1_) acc += t.coeff * std::polar(1.0, frequency(t) * y);
  return acc;
}

Complex AlgebraElement::f1_at_torus(const std::vector<double>& theta) const {
  check_rank(theta.size(), basis_.rank(), "torus point");
  Complex acc{};
  for (const auto& t : f1_) {
    double phase = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) phase += static_cast<double>(t.n[j]) * theta[j];
    acc += t.coeff * std::polar(1.0, phase);
  }
  return acc;
}

AlgebraElement operator*(const AlgebraElement& g, const AlgebraElement& h) {
  if (g.basis_.labels != h.basis_.labels) throw BasisMismatch("algebra elements over different bases");
  std::vector<LatticeTerm> prod;
  for (const auto& s : g.f1_)
    for (const auto& t : h.f1_) {
      LatticeTerm p{s.coeff * t.coeff, s.n};
      for (std::size_t j = 0; j < p.n.size(); ++j) p.n[j] += t.n[j];
      prod.push_back(std::move(p));
    }
  F0 f0{"product", {}, [g, h](double y) {
          const Complex g0 = g.f0_(y), h0 = h.f0_(y);
          return g0 * h0 + g0 * h.f1_at_real(y) + g.f1_at_real(y) * h0;
        }};
  return AlgebraElement(g.basis_, std::move(f0), merge_terms(std::move(prod)));
}

Complex evaluate(const GluedPoint& pt, const AlgebraElement& g) {
  if (pt.is_real()) return g.f0()(pt.y()) + g.f1_at_real(pt.y());
  return g.f1_at_torus(pt.theta());
}

GluedPoint iota(double c, const NumericBasis& basis) {
  if (c != 0.0) return GluedPoint::real(c);
  return GluedPoint::torus(std::vector<double>(basis.rank(), 0.0));
}

SubbasisSet type1(std::vector<Interval> intervals) {
  for (const auto& iv : intervals)
    if (!(iv.lo < iv.hi)) throw ValidationError("open interval needs lo < hi");
  return Type1Set{std::move(intervals)};
}

SubbasisSet type2(std::vector<Interval> compact) {
  for (const auto& iv : compact) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
      throw ValidationError("compact interval needs finite lo <= hi");
    if (iv.lo <= 0.0 && 0.0 <= iv.hi)
      throw ValidationError("compact set must avoid 0 to be compact in R \\ {0}");
  }
  return Type2Set{std::move(compact)};
}

SubbasisSet type3(AlgebraElement f, std::vector<Disc> discs) {
  for (const auto& d : discs)
    if (!(d.radius > 0.0)) throw ValidationError("disc radius must be positive");
  return Type3Set{std::move(f), std::move(discs)};
}

bool in_subbasis(const GluedPoint& pt, const SubbasisSet& S) {
  if (const auto* s1 = std::get_if<Type1Set>(&S)) {
    if (!pt.is_real()) return false;
    return std::any_of(s1->intervals.begin(), s1->intervals.end(),
                       [&](const Interval& iv) { return iv.lo < pt.y() && pt.y() < iv.hi; });
  }
  if (const auto* s2 = std::get_if<Type2Set>(&S)) {
    if (!pt.is_real()) return true;
    return std::none_of(s2->compact.begin(), s2->compact.end(),
                        [&](const Interval& iv) { return iv.lo <= pt.y() && pt.y() <= iv.hi; });
  }
  const auto& s3 = std::get<Type3Set>(S);
  const Complex z = pt.is_real() ? s3.f.f1_at_real(pt.y()) : s3.f.f1_at_torus(pt.theta());
  return in_discs(z, s3.discs);
}

ConvergenceCertificate convergence_certificate(const std::vector<double>& seq,
                                               const GluedPoint& target,
                                               const std::vector<SubbasisSet>& nbhd,
                                               const NumericBasis& basis,
                                               std::size_t min_terms) {
  if (seq.size() < min_terms)
    throw ValidationError("sequence has " + std::to_string(seq.size()) + " terms, need at least " +
                          std::to_string(min_terms));
  if (!target.is_real()) check_rank(target.theta().size(), basis.rank(), "target");
  for (std::size_t i = 0; i < nbhd.size(); ++i)
    if (!in_subbasis(target, nbhd[i]))
      throw TargetNotInNeighborhood("neighborhood " + std::to_string(i) + " does not contain " +
                                    target.describe());
  ConvergenceCertificate cert;
  cert.converges = true;
  for (const auto& S : nbhd) {
    std::size_t entry = 0;
    for (std::size_t n = 0; n < seq.size(); ++n)
      if (!in_subbasis(iota(seq[n], basis), S)) entry = n + 1;
    cert.entry_index.push_back(entry);
    if (entry > seq.size() / 2) cert.converges = false;
  }
  return cert;
}

bool converges(const std::vector<double>& seq, const GluedPoint& target,
               const std::vector<SubbasisSet>& nbhd, const NumericBasis& basis) {
  return convergence_certificate(seq, target, nbhd, basis).converges;
}

std::vector<double> generate_sequence(const std::string& raw, long count) {
  if (count < 1) throw ValidationError("sequence length must be positive");
  const std::string s = trim(raw);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (s.size() > 2 && s.compare(s.size() - 2, 2, "*n") == 0) {
    const std::string k = s.substr(0, s.size() - 2);
    const double factor = k == "2pi" ? kTwoPi : (k == "pi" ? std::numbers::pi : parse_double(k, "sequence factor"));
    for (long n = 1; n <= count; ++n) out.push_back(factor * static_cast<double>(n));
    return out;
  }
  if (s == "n") {
    for (long n = 1; n <= count; ++n) out.push_back(static_cast<double>(n));
    return out;
  }
  if (s.size() > 4 && s.compare(s.size() - 4, 4, "+1/n") == 0) {
    const double a = parse_double(s.substr(0, s.size() - 4), "sequence offset");
    for (long n = 1; n <= count; ++n) out.push_back(a + 1.0 / static_cast<double>(n));
    return out;
  }
  throw ValidationError("unknown sequence '" + raw + "' (expected 2pi*n, n, <k>*n or <a>+1/n)");
}

}  // namespace holab
