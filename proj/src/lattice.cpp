#include "holab/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "holab/errors.hpp"

namespace holab {

namespace {

bool is_zero(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

void check_labels(const std::vector<std::string>& labels) {
  if (labels.empty()) throw ValidationError("basis must contain at least one label");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw ValidationError("empty basis label");
    if (!seen.insert(l).second) throw ValidationError("duplicate basis label '" + l + "'");
  }
}

void check_vector(const RationalVector& v, std::size_t dim) {
  if (v.size() != dim)
    throw BasisMismatch("length vector has " + std::to_string(v.size()) +
                        " coordinates, basis has " + std::to_string(dim));
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + labels[i];
  return s;
}

void require_same_basis(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a != b)
    throw BasisMismatch("basis {" + join_labels(a) + "} differs from {" + join_labels(b) + "}");
}

BigInt lcm_of_denominators(const std::vector<const RationalVector*>& vs) {
  BigInt d = 1;
  for (const RationalVector* v : vs)
    for (const Rational& x : *v) {
      const BigInt q = boost::multiprecision::denominator(x);
      d = d / boost::multiprecision::gcd(d, q) * q;
    }
  return d;
}

std::vector<BigInt> scaled(const RationalVector& v, const BigInt& d) {
  std::vector<BigInt> out;
  out.reserve(v.size());
  for (const Rational& x : v) {
    const Rational y = x * Rational(d);
    out.push_back(boost::multiprecision::numerator(y));
  }
  return out;
}

IntMatrix<BigInt> scaled_matrix(const std::vector<RationalVector>& rows, std::size_t dim,
                                const BigInt& d) {
  IntMatrix<BigInt> A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto s = scaled(rows[i], d);
    for (std::size_t j = 0; j < dim; ++j) A(i, j) = s[j];
  }
  return A;
}

bool finite_member(const RationalVector& l, const FiniteLengths& L) {
  std::vector<const RationalVector*> all{&l};
  for (const auto& e : L.elements) all.push_back(&e);
  const BigInt d = lcm_of_denominators(all);
  const auto H = hermite_normal_form(scaled_matrix(L.elements, L.basis_labels.size(), d));
  return hnf_contains(H, scaled(l, d));
}

// l = q g with q dyadic.
bool dyadic_member(const RationalVector& l, const DyadicSpan& D) {
  std::size_t i = 0;
  while (D.generator[i] == 0) ++i;
  const Rational q = l[i] / D.generator[i];
  for (std::size_t j = 0; j < l.size(); ++j)
    if (l[j] != q * D.generator[j]) return false;
  return is_dyadic_rational(q);
}

}  // namespace

LengthSet LengthSet::finite(std::vector<std::string> basis_labels,
                            std::vector<RationalVector> elements) {
  check_labels(basis_labels);
  if (elements.empty()) throw ValidationError("a finite length set needs at least one element");
  for (const auto& e : elements) {
    check_vector(e, basis_labels.size());
    if (is_zero(e)) throw ValidationError("zero-length edges are excluded from length sets");
  }
  return LengthSet(FiniteLengths{std::move(basis_labels), std::move(elements)});
}

LengthSet LengthSet::full_line() { return LengthSet(FullLine{}); }

LengthSet LengthSet::dyadic(std::vector<std::string> basis_labels, RationalVector generator) {
  check_labels(basis_labels);
  check_vector(generator, basis_labels.size());
  if (is_zero(generator)) throw ValidationError("dyadic span generator must be nonzero");
  return LengthSet(DyadicSpan{std::move(basis_labels), std::move(generator)});
}

const std::vector<std::string>* LengthSet::basis_labels() const {
  if (const auto* f = std::get_if<FiniteLengths>(&v_)) return &f->basis_labels;
  if (const auto* d = std::get_if<DyadicSpan>(&v_)) return &d->basis_labels;
  return nullptr;
}

std::string LengthSet::describe() const {
  if (is_full_line()) return "FullLine";
  if (const auto* d = std::get_if<DyadicSpan>(&v_))
    return "DyadicSpan{" + to_string(d->generator) + "}";
  const auto& f = std::get<FiniteLengths>(v_);
  std::string s = "Finite{";
  for (std::size_t i = 0; i < f.elements.size(); ++i) s += (i ? ";" : "") + to_string(f.elements[i]);
  return s + "}";
}

LatticeBasis lattice_basis(const FiniteLengths& L) {
  std::vector<const RationalVector*> all;
  for (const auto& e : L.elements) all.push_back(&e);
  const BigInt d = lcm_of_denominators(all);
  return {hermite_normal_form(scaled_matrix(L.elements, L.basis_labels.size(), d)), d};
}

bool is_dyadic_rational(const Rational& q) {
  BigInt den = boost::multiprecision::denominator(q);
  while (den % 2 == 0) den /= 2;
  return den == 1;
}

bool zspan_member(const RationalVector& l, const LengthSet& L,
                  const std::vector<std::string>& basis_labels) {
  if (is_zero(l)) throw ValidationError("query length must be nonzero");
  if (L.is_full_line()) return true;
  require_same_basis(basis_labels, *L.basis_labels());
  check_vector(l, basis_labels.size());
  if (const auto* d = std::get_if<DyadicSpan>(&L.variant())) return dyadic_member(l, *d);
  return finite_member(l, std::get<FiniteLengths>(L.variant()));
}

bool zspan_subset(const LengthSet& L1, const LengthSet& L2) {
  if (L2.is_full_line()) return true;
  if (L1.is_full_line()) return false;
  require_same_basis(*L1.basis_labels(), *L2.basis_labels());
  if (const auto* d1 = std::get_if<DyadicSpan>(&L1.variant())) {
    // A finitely generated lattice has no nonzero infinitely 2-divisible element.
    if (L2.is_finite()) return false;
    return dyadic_member(d1->generator, std::get<DyadicSpan>(L2.variant()));
  }
  const auto& f1 = std::get<FiniteLengths>(L1.variant());
  return std::all_of(f1.elements.begin(), f1.elements.end(),
                     [&](const RationalVector& e) { return zspan_member(e, L2, f1.basis_labels); });
}

bool same_span(const LengthSet& L1, const LengthSet& L2) {
  return zspan_subset(L1, L2) && zspan_subset(L2, L1);
}

bool iota_injective(const LengthSet& L) {
  if (L.is_full_line()) return true;
  if (L.is_dyadic()) return false;
  return lattice_basis(std::get<FiniteLengths>(L.variant())).hnf.rows() >= 2;
}

std::string Verdict::symbol() const {
  switch (tag) {
    case VerdictTag::ExtendsInjectively: return "++";
    case VerdictTag::ExtendsNonInjectively: return "+";
    case VerdictTag::NoExtension: return "-";
    case VerdictTag::Unknown: return "?";
  }
  return "?";
}

std::string to_string(VerdictTag t) {
  switch (t) {
    case VerdictTag::ExtendsInjectively: return "ExtendsInjectively";
    case VerdictTag::ExtendsNonInjectively: return "ExtendsNonInjectively";
    case VerdictTag::NoExtension: return "NoExtension";
    case VerdictTag::Unknown: return "Unknown";
  }
  return "Unknown";
}

VerdictTag verdict_tag_from_string(const std::string& s) {
  for (auto t : {VerdictTag::ExtendsInjectively, VerdictTag::ExtendsNonInjectively,
                 VerdictTag::NoExtension, VerdictTag::Unknown})
    if (to_string(t) == s) return t;
  throw ValidationError("unknown verdict tag '" + s + "'");
}

Verdict embed_verdict(const LengthSet& L_cosm, const LengthSet& L_grav, bool grav_has_nonstraight) {
  if (grav_has_nonstraight)
    return {VerdictTag::NoExtension, "non-AP matrix function (f_{r,t} family)"};
  if (!zspan_subset(L_grav, L_cosm)) {
    std::string w;
    if (L_grav.is_full_line())
      w = "span_Z L_grav is all of R, not contained in " + L_cosm.describe();
    else if (L_grav.is_dyadic())
      w = "inf L_grav is zero: " + L_grav.describe() + " escapes " + L_cosm.describe();
    else {
      const auto& f = std::get<FiniteLengths>(L_grav.variant());
      for (const auto& e : f.elements)
        if (!zspan_member(e, L_cosm, f.basis_labels)) {
          w = "length outside lattice: " + to_string(e);
          break;
        }
    }
    return {VerdictTag::NoExtension, w};
  }
  if (zspan_subset(L_cosm, L_grav)) return {VerdictTag::ExtendsInjectively, std::nullopt};
  return {VerdictTag::ExtendsNonInjectively, std::nullopt};
}

std::size_t ConstellationMatrix::mismatches() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const MatrixCell& c) {
    return !c.exception && !c.matches_expected;
  }));
}

ConstellationMatrix constellation_matrix(const std::string& preset) {
  if (preset == "paper") return constellation_matrix(MatrixScenario{}, preset);
  if (preset == "paper-circle") return constellation_matrix(MatrixScenario{true}, preset);
  throw ValidationError("unknown matrix preset '" + preset + "' (expected paper or paper-circle)");
}

ConstellationMatrix constellation_matrix(const MatrixScenario& scenario, const std::string& name) {
  const std::vector<std::string> basis{"1", "sqrt2", "sqrt3"};
  const auto vec = [](int a, int b, int c) { return RationalVector{a, b, c}; };

  struct Row {
    std::string label;
    LengthSet lengths;
    bool nonstraight;
    std::vector<std::string> expected;  // C_PL, C_fixgeo, C_min
    std::vector<int> exceptions;        // 0 = none
  };
  const LengthSet full = LengthSet::full_line();
  const LengthSet c_min = LengthSet::finite(basis, {vec(1, 0, 0), vec(0, 1, 0)});
  const std::vector<Row> rows{
      {"G_omega", full, true, {"-", "-", "-"}, {0, 0, 0}},
      {"G_inf", full, true, {"-", "-", "-"}, {0, 0, 0}},
      {"G_k", full, true, {"-", "-", "-"}, {0, 0, 0}},
      {"G_PL", full, false, {"++", "++", "-"}, {0, 0, 0}},
      {"G_Gamma", full, true, {"-", "-", "-"}, {2, 2, 2}},
      {"G_Gamma,PL", LengthSet::finite(basis, {vec(1, 0, 0), vec(0, 0, 1)}), false,
       {"+", "+", "-"}, {3, 3, 4}},
      {"G_B", LengthSet::dyadic(basis, vec(1, 0, 0)), false, {"+", "+", "-"}, {5, 5, 6}},
  };
  const std::vector<std::pair<std::string, LengthSet>> columns{
      {"C_PL", full}, {"C_fixgeo", full}, {"C_min", c_min}};

  const std::map<int, std::string> texts{
      {2, "true at least if parallel transports along non-straight paths never depend almost "
          "periodically on c; conjectured, no proof"},
      {3, "injectivity is given if the edge lengths span R over Z; this requires a graph with "
          "uncountably many edges"},
      {4, "'++' (or '+', resp.) iff the edge lengths have the same (or smaller, resp.) Z-span as "
          "the two lengths used for C_min"},
      {5, "injectivity as in Exception 3; already the starting graph has to be uncountable"},
      {6, "'+' iff the starting graph of the subdivision contained a single edge with a length in "
          "the Z-span of the two C_min lengths"},
  };

  ConstellationMatrix M;
  M.preset = name;
  M.columns = {"C_same", "C_PL", "C_fixgeo", "C_min"};
  M.column_iota_injective = {true};
  for (const auto& [label, L] : columns) M.column_iota_injective.push_back(iota_injective(L));
  for (const Row& r : rows) {
    M.rows.push_back(r.label);
    MatrixCell same{r.label, "C_same", {VerdictTag::ExtendsInjectively, std::nullopt}, "++",
                    std::nullopt, "", true};
    M.cells.push_back(same);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      MatrixCell cell;
      cell.row = r.label;
      cell.column = columns[j].first;
      cell.expected = r.expected[j];
      if (r.exceptions[j] != 0) {
        cell.exception = r.exceptions[j];
        cell.exception_text = texts.at(r.exceptions[j]);
      }
      if (r.exceptions[j] == 2 && !scenario.gamma_includes_circle)
        cell.verdict = {VerdictTag::Unknown, std::nullopt};
      else
        cell.verdict = embed_verdict(columns[j].second, r.lengths, r.nonstraight);
      cell.matches_expected = cell.verdict.symbol() == cell.expected;
      M.cells.push_back(cell);
    }
  }
  return M;
}

std::vector<std::string> parse_basis_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    out.push_back(tok);
  }
  check_labels(out);
  return out;
}

Rational parse_rational(const std::string& raw) {
  std::string s = raw;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  const auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    return i < t.size() && std::all_of(t.begin() + i, t.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw ValidationError("malformed rational '" + raw + "'");
  const BigInt d(den[0] == '+' ? den.substr(1) : den);
  if (d == 0) throw ValidationError("zero denominator in '" + raw + "'");
  return Rational(BigInt(num[0] == '+' ? num.substr(1) : num), d);
}

RationalVector parse_rational_vector(const std::string& s) {
  RationalVector v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(parse_rational(tok));
  if (v.empty()) throw ValidationError("empty coordinate vector");
  return v;
}

std::vector<RationalVector> parse_rational_vectors(const std::string& s) {
  std::vector<RationalVector> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';')) out.push_back(parse_rational_vector(tok));
  if (out.empty()) throw ValidationError("no length vectors given");
  return out;
}

std::string to_string(const RationalVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s;
}

}  // namespace holab
