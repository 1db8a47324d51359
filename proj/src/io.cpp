#include "holab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "holab/errors.hpp"

namespace holab {

namespace {

double number_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double number_field_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number_field(j, key) : fallback;
}

// Non-finite doubles become null in JSON.
Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
double number_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text, const std::string& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw ValidationError("CSV header must be '" + header + "'");
  std::size_t cols = 1;
  for (char ch : header) cols += ch == ',';
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      // strtod, unlike stod, accepts subnormals.
      char* end = nullptr;
      const double x = std::strtod(tok.c_str(), &end);
      if (tok.empty() || end != tok.c_str() + tok.size())
        throw ValidationError("malformed CSV number '" + tok + "'");
      row.push_back(x);
    }
    if (row.size() != cols) throw ValidationError("CSV row has wrong column count: " + line);
    rows.push_back(std::move(row));
  }
  return rows;
}

PathProfile general_from_json(const Json& j, const PathTolerances& tol) {
  if (j.contains("samples")) {
    std::vector<ProfileSample> samples;
    for (const auto& row : j.at("samples")) {
      if (!row.is_array() || row.size() != 9)
        throw ValidationError(
            "each sample must be [t, m_re, m_im, n, mdot_re, mdot_im, ndot, mddot_re, mddot_im]");
      std::vector<double> v;
      for (const auto& x : row) {
        if (!x.is_number()) throw ValidationError("sample entries must be numbers");
        v.push_back(x.get<double>());
      }
      samples.push_back({v[0], {v[1], v[2]}, v[3], {v[4], v[5]}, v[6], {v[7], v[8]}});
    }
    return sampled_profile(std::move(samples), tol);
  }
  if (!j.contains("preset")) throw ValidationError("general path needs 'samples' or 'preset'");
  const std::string preset = j.at("preset").get<std::string>();
  if (preset == "ramp")
    return pitch_ramp_profile(number_field_or(j, "n0", 0.2), number_field_or(j, "slope", 0.1),
                              number_field_or(j, "omega", 1.0), number_field_or(j, "t_end", 3.0), tol);
  if (preset == "wobble")
    return pitch_wobble_profile(number_field_or(j, "amplitude", 0.5), number_field_or(j, "t_end", 3.0),
                                tol);
  throw ValidationError("unknown general preset '" + preset + "' (expected ramp or wobble)");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

PathProfile path_from_json(const Json& j, const PathTolerances& tol) {
  try {
    if (!j.is_object() || !j.contains("kind")) throw ValidationError("path spec needs a 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "straight") return straight_profile(number_field(j, "length"), tol);
    if (kind == "circle") {
      const double r = number_field(j, "radius");
      return circle_profile(r, number_field_or(j, "t_end", 2.0 * std::numbers::pi * r), tol);
    }
    if (kind == "general") return general_from_json(j, tol);
    throw ValidationError("unknown path kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed path spec: ") + e.what());
  }
}

Json read_json_argument(const std::string& arg) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg);
    if (!in) throw ValidationError("cannot open '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

PathProfile load_path(const std::string& arg, const PathTolerances& tol) {
  return path_from_json(read_json_argument(arg), tol);
}

Json envelope(const std::string& kind, const Json& body) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = kind;
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

const Json& check_envelope(const Json& doc, const std::string& kind) {
  if (!doc.is_object() || doc.value("schema", "") != kSchema)
    throw ValidationError(std::string("expected schema ") + kSchema);
  if (doc.value("kind", "") != kind) throw ValidationError("expected document kind '" + kind + "'");
  return doc;
}

Json complex_to_json(Complex z) {
  Json j;
  j["re"] = number_or_null(z.real());
  j["im"] = number_or_null(z.imag());
  return j;
}

Complex complex_from_json(const Json& j) {
  return {number_from(j.at("re")), number_from(j.at("im"))};
}

std::string sweep_csv(const CSweep& s) {
  std::string out = "c,a_re,a_im,b_re,b_im\n";
  for (std::size_t i = 0; i < s.c_grid.size(); ++i) {
    const SU2& h = s.values[i];
    out += format_double(s.c_grid[i]) + "," + format_double(h.a.real()) + "," +
           format_double(h.a.imag()) + "," + format_double(h.b.real()) + "," +
           format_double(h.b.imag()) + "\n";
  }
  return out;
}

CSweep parse_sweep_csv(const std::string& text) {
  CSweep s;
  for (const auto& r : parse_csv_rows(text, "c,a_re,a_im,b_re,b_im")) {
    s.c_grid.push_back(r[0]);
    s.values.push_back(SU2{{r[1], r[2]}, {r[3], r[4]}});
  }
  return s;
}

Json to_json(const CSweep& s) {
  Json body;
  body["profile"] = s.profile_id;
  body["t_end"] = s.t_end;
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.c_grid.size(); ++i) {
    Json r;
    r["c"] = s.c_grid[i];
    r["a"] = complex_to_json(s.values[i].a);
    r["b"] = complex_to_json(s.values[i].b);
    rows.push_back(r);
  }
  body["values"] = rows;
  return envelope("sweep", body);
}

CSweep sweep_from_json(const Json& doc) {
  check_envelope(doc, "sweep");
  CSweep s;
  s.profile_id = doc.at("profile").get<std::string>();
  s.t_end = doc.at("t_end").get<double>();
  for (const auto& r : doc.at("values")) {
    s.c_grid.push_back(r.at("c").get<double>());
    s.values.push_back(SU2{complex_from_json(r.at("a")), complex_from_json(r.at("b"))});
  }
  return s;
}

std::string residual_csv(const std::vector<ResidualSample>& rs) {
  std::string out = "c,res_re,res_im,abs_c_res\n";
  for (const auto& r : rs)
    out += format_double(r.c) + "," + format_double(r.value.real()) + "," +
           format_double(r.value.imag()) + "," + format_double(std::abs(r.c * r.value)) + "\n";
  return out;
}

std::vector<ResidualSample> parse_residual_csv(const std::string& text) {
  std::vector<ResidualSample> out;
  for (const auto& r : parse_csv_rows(text, "c,res_re,res_im,abs_c_res")) out.push_back({r[0], {r[1], r[2]}});
  return out;
}

Json residuals_to_json(const std::vector<ResidualSample>& rs) {
  Json rows = Json::array();
  for (const auto& r : rs) {
    Json row;
    row["c"] = r.c;
    row["residual"] = complex_to_json(r.value);
    row["abs_c_res"] = number_or_null(std::abs(r.c * r.value));
    rows.push_back(row);
  }
  Json body;
  body["residuals"] = rows;
  return envelope("residuals", body);
}

std::vector<ResidualSample> residuals_from_json(const Json& doc) {
  check_envelope(doc, "residuals");
  std::vector<ResidualSample> out;
  for (const auto& r : doc.at("residuals"))
    out.push_back({r.at("c").get<double>(), complex_from_json(r.at("residual"))});
  return out;
}

Json to_json(const DecayReport& r) {
  Json windows = Json::array();
  for (const auto& w : r.windows) {
    Json jw;
    jw["c_lo"] = w.c_lo;
    jw["c_hi"] = w.c_hi;
    jw["sup_c_residual"] = number_or_null(w.sup_c_residual);
    jw["samples"] = w.samples;
    windows.push_back(jw);
  }
  Json body;
  body["windows"] = windows;
  body["global_sup"] = number_or_null(r.global_sup);
  body["verdict"] = r.verdict == DecayVerdict::Bounded ? "Bounded" : "Suspicious";
  body["offending_window"] = r.offending_window ? Json(*r.offending_window) : Json(nullptr);
  return envelope("decay_report", body);
}

DecayReport decay_report_from_json(const Json& doc) {
  check_envelope(doc, "decay_report");
  DecayReport r;
  for (const auto& jw : doc.at("windows"))
    r.windows.push_back({jw.at("c_lo").get<double>(), jw.at("c_hi").get<double>(),
                         number_from(jw.at("sup_c_residual")), jw.at("samples").get<int>()});
  r.global_sup = number_from(doc.at("global_sup"));
  const std::string v = doc.at("verdict").get<std::string>();
  if (v != "Bounded" && v != "Suspicious") throw ValidationError("unknown decay verdict '" + v + "'");
  r.verdict = v == "Bounded" ? DecayVerdict::Bounded : DecayVerdict::Suspicious;
  if (!doc.at("offending_window").is_null()) r.offending_window = doc.at("offending_window").get<int>();
  return r;
}

Json to_json(const ConstellationMatrix& m) {
  Json body;
  body["preset"] = m.preset;
  body["rows"] = m.rows;
  body["columns"] = m.columns;
  Json iota = Json::array();
  for (bool b : m.column_iota_injective) iota.push_back(b);
  body["iota_injective"] = iota;
  Json cells = Json::array();
  for (const auto& c : m.cells) {
    Json jc;
    jc["row"] = c.row;
    jc["column"] = c.column;
    jc["verdict"] = to_string(c.verdict.tag);
    jc["symbol"] = c.verdict.symbol();
    jc["witness"] = c.verdict.witness ? Json(*c.verdict.witness) : Json(nullptr);
    jc["expected"] = c.expected;
    jc["exception"] = c.exception ? Json(*c.exception) : Json(nullptr);
    jc["exception_text"] = c.exception_text;
    jc["matches_expected"] = c.matches_expected;
    cells.push_back(jc);
  }
  body["cells"] = cells;
  body["mismatches"] = m.mismatches();
  return envelope("constellation_matrix", body);
}

ConstellationMatrix matrix_from_json(const Json& doc) {
  check_envelope(doc, "constellation_matrix");
  ConstellationMatrix m;
  m.preset = doc.at("preset").get<std::string>();
  m.rows = doc.at("rows").get<std::vector<std::string>>();
  m.columns = doc.at("columns").get<std::vector<std::string>>();
  m.column_iota_injective = doc.at("iota_injective").get<std::vector<bool>>();
  for (const auto& jc : doc.at("cells")) {
    MatrixCell c;
    c.row = jc.at("row").get<std::string>();
    c.column = jc.at("column").get<std::string>();
    c.verdict.tag = verdict_tag_from_string(jc.at("verdict").get<std::string>());
    if (!jc.at("witness").is_null()) c.verdict.witness = jc.at("witness").get<std::string>();
    c.expected = jc.at("expected").get<std::string>();
    if (!jc.at("exception").is_null()) c.exception = jc.at("exception").get<int>();
    c.exception_text = jc.at("exception_text").get<std::string>();
    c.matches_expected = jc.at("matches_expected").get<bool>();
    m.cells.push_back(std::move(c));
  }
  return m;
}

std::string matrix_text(const ConstellationMatrix& m) {
  std::size_t w0 = 10;
  for (const auto& r : m.rows) w0 = std::max(w0, r.size());
  const std::size_t w = 10;
  const auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  std::string out = pad("", w0 + 2);
  for (const auto& c : m.columns) out += pad(c, w);
  out += "\n" + pad("cl->qu", w0 + 2);
  for (std::size_t j = 0; j < m.columns.size(); ++j)
    out += pad(std::string(m.column_iota_injective[j] ? "yes" : "no") + (j == 0 ? "(1)" : ""), w);
  out += "\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out += pad(m.rows[i], w0 + 2);
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      const auto& c = m.at(i, j);
      std::string s = c.verdict.symbol();
      if (c.exception) s += "(" + std::to_string(*c.exception) + ")";
      else if (!c.matches_expected) s += "!";
      out += pad(s, w);
    }
    out += "\n";
  }
  out += "\nexceptions:\n";
  std::vector<int> seen;
  for (const auto& c : m.cells)
    if (c.exception && std::find(seen.begin(), seen.end(), *c.exception) == seen.end()) {
      seen.push_back(*c.exception);
      out += "  (" + std::to_string(*c.exception) + ") " + c.exception_text + "\n";
    }
  out += "mismatches on non-exception cells: " + std::to_string(m.mismatches()) + "\n";
  return out;
}

AlgebraElement algebra_element_from_json(const Json& j, const NumericBasis& basis) {
  try {
    F0 f0 = f0_zero();
    if (j.contains("f0")) {
      const Json& jf = j.at("f0");
      const std::string kind = jf.at("kind").get<std::string>();
      if (kind == "bump")
        f0 = f0_bump(number_field(jf, "center"), number_field(jf, "width"));
      else if (kind == "frt")
        f0 = f0_frt(number_field(jf, "r"), number_field(jf, "t"));
      else if (kind != "zero")
        throw ValidationError("unknown f0 kind '" + kind + "' (expected zero, bump or frt)");
    }
    std::vector<LatticeTerm> terms;
    if (j.contains("f1"))
      for (const auto& jt : j.at("f1"))
        terms.push_back({{number_field_or(jt, "re", 0.0), number_field_or(jt, "im", 0.0)},
                         jt.at("n").get<std::vector<long>>()});
    return AlgebraElement::make(basis, std::move(f0), std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed algebra element: ") + e.what());
  }
}

std::vector<SubbasisSet> neighborhoods_from_json(const Json& j, const NumericBasis& basis) {
  try {
    if (!j.is_array()) throw ValidationError("neighborhood family must be a JSON array");
    const auto intervals = [](const Json& arr) {
      std::vector<Interval> out;
      for (const auto& iv : arr) {
        if (!iv.is_array() || iv.size() != 2) throw ValidationError("interval must be [lo, hi]");
        out.push_back({iv[0].get<double>(), iv[1].get<double>()});
      }
      return out;
    };
    std::vector<SubbasisSet> out;
    for (const auto& js : j) {
      const int type = js.at("type").get<int>();
      if (type == 1) {
        out.push_back(type1(intervals(js.at("intervals"))));
      } else if (type == 2) {
        out.push_back(type2(intervals(js.at("compact"))));
      } else if (type == 3) {
        Json element;
        element["f1"] = js.at("f1");
        std::vector<Disc> discs;
        for (const auto& jd : js.at("discs"))
          discs.push_back({{number_field_or(jd, "re", 0.0), number_field_or(jd, "im", 0.0)},
                           number_field(jd, "r")});
        out.push_back(type3(algebra_element_from_json(element, basis), std::move(discs)));
      } else {
        throw ValidationError("subbasis type must be 1, 2 or 3");
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed neighborhood family: ") + e.what());
  }
}

}  // namespace holab
