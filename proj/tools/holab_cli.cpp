// holab: command-line front end for the holonomy lab library.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "holab/asymptotics.hpp"
#include "holab/errors.hpp"
#include "holab/glued_spectrum.hpp"
#include "holab/holonomy.hpp"
#include "holab/io.hpp"
#include "holab/lattice.hpp"

namespace {

using namespace holab;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Common {
  double tol = 1e-10;
  std::string out;
  std::string format;
  unsigned long long seed = 0;
};

struct GridArgs {
  std::string path;
  double c = 0.0;
  double c_min = 0.0;
  double c_max = 10.0;
  int c_steps = 101;
  std::string branch = "beta";
  int windows = 0;
  int per_window = 64;
  std::string from;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_of(const Common& co, const std::string& fallback,
                      std::initializer_list<const char*> allowed) {
  const std::string f = co.format.empty() ? fallback : co.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw ValidationError("format '" + f + "' is not supported by this subcommand");
}

HolonomyOptions holonomy_options(const Common& co) {
  HolonomyOptions opt;
  opt.tol = co.tol;
  return opt;
}

Branch parse_branch(const std::string& s) {
  if (s == "alpha") return Branch::Alpha;
  if (s == "beta") return Branch::Beta;
  throw ValidationError("branch must be alpha or beta");
}

std::vector<double> c_grid(const GridArgs& g) {
  if (g.windows > 0) {
    if (!(g.c_min > 0.0)) throw ValidationError("--c-min must be positive with --windows");
    return dyadic_grid(g.c_min, g.windows, g.per_window);
  }
  if (g.c_steps < 1) throw ValidationError("--c-steps must be positive");
  if (g.c_steps > 1 && !(g.c_max > g.c_min)) throw ValidationError("--c-max must exceed --c-min");
  return linear_grid(g.c_min, g.c_max, g.c_steps);
}

std::vector<ResidualSample> residuals_for(const GridArgs& g, const Common& co) {
  if (!g.from.empty()) {
    std::ifstream in(g.from);
    if (!in) throw ValidationError("cannot open '" + g.from + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_residual_csv(ss.str());
  }
  const PathProfile p = load_path(g.path);
  return residual_sweep(p, parse_branch(g.branch), c_grid(g), holonomy_options(co));
}

ComplexFunction parse_function(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ValidationError("malformed number in --function '" + spec + "'");
    }
    if (used != s.size()) throw ValidationError("malformed number in --function '" + spec + "'");
    return v;
  };
  if (name == "one" && args.empty()) return [](double) { return Complex{1.0, 0.0}; };
  if (name == "sin" && args.empty()) return [](double c) { return Complex{std::sin(c), 0.0}; };
  if (name == "chi" && !args.empty()) {
    const double l = args.rfind("sqrt", 0) == 0 ? basis_label_value(args) : number(args);
    return [l](double c) { return std::polar(1.0, l * c); };
  }
  if (name == "frt") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ValidationError("frt needs r,t");
    const double r = number(args.substr(0, comma)), t = number(args.substr(comma + 1));
    f_rt(r, t, 1.0);
    return [r, t](double c) { return Complex{f_rt(r, t, c), 0.0}; };
  }
  throw ValidationError("unknown function '" + spec + "' (expected chi:l, frt:r,t, sin or one)");
}

// Exhaustive search over integer coefficients |n_i| <= bound.
bool brute_force_member(const std::vector<std::vector<long long>>& gens, const std::vector<long long>& l,
                        long long bound) {
  const std::size_t m = gens.size(), d = l.size();
  std::vector<long long> n(m, -bound);
  for (;;) {
    bool hit = true;
    for (std::size_t j = 0; j < d && hit; ++j) {
      long long s = 0;
      for (std::size_t i = 0; i < m; ++i) s += n[i] * gens[i][j];
      hit = s == l[j];
    }
    if (hit) return true;
    std::size_t k = 0;
    while (k < m && n[k] == bound) n[k++] = -bound;
    if (k == m) return false;
    ++n[k];
  }
}

std::string span_self_check(int instances, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_d(1, 3), num(-9, 9), den(1, 9), small(-3, 3);
  int disagreements = 0, members = 0;
  for (int k = 0; k < instances; ++k) {
    const int d = dim_d(rng), m = dim_d(rng);
    std::vector<std::string> labels;
    for (int j = 0; j < d; ++j) labels.push_back("b" + std::to_string(j));
    std::vector<RationalVector> gens;
    while (static_cast<int>(gens.size()) < m) {
      RationalVector g;
      bool zero = true;
      for (int j = 0; j < d; ++j) {
        g.emplace_back(num(rng), den(rng));
        zero = zero && g.back() == 0;
      }
      if (!zero) gens.push_back(g);
    }
    RationalVector q(d, Rational(0));
    do {
      for (int i = 0; i < m; ++i) {
        const Rational n(small(rng));
        for (int j = 0; j < d; ++j) q[j] += n * gens[i][j];
      }
      // Denominators 11 and 13 never occur in the lattice, so this makes q a non-member.
      if (k % 2) q[rng() % d] += Rational(1, (rng() % 2) ? 11 : 13);
    } while (std::all_of(q.begin(), q.end(), [](const Rational& x) { return x == 0; }));

    const bool hnf = zspan_member(q, LengthSet::finite(labels, gens), labels);
    std::vector<const RationalVector*> all{&q};
    for (const auto& g : gens) all.push_back(&g);
    BigInt D = 1;
    for (const auto* v : all)
      for (const auto& x : *v) D = D / boost::multiprecision::gcd(D, denominator(x)) * denominator(x);
    const auto scale = [&](const RationalVector& v) {
      std::vector<long long> out;
      for (const auto& x : v) out.push_back(static_cast<long long>(numerator(x * Rational(D))));
      return out;
    };
    std::vector<std::vector<long long>> ig;
    for (const auto& g : gens) ig.push_back(scale(g));
    const bool brute = brute_force_member(ig, scale(q), 20);
    members += hnf;
    disagreements += hnf != brute;
  }
  std::ostringstream os;
  os << "instances " << instances << " members " << members << " disagreements " << disagreements << "\n";
  if (disagreements) throw NumericalError("HNF and brute-force membership disagree: " + os.str());
  return os.str();
}

void write_output(const Common& co, const std::string& text) {
  if (co.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(co.out, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + co.out + "'");
  f << text;
  if (!f) throw ValidationError("failed writing output file '" + co.out + "'");
}

void add_common(CLI::App* sub, Common& co) {
  sub->add_option("--tol", co.tol, "integration tolerance in [1e-13, 1e-3]")->capture_default_str();
  sub->add_option("--out", co.out, "write output to this file instead of stdout");
  sub->add_option("--format", co.format, "output format: csv | json (matrix also: text)");
  sub->add_option("--seed", co.seed, "seed for randomized drivers")->capture_default_str();
}

void add_path(CLI::App* sub, GridArgs& g) {
  sub->add_option("--path", g.path, "path spec: inline JSON or file")->required();
}

void add_grid(CLI::App* sub, GridArgs& g) {
  sub->add_option("--c-min", g.c_min, "smallest c (C0 for dyadic grids)")->capture_default_str();
  sub->add_option("--c-max", g.c_max, "largest c")->capture_default_str();
  sub->add_option("--c-steps", g.c_steps, "number of equally spaced c values")->capture_default_str();
}

int run(int argc, char** argv) {
  CLI::App app{"holab: holonomy asymptotics, Z-span lattices and glued spectra"};
  app.require_subcommand(1);
  app.allow_extras(false);

  Common co;
  GridArgs g;
  std::string function_spec = "one", basis = "1", lengths, query, preset = "paper", point, element,
              seq = "2pi*n", target = "torus:0", nbhd;
  double T = 1e4, freq = 0.0;
  long samples = 2'000'000, seq_n = 2000;
  int self_check = 0;

  auto* holonomy = app.add_subcommand("holonomy", "holonomy (a, b) at one value of c");
  add_common(holonomy, co);
  add_path(holonomy, g);
  holonomy->add_option("--c", g.c, "coupling c")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "holonomy over an equally spaced c grid");
  add_common(sweep_cmd, co);
  add_path(sweep_cmd, g);
  add_grid(sweep_cmd, g);

  auto* decompose = app.add_subcommand("decompose", "residual alpha_0 = alpha - alpha_inf over c");
  add_common(decompose, co);
  add_path(decompose, g);
  add_grid(decompose, g);
  decompose->add_option("--branch", g.branch, "alpha | beta")->capture_default_str();
  decompose->add_option("--windows", g.windows, "use k dyadic windows from --c-min instead");
  decompose->add_option("--per-window", g.per_window, "samples per dyadic window")->capture_default_str();

  auto* bound = app.add_subcommand("bound", "decay certification of sup |c alpha_0| over dyadic windows");
  add_common(bound, co);
  bound->add_option("--path", g.path, "path spec: inline JSON or file");
  bound->add_option("--from", g.from, "read residuals from a decompose CSV instead of integrating");
  bound->add_option("--c-min", g.c_min, "window base C0")->required();
  bound->add_option("--windows", g.windows, "number of dyadic windows")->required();
  bound->add_option("--per-window", g.per_window, "samples per dyadic window")->capture_default_str();
  bound->add_option("--branch", g.branch, "alpha | beta")->capture_default_str();

  auto* bohr = app.add_subcommand("bohr-mean", "Bohr mean (1/2T) int_{-T}^{T} f(c) e^{-i l c} dc");
  add_common(bohr, co);
  bohr->add_option("--function", function_spec, "chi:l | frt:r,t | sin | one")->capture_default_str();
  bohr->add_option("--T", T, "half width of the averaging window")->capture_default_str();
  bohr->add_option("--samples", samples, "Simpson panels")->capture_default_str();
  bohr->add_option("--freq", freq, "Fourier-Bohr frequency l")->capture_default_str();

  auto* span = app.add_subcommand("span", "membership of a length in the Z-span of a length set");
  add_common(span, co);
  span->add_option("--basis", basis, "Q-independent basis labels, e.g. 1,sqrt2")->capture_default_str();
  span->add_option("--lengths", lengths, "generators as rational coordinate vectors, e.g. 1,0;0,1");
  span->add_option("--query", query, "query vector, e.g. 2,1/2");
  span->add_option("--self-check", self_check, "compare HNF and brute force on N random instances");

  auto* matrix = app.add_subcommand("matrix", "constellation matrix of embedding verdicts");
  add_common(matrix, co);
  matrix->add_option("--preset", preset, "paper | paper-circle")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum-eval", "evaluate an algebra element at a glued point");
  add_common(spectrum, co);
  spectrum->add_option("--basis", basis, "numeric basis labels (empty for rank 0)")->capture_default_str();
  spectrum->add_option("--point", point, "real:<y> | torus:<angles>")->required();
  spectrum->add_option("--element", element, "algebra element JSON (inline or file)")->required();

  auto* converge = app.add_subcommand("converge", "convergence certificate against a neighborhood family");
  add_common(converge, co);
  converge->add_option("--basis", basis, "numeric basis labels")->capture_default_str();
  converge->add_option("--seq", seq, "2pi*n | n | <k>*n | <a>+1/n")->capture_default_str();
  converge->add_option("--n", seq_n, "number of terms")->capture_default_str();
  converge->add_option("--target", target, "real:<y> | torus:<angles>")->capture_default_str();
  converge->add_option("--nbhd", nbhd, "neighborhood family JSON (inline or file)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    std::string text;
    if (*holonomy) {
      const std::string f = format_of(co, "csv", {"csv", "json"});
      const PathProfile p = load_path(g.path);
      const CSweep s = sweep(p, {g.c}, holonomy_options(co));
      text = f == "csv" ? sweep_csv(s) : dump(to_json(s));
    } else if (*sweep_cmd) {
      const std::string f = format_of(co, "csv", {"csv", "json"});
      const PathProfile p = load_path(g.path);
      const CSweep s = sweep(p, c_grid(g), holonomy_options(co));
      text = f == "csv" ? sweep_csv(s) : dump(to_json(s));
    } else if (*decompose) {
      const std::string f = format_of(co, "csv", {"csv", "json"});
      const auto r = residuals_for(g, co);
      text = f == "csv" ? residual_csv(r) : dump(residuals_to_json(r));
    } else if (*bound) {
      const std::string f = format_of(co, "json", {"json", "csv"});
      if (g.path.empty() == g.from.empty()) throw ValidationError("bound needs exactly one of --path or --from");
      const auto r = residuals_for(g, co);
      const DecayReport rep = verify_decay_bound(r, g.c_min, g.windows);
      if (f == "json") {
        text = dump(to_json(rep));
      } else {
        text = "c_lo,c_hi,sup_c_residual,samples\n";
        for (const auto& w : rep.windows)
          text += format_double(w.c_lo) + "," + format_double(w.c_hi) + "," +
                  format_double(w.sup_c_residual) + "," + std::to_string(w.samples) + "\n";
      }
    } else if (*bohr) {
      const std::string f = format_of(co, "json", {"json", "csv"});
      const BohrMean b = fourier_bohr_coefficient(parse_function(function_spec), freq, T, samples);
      if (f == "json") {
        Json body;
        body["function"] = function_spec;
        body["freq"] = freq;
        body["T"] = T;
        body["samples"] = samples;
        body["mean"] = complex_to_json(b.value);
        body["error_estimate"] = b.error_estimate;
        text = dump(envelope("bohr_mean", body));
      } else {
        text = "l,mean_re,mean_im,error_estimate\n" + format_double(freq) + "," +
               format_double(b.value.real()) + "," + format_double(b.value.imag()) + "," +
               format_double(b.error_estimate) + "\n";
      }
    } else if (*span) {
      const std::string f = format_of(co, "text", {"text", "csv", "json"});
      if (self_check > 0) {
        text = span_self_check(self_check, co.seed);
      } else {
        if (lengths.empty() || query.empty()) throw ValidationError("span needs --lengths and --query");
        const auto labels = parse_basis_labels(basis);
        const auto L = LengthSet::finite(labels, parse_rational_vectors(lengths));
        const auto q = parse_rational_vector(query);
        const bool member = zspan_member(q, L, labels);
        if (f == "json") {
          Json body;
          body["basis"] = labels;
          body["lengths"] = L.describe();
          body["query"] = to_string(q);
          body["member"] = member;
          text = dump(envelope("span", body));
        } else {
          text = member ? "true\n" : "false\n";
        }
      }
    } else if (*matrix) {
      const std::string f = format_of(co, "text", {"text", "json", "csv"});
      const ConstellationMatrix m = constellation_matrix(preset);
      if (f == "json") {
        text = dump(to_json(m));
      } else if (f == "text") {
        text = matrix_text(m);
      } else {
        text = "row,column,symbol,expected,exception\n";
        for (const auto& c : m.cells)
          text += "\"" + c.row + "\"," + c.column + "," + c.verdict.symbol() + "," + c.expected + "," +
                  (c.exception ? std::to_string(*c.exception) : "") + "\n";
      }
    } else if (*spectrum) {
      const std::string f = format_of(co, "json", {"json", "csv"});
      const NumericBasis b = parse_numeric_basis(basis);
      const GluedPoint pt = parse_point(point);
      const Complex v = evaluate(pt, algebra_element_from_json(read_json_argument(element), b));
      if (f == "json") {
        Json body;
        body["point"] = pt.describe();
        body["value"] = complex_to_json(v);
        text = dump(envelope("spectrum_eval", body));
      } else {
        text = "re,im\n" + format_double(v.real()) + "," + format_double(v.imag()) + "\n";
      }
    } else if (*converge) {
      const std::string f = format_of(co, "text", {"text", "json"});
      const NumericBasis b = parse_numeric_basis(basis);
      const auto cert = convergence_certificate(generate_sequence(seq, seq_n), parse_point(target),
                                                neighborhoods_from_json(read_json_argument(nbhd), b), b);
      if (f == "json") {
        Json body;
        body["sequence"] = seq;
        body["terms"] = seq_n;
        body["target"] = target;
        body["converges"] = cert.converges;
        body["entry_index"] = cert.entry_index;
        text = dump(envelope("convergence", body));
      } else {
        text = cert.converges ? "true\n" : "false\n";
      }
    }
    write_output(co, text);
    return 0;
  } catch (const ToleranceNotMet& e) {
    std::cerr << "error: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
