#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "holab/asymptotics.hpp"
#include "holab/glued_spectrum.hpp"
#include "holab/holonomy.hpp"
#include "holab/lattice.hpp"
#include "holab/path_model.hpp"

namespace holab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "holonomy-lab/1";

/// %.17g, which round-trips every double.
std::string format_double(double x);

/// Path spec:
///   {"kind":"straight","length":L}
///   {"kind":"circle","radius":r,"t_end":T}
///   {"kind":"general","preset":"ramp"|"wobble", ...,"t_end":T}
///   {"kind":"general","samples":[[t,m_re,m_im,n,mdot_re,mdot_im,ndot,mddot_re,mddot_im],...]}
PathProfile path_from_json(const Json& j, const PathTolerances& tol = {});
/// `arg` is inline JSON (starting with '{') or a file name.
PathProfile load_path(const std::string& arg, const PathTolerances& tol = {});
Json read_json_argument(const std::string& arg);

/// {"schema": ..., "kind": kind} followed by the fields of `body`.
Json envelope(const std::string& kind, const Json& body);
/// Checks the schema tag and kind, returns the document.
const Json& check_envelope(const Json& doc, const std::string& kind);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

std::string sweep_csv(const CSweep& s);
CSweep parse_sweep_csv(const std::string& text);
Json to_json(const CSweep& s);
CSweep sweep_from_json(const Json& doc);

std::string residual_csv(const std::vector<ResidualSample>& r);
std::vector<ResidualSample> parse_residual_csv(const std::string& text);
Json residuals_to_json(const std::vector<ResidualSample>& r);
std::vector<ResidualSample> residuals_from_json(const Json& doc);

Json to_json(const DecayReport& r);
DecayReport decay_report_from_json(const Json& doc);

Json to_json(const ConstellationMatrix& m);
ConstellationMatrix matrix_from_json(const Json& doc);
/// Aligned text table with exception markers and the iota row.
std::string matrix_text(const ConstellationMatrix& m);

/// {"f0": {"kind":"zero"|"bump"|"frt", ...}, "f1": [{"re":..,"im":..,"n":[..]}, ...]}
AlgebraElement algebra_element_from_json(const Json& j, const NumericBasis& basis);
/// Array of {"type":1,"intervals":[[lo,hi],...]}, {"type":2,"compact":[[lo,hi],...]},
/// {"type":3,"f1":[...],"discs":[{"re":..,"im":..,"r":..}]}.
std::vector<SubbasisSet> neighborhoods_from_json(const Json& j, const NumericBasis& basis);

}  // namespace holab
