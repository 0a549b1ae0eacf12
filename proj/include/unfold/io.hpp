#pragma once
// JSON formats for forms, DSP instances, solutions and reports.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "unfold/diagram.hpp"
#include "unfold/dsp.hpp"
#include "unfold/strata.hpp"

namespace unfold {

using Json = nlohmann::json;

/// Malformed or inconsistent input data.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json to_json(const QQi& q);
QQi qqi_from_json(const Json& j);
Json to_json(const Mat<QQi>& m);
Mat<QQi> qmat_from_json(const Json& j, int n);
Json to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json to_json(const Mat<Complex>& m);
Mat<Complex> cmat_from_json(const Json& j);

/// {"n": 2, "H": [[h_0...], [h_1...], ...], "J0": [[...]]}; H lists levels from the residue up.
/// The form is sorted into the fundamental domain on input.
Json to_json(const CanonicalForm& f);
CanonicalForm form_from_json(const Json& j);

/// {"points": [{"t": "0", "form": {...}, "c": [...]}, ...], "tol": ..., "seed": ..., ...}
Json to_json(const DSPInstance& in);
DSPInstance instance_from_json(const Json& j);

Json to_json(const TriangularCoords<Complex>& t);
TriangularCoords<Complex> coords_from_json(const Json& j);
Json to_json(const ConnectionOnP1& c);
Json to_json(const DSPSolution& s, const DSPInstance& in);
/// Returns the solution and fills the instance it was computed for.
DSPSolution solution_from_json(const Json& j, DSPInstance& in);

Json to_json(const UnfoldedDecomposition& d);
Json to_json(const UnfoldingDiagram& d);
Json to_json(const ReducedDiagram& d);
Json to_json(const VerifyReport& r);

Json read_json_file(const std::string& path);

}  // namespace unfold
