#pragma once

#include "resonance/contour.hpp"
#include "resonance/solver.hpp"
#include "resonance/spectral.hpp"

#include <json.hpp>

#include <string>

namespace resonance {

using Json = nlohmann::ordered_json;

// Complex numbers are [re, im]; plain numbers are accepted on input.
Json to_json(Complex z);
Json to_json(const Matrix& m);
Complex complex_from_json(const Json& j, const std::string& what = "value");
Matrix matrix_from_json(const Json& j, const std::string& what = "matrix");
// Accepts numbers and the strings "-inf", "+inf", "inf" (Unicode minus allowed).
double real_from_json(const Json& j, const std::string& what);
Json real_to_json(double x);

// ModelError on any schema violation; user-plugin couplings cannot be serialized.
Json model_to_json(const SpectralModel& model);
SpectralModel model_from_json(const Json& j);
SpectralModel load_model(const std::string& path);
Json read_json_file(const std::string& path);

struct ContourConfig {
    std::vector<CurveSpec> specs;  // one per interval, or a single broadcast spec
    MultiIndex l;
    ContourOptions options;
};

// {"shape", "radius"/"depth", "l", "panels", "points", optional "pieces", "ray_extent", "quad_tol"}.
ContourConfig contour_from_json(const Json& j);
Json contour_to_json(const ContourConfig& c);
Contour build_contour(const SpectralModel& model, const ContourConfig& c);

Json certificate_to_json(const SolvabilityCertificate& c);
Json decomposition_to_json(const SpectralDecomposition& d);

}  // namespace resonance
