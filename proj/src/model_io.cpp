#include "resonance/model_io.hpp"

#include <cmath>
#include <fstream>

namespace resonance {

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw ModelError(what + ": missing field \"" + key + "\"");
    return j.at(key);
}

std::vector<Matrix> matrices_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ModelError(what + ": expected a nonempty list of matrices");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) out.push_back(to_json(m));
    return out;
}

CurveSpec spec_from_json(const Json& j, const std::string& what) {
    CurveSpec s;
    const std::string shape = field(j, "shape", what).get<std::string>();
    if (shape == "semicircle")
        s.shape = CurveShape::Semicircle;
    else if (shape == "rectangle")
        s.shape = CurveShape::Rectangle;
    else if (shape == "flat")
        s.shape = CurveShape::Flat;
    else
        throw ModelError(what + ": unknown shape \"" + shape + "\"");
    if (j.contains("radius")) s.size = real_from_json(j["radius"], what + ".radius");
    if (j.contains("depth")) s.size = real_from_json(j["depth"], what + ".depth");
    if (s.shape == CurveShape::Rectangle && !(s.size > 0.0)) throw ModelError(what + ": rectangle needs a positive depth");
    if (!(s.size >= 0.0) || !std::isfinite(s.size)) throw ModelError(what + ": size must be finite and nonnegative");
    if (j.contains("ray_extent")) s.ray_extent = real_from_json(j["ray_extent"], what + ".ray_extent");
    return s;
}

Json spec_to_json(const CurveSpec& s) {
    Json j;
    j["shape"] = to_string(s.shape);
    if (s.shape == CurveShape::Rectangle)
        j["depth"] = s.size;
    else if (s.shape == CurveShape::Semicircle)
        j["radius"] = s.size;
    if (s.ray_extent) j["ray_extent"] = *s.ray_extent;
    return j;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Complex complex_from_json(const Json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw ModelError(what + ": expected a number or [re, im]");
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ModelError(what + ": expected a list of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ModelError(what + ": ragged rows");
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                complex_from_json(j[i][k], what + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

double real_from_json(const Json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "-inf" || s == "−inf") return -kInf;
        if (s == "+inf" || s == "inf") return kInf;
    }
    throw ModelError(what + ": expected a number, \"-inf\" or \"+inf\"");
}

Json real_to_json(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "+inf";
    if (std::isnan(x)) return nullptr;
    return x;
}

Json model_to_json(const SpectralModel& model) {
    Json j;
    j["a1"] = to_json(model.a1);
    j["intervals"] = Json::array();
    for (const auto& iv : model.intervals)
        j["intervals"].push_back({{"lo", real_to_json(iv.lo)}, {"hi", real_to_json(iv.hi)}, {"strip", iv.strip}});
    j["discrete"] = Json::array();
    for (const auto& d : model.discrete) j["discrete"].push_back({{"nu", d.nu}, {"k", to_json(d.k)}});
    const CouplingFunction& c = model.coupling;
    Json cj;
    cj["kind"] = to_string(c.kind());
    switch (c.kind()) {
        case CouplingKind::ConstantVector: cj["row"] = to_json(Matrix(c.row().transpose()))[0]; break;
        case CouplingKind::PolynomialMatrix: cj["coefficients"] = matrices_to_json(c.coefficients()); break;
        case CouplingKind::RationalMatrix:
            cj["numerator"] = matrices_to_json(c.coefficients());
            cj["denominator"] = c.denominator();
            break;
        case CouplingKind::Plugin: throw ModelError("user-plugin couplings cannot be serialized");
    }
    if (c.decay()) cj["decay"] = {{"c", c.decay()->c}, {"theta", c.decay()->theta}};
    j["coupling"] = std::move(cj);
    return j;
}

SpectralModel model_from_json(const Json& j) {
    SpectralModel m;
    try {
        m.a1 = matrix_from_json(field(j, "a1", "model"), "a1");
        const Json& ivs = field(j, "intervals", "model");
        if (!ivs.is_array()) throw ModelError("intervals: expected a list");
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            const std::string w = "intervals[" + std::to_string(i) + "]";
            Interval iv;
            iv.lo = real_from_json(field(ivs[i], "lo", w), w + ".lo");
            iv.hi = real_from_json(field(ivs[i], "hi", w), w + ".hi");
            iv.strip = real_from_json(field(ivs[i], "strip", w), w + ".strip");
            m.intervals.push_back(iv);
        }
        if (j.contains("discrete")) {
            const Json& ds = j["discrete"];
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const std::string w = "discrete[" + std::to_string(i) + "]";
                m.discrete.push_back({real_from_json(field(ds[i], "nu", w), w + ".nu"),
                                      matrix_from_json(field(ds[i], "k", w), w + ".k")});
            }
        }
        const Json& cj = field(j, "coupling", "model");
        const std::string kind = field(cj, "kind", "coupling").get<std::string>();
        CouplingFunction c;
        if (kind == "zero") {
            c = CouplingFunction::zero(m.a1.rows());
        } else if (kind == "constant-vector") {
            const Json& row = field(cj, "row", "coupling");
            if (!row.is_array()) throw ModelError("coupling.row: expected a list");
            Vector r(static_cast<Eigen::Index>(row.size()));
            for (std::size_t i = 0; i < row.size(); ++i)
                r(static_cast<Eigen::Index>(i)) = complex_from_json(row[i], "coupling.row");
            c = CouplingFunction::constant_vector(r);
        } else if (kind == "polynomial-matrix") {
            if (cj.contains("factor"))
                c = CouplingFunction::polynomial_factor(matrices_from_json(cj["factor"], "coupling.factor"));
            else
                c = CouplingFunction::polynomial(matrices_from_json(field(cj, "coefficients", "coupling"), "coupling.coefficients"));
        } else if (kind == "rational-matrix") {
            c = CouplingFunction::rational(matrices_from_json(field(cj, "numerator", "coupling"), "coupling.numerator"),
                                           field(cj, "denominator", "coupling").get<std::vector<double>>());
        } else if (kind == "user-plugin") {
            throw ModelError("user-plugin couplings are only available through the library API");
        } else {
            throw ModelError("coupling: unknown kind \"" + kind + "\"");
        }
        if (cj.contains("decay"))
            c = c.with_decay({real_from_json(field(cj["decay"], "c", "coupling.decay"), "decay.c"),
                              real_from_json(field(cj["decay"], "theta", "coupling.decay"), "decay.theta")});
        m.coupling = std::move(c);
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("model JSON: ") + e.what());
    }
    check_structure(m);
    return m;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(path + ": " + e.what());
    }
}

SpectralModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

ContourConfig contour_from_json(const Json& j) {
    ContourConfig c;
    try {
        if (j.contains("pieces")) {
            for (std::size_t i = 0; i < j["pieces"].size(); ++i)
                c.specs.push_back(spec_from_json(j["pieces"][i], "contour.pieces[" + std::to_string(i) + "]"));
        } else {
            c.specs.push_back(spec_from_json(j, "contour"));
        }
        std::vector<int> l = field(j, "l", "contour").get<std::vector<int>>();
        for (int s : l)
            if (s != 1 && s != -1) throw ModelError("contour.l: entries must be -1 or +1");
        c.l = MultiIndex(std::move(l));
        if (j.contains("panels")) c.options.order.panels = j["panels"].get<int>();
        if (j.contains("points")) c.options.order.points = j["points"].get<int>();
        if (j.contains("quad_tol")) c.options.quad_tol = j["quad_tol"].get<double>();
        if (c.options.order.panels < 1 || c.options.order.points < 1) throw ModelError("contour: panels and points must be positive");
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("contour JSON: ") + e.what());
    }
    return c;
}

Json contour_to_json(const ContourConfig& c) {
    Json j;
    if (c.specs.size() == 1) {
        j = spec_to_json(c.specs.front());
    } else {
        j["pieces"] = Json::array();
        for (const auto& s : c.specs) j["pieces"].push_back(spec_to_json(s));
    }
    j["l"] = c.l.signs;
    j["panels"] = c.options.order.panels;
    j["points"] = c.options.order.points;
    j["quad_tol"] = c.options.quad_tol;
    return j;
}

Contour build_contour(const SpectralModel& model, const ContourConfig& c) {
    return build_contour(model, c.specs, c.l, c.options);
}

Json certificate_to_json(const SolvabilityCertificate& c) {
    Json j;
    j["d0"] = real_to_json(c.d0);
    j["v0"] = real_to_json(c.v0);
    j["omega"] = real_to_json(c.omega);
    j["r_min"] = c.r_min ? real_to_json(*c.r_min) : Json(nullptr);
    j["r_max"] = c.r_max ? real_to_json(*c.r_max) : Json(nullptr);
    j["admissible"] = c.admissible;
    j["contraction"] = c.contraction();
    j["d0_slack"] = c.d0_slack;
    j["v0_tail"] = c.v0_tail;
    return j;
}

Json decomposition_to_json(const SpectralDecomposition& d) {
    Json out;
    out["cluster_tol"] = d.cluster_tol;
    out["nilpotent_tol"] = d.nilpotent_tol;
    out["eigenvalues"] = Json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        Json e;
        e["value"] = to_json(d.eigenvalues[i]);
        e["algebraic"] = d.algebraic[i];
        e["geometric"] = d.geometric[i];
        e["pole_order"] = d.pole_orders[i];
        e["nilpotent_norms"] = d.nilpotent_norms[i];
        e["radius"] = d.radii[i];
        e["projection"] = to_json(d.projections[i]);
        e["nilpotent"] = to_json(d.nilpotents[i]);
        out["eigenvalues"].push_back(std::move(e));
    }
    return out;
}

}  // namespace resonance
