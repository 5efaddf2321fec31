#include "resonance/cli.hpp"

#include "resonance/friedrichs.hpp"
#include "resonance/transfer.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

namespace resonance {

std::string to_string(Command c) {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Verify: return "verify";
        case Command::Sweep: return "sweep";
        case Command::Oracle: return "oracle";
    }
    return "unknown";
}

RunConfig parse_run_config(const Json& j, Command command, const std::string& base_dir) {
    RunConfig c;
    c.command = command;
    if (!j.is_object()) throw ModelError("config: expected a JSON object");
    try {
        if (!j.contains("model")) throw ModelError("config: missing field \"model\"");
        const Json& m = j["model"];
        if (m.is_string()) {
            std::filesystem::path p(m.get<std::string>());
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            c.model = load_model(p.string());
        } else {
            c.model = model_from_json(m);
        }
        if (j.contains("contour")) c.contour = contour_from_json(j["contour"]);
        if (j.contains("tolerances")) {
            const Json& t = j["tolerances"];
            c.tolerances.quad_tol = t.value("quad_tol", c.tolerances.quad_tol);
            c.tolerances.solve_tol = t.value("solve_tol", c.tolerances.solve_tol);
            c.tolerances.id_tol = t.value("id_tol", c.tolerances.id_tol);
            c.tolerances.algebraic_tol = t.value("algebraic_tol", c.tolerances.algebraic_tol);
            c.tolerances.max_iter = t.value("max_iter", c.tolerances.max_iter);
            if (c.tolerances.max_iter < 1) throw ModelError("config: tolerances.max_iter must be positive");
            if (t.contains("cluster_tol")) c.cluster_tol = t["cluster_tol"].get<double>();
        }
        if (c.contour && !(j.contains("contour") && j["contour"].contains("quad_tol")))
            c.contour->options.quad_tol = c.tolerances.quad_tol;
        if (j.contains("gamma_points")) {
            c.gamma_points = j["gamma_points"].get<int>();
            if (*c.gamma_points < 1) throw ModelError("config: gamma_points must be positive");
        }
        if (j.contains("sweep")) {
            SweepConfig s;
            s.parameter = j["sweep"].value("parameter", s.parameter);
            if (s.parameter != "beta" && s.parameter != "scale")
                throw ModelError("sweep.parameter must be \"beta\" or \"scale\"");
            s.grid = j["sweep"].at("grid").get<std::vector<double>>();
            if (s.grid.empty()) throw ModelError("sweep.grid must be nonempty");
            for (double g : s.grid)
                if (!std::isfinite(g)) throw ModelError("sweep.grid entries must be finite");
            c.sweep = std::move(s);
        }
        if (j.contains("oracle") && j["oracle"].contains("nu")) c.oracle_nu = j["oracle"]["nu"].get<std::vector<int>>();
        if (j.contains("output")) {
            c.output.json_path = j["output"].value("json_path", "");
            c.output.csv_path = j["output"].value("csv_path", "");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("config: ") + e.what());
    }
    if (command == Command::Sweep && !c.sweep) throw ModelError("sweep needs a \"sweep\" section");
    if (command != Command::Oracle && !c.contour) throw ModelError(to_string(command) + " needs a \"contour\" section");
    if (c.contour) {
        const std::size_t m = c.model.intervals.size();
        if (c.contour->l.size() != m)
            throw ModelError("contour.l has " + std::to_string(c.contour->l.size()) + " entries, model has " +
                             std::to_string(m) + " intervals");
        if (c.contour->specs.size() != 1 && c.contour->specs.size() != m)
            throw ModelError("contour.pieces must list one curve per interval");
    }
    return c;
}

RunConfig load_run_config(const std::string& path, Command command) {
    const Json j = read_json_file(path);
    return parse_run_config(j, command, std::filesystem::path(path).parent_path().string());
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("RESONANCE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

double real_tag_tol(const Solution& sol) {
    return 10.0 * sol.a_posteriori_bound + 1e-12 * (1.0 + spectral_norm(sol.h1));
}

DecomposeOptions decompose_options(const RunConfig& c) {
    DecomposeOptions o;
    o.cluster_tol = c.cluster_tol;
    return o;
}

TrapezoidOptions trapezoid_options(const RunConfig& c) {
    TrapezoidOptions t;
    if (c.gamma_points) {
        t.points = *c.gamma_points;
        t.adaptive = false;
    }
    return t;
}

Json eigenvalues_json(const SpectralDecomposition& d, double real_tol) {
    Json out = Json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Complex z = d.eigenvalues[i];
        const bool real = std::abs(z.imag()) <= real_tol;
        Json e;
        e["value"] = to_json(z);
        e["tag"] = real ? "real" : "complex";
        e["half_plane"] = real ? "real-axis" : (z.imag() > 0 ? "upper" : "lower");
        e["algebraic"] = d.algebraic[i];
        e["geometric"] = d.geometric[i];
        e["pole_order"] = d.pole_orders[i];
        out.push_back(std::move(e));
    }
    return out;
}

Json solution_json(const Solution& s) {
    Json j;
    j["multi_index"] = s.multi_index.signs;
    j["x"] = to_json(s.x);
    j["h1"] = to_json(s.h1);
    j["iterations"] = s.iterations;
    j["last_step_norm"] = s.last_step_norm;
    j["a_posteriori_bound"] = real_to_json(s.a_posteriori_bound);
    j["contraction"] = s.contraction;
    j["step_norms"] = s.step_norms;
    j["max_step_ratio"] = s.max_step_ratio();
    j["fixed_point_residual"] = s.fixed_point_residual;
    return j;
}

void require_valid(const SpectralModel& model) {
    const ValidationReport rep = validate_model(model);
    if (rep.ok()) return;
    std::string msg = "model violates:";
    for (const auto& v : rep.violations) msg += " [" + v.assumption + ": " + v.detail + "]";
    throw ModelError(msg);
}

Json base_json(const RunConfig& c) {
    Json j;
    j["command"] = to_string(c.command);
    if (c.contour) j["contour"] = contour_to_json(*c.contour);
    return j;
}

template <class F>
RunResult guarded(const RunConfig& config, F&& body) {
    RunResult r;
    auto fail = [&](int code, const std::string& status, const std::string& what) {
        r.exit_code = code;
        r.json = base_json(config);
        r.json["status"] = status;
        r.json["message"] = what;
        r.errors.push_back(status + ": " + what);
    };
    try {
        return body();
    } catch (const InadmissibleError& e) {
        fail(kInadmissible, "inadmissible", e.what());
        r.json["certificate"] = certificate_to_json(e.certificate);
    } catch (const NonConvergenceError& e) {
        fail(kNonConvergence, "nonconvergence", e.what());
        r.json["step_norms"] = e.step_norms;
    } catch (const ContractionViolationError& e) {
        fail(kNonConvergence, "contraction-violation", e.what());
    } catch (const ResolventSingularityError& e) {
        fail(kNonConvergence, "resolvent-singularity", e.what());
    } catch (const UnsupportedModelError& e) {
        fail(kConfigError, "unsupported-model", e.what());
    } catch (const ModelError& e) {
        fail(kConfigError, "config-error", e.what());
    } catch (const GeometryError& e) {
        fail(kConfigError, "geometry-error", e.what());
    } catch (const PairingError& e) {
        fail(kConfigError, "pairing-error", e.what());
    } catch (const DomainError& e) {
        fail(kConfigError, "domain-error", e.what());
    } catch (const Error& e) {
        fail(kIdentityFailure, "identity-failure", e.what());
    }
    return r;
}

std::vector<Complex> sample_points(const SpectralModel& model, double d0, int per_eigenvalue) {
    const RealVector a = a1_eigenvalues(model);
    std::vector<double> distinct;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (distinct.empty() || a(i) - distinct.back() > 1e-12 * (1.0 + std::abs(a(i)))) distinct.push_back(a(i));
    std::vector<Complex> pts;
    for (double e : distinct)
        for (int j = 0; j < per_eigenvalue; ++j) pts.push_back(e + std::polar(0.25 * d0, 2.0 * kPi * (j + 0.25) / per_eigenvalue));
    return pts;
}

// Greedy nearest matching of `a` against conj(b); inf when the counts differ.
double mirror_mismatch(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return kInf;
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (Complex z : a) {
        std::size_t best = 0;
        double bd = kInf;
        for (std::size_t k = 0; k < b.size(); ++k)
            if (!used[k] && std::abs(z - std::conj(b[k])) < bd) {
                bd = std::abs(z - std::conj(b[k]));
                best = k;
            }
        used[best] = true;
        worst = std::max(worst, bd);
    }
    return worst;
}

void add_row(std::vector<IdentityRow>& rows, std::string name, std::string identity, double residual, double threshold) {
    const bool pass = std::isfinite(residual) && residual <= threshold;
    rows.push_back({std::move(name), std::move(identity), residual, threshold, pass});
}

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

RunResult run_solve(const RunConfig& config) {
    return guarded(config, [&] {
        require_valid(config.model);
        const Contour contour = build_contour(config.model, *config.contour);
        const Solution sol = solve_basic(config.model, contour, {config.tolerances.solve_tol, config.tolerances.max_iter});
        const SpectralDecomposition dec = eigen_decompose(sol.h1, decompose_options(config));
        RunResult r;
        r.json = base_json(config);
        r.json["status"] = "ok";
        r.json["certificate"] = certificate_to_json(sol.certificate);
        r.json["solution"] = solution_json(sol);
        r.json["eigenvalues"] = eigenvalues_json(dec, real_tag_tol(sol));
        Json res;
        res["fixed_point"] = sol.fixed_point_residual;
        res["a_posteriori_bound"] = real_to_json(sol.a_posteriori_bound);
        res["max_step_ratio"] = sol.max_step_ratio();
        res["contraction"] = sol.contraction;
        r.json["residuals"] = std::move(res);
        return r;
    });
}

RunResult run_verify(const RunConfig& config) {
    return guarded(config, [&] {
        require_valid(config.model);
        const SpectralModel& model = config.model;
        const Tolerances& tol = config.tolerances;
        const Contour cl = build_contour(model, *config.contour);
        const Contour cm = mirror_contour(model, cl);
        const SolveOptions so{tol.solve_tol, tol.max_iter};
        const Solution sl = solve_basic(model, cl, so);
        const Solution sm = solve_basic(model, cm, so);
        const double d0 = sl.certificate.d0;
        const Eigen::Index n = model.dimension();

        std::vector<IdentityRow> rows;
        add_row(rows, "fixed_point", "X = V1(A1 + X)", std::max(sl.fixed_point_residual, sm.fixed_point_residual),
                2.0 * tol.solve_tol);
        add_row(rows, "contraction", "|dX_k+1| / |dX_k| <= q", std::max(sl.max_step_ratio(), sm.max_step_ratio()),
                sl.contraction * (1.0 + 1e-6));
        add_row(rows, "solution_ball", "|X| <= r_min", spectral_norm(sl.x),
                sl.certificate.r_min.value_or(0.0) * (1.0 + 1e-9) + 2.0 * tol.solve_tol);

        double fact = 0.0, winv = 0.0, adj = 0.0, hadj = 0.0;
        for (Complex z : sample_points(model, d0, 8)) {
            const W1Factor w = w1_factor(model, cl, sl, z);
            fact = std::max(fact, w.factor_residual);
            winv = std::max(winv, spectral_norm(Eigen::PartialPivLU<Matrix>(w.w1).inverse()));
            adj = std::max(adj, adjoint_symmetry_residual(model, cl, cm, z));
            hadj = std::max(hadj, hadj_residual(model, cl, cm, sl, sm, z));
        }
        add_row(rows, "factorization", "M1(z) = W1(z) (H1 - z)", fact, tol.algebraic_tol);
        add_row(rows, "w1_inverse_bound", "|W1^-1| <= 1 / (1 - 4 v0 / d0^2)", winv,
                1.1 * w1_inverse_bound(sl.certificate));
        add_row(rows, "adjoint_symmetry", "M1(conj z, -l)* = M1(z, l)", adj, tol.algebraic_tol);
        add_row(rows, "factorization_adjoint", "W1(z,l)(H(l) - z) = (H(-l)* - z) W1(conj z,-l)*", hadj,
                tol.algebraic_tol);
        add_row(rows, "adjoint_equation", "X(-l)* = sum w (A1 + X(-l)* - mu)^-1 K", adjoint_equation_residual(model, cl, sm),
                tol.algebraic_tol);

        const Contour flat = flat_contour(model, {32, 16});
        double rr = 0.0;
        for (const auto& piece : cl.pieces) {
            if (!std::isfinite(piece.lo) || !std::isfinite(piece.hi) || piece.spec.shape == CurveShape::Flat) continue;
            const double h = piece.is_arc() ? piece.height : piece.spec.size;
            const double mid = 0.5 * (piece.lo + piece.hi);
            for (double side : {1.0, -1.0}) {
                const Complex z(mid, side * piece.sign * 0.5 * h);
                rr = std::max(rr, residue_relation_residual(model, cl, flat, z));
            }
        }
        add_row(rows, "residue_relation", "M1(z, l) - M1(z) = 2 pi i l_k K'(z)", rr, tol.id_tol);

        const ResolventCurveCheck curve = resolvent_curve(model, cl, sl);
        add_row(rows, "resolvent_curve", "smin(M1) >= (1 - 4 v0 / d0^2) d0 / 2 on dist(z, spec A1) = d0/2",
                std::max(0.0, curve.margin - curve.min_singular_value), 1e-12 * (1.0 + curve.margin));

        const OmegaOperator om = omega(model, cl, sl, sm);
        add_row(rows, "omega_bound", "|Omega| <= v0 / (d0/2)^2", om.norm, om.norm_bound_check * (1.0 + 1e-9));
        const Matrix t_inv = Eigen::PartialPivLU<Matrix>(identity(n) + om.matrix).inverse();
        add_row(rows, "similarity", "H(l)* = (I + Omega(-l)) H(-l) (I + Omega(-l))^-1",
                similarity_residual(model, cl, cm, sl, sm), tol.algebraic_tol);

        const TrapezoidOptions trap = trapezoid_options(config);
        const GammaInfo gi = default_gamma(model, cl, sl);
        const MomentResult m0 = contour_moment(model, cl, sl, gi.gamma, 0, trap);
        const MomentResult m1 = contour_moment(model, cl, sl, gi.gamma, 1, trap);
        add_row(rows, "moment0", "-1/(2 pi i) int M1^-1 dz = (I + Omega)^-1", spectral_norm(m0.matrix - t_inv), tol.id_tol);
        add_row(rows, "moment1_right", "-1/(2 pi i) int z M1^-1 dz = H(l) (I + Omega)^-1",
                spectral_norm(m1.matrix - sl.h1 * t_inv), tol.id_tol);
        add_row(rows, "moment1_left", "-1/(2 pi i) int z M1^-1 dz = (I + Omega)^-1 H(-l)*",
                spectral_norm(m1.matrix - t_inv * sm.h1.adjoint()), tol.id_tol);
        add_row(rows, "gamma_self_convergence", "|I_N - I_2N| / |I_2N|", std::max(m0.self_convergence, m1.self_convergence),
                1e-2);

        const DecomposeOptions dopts = decompose_options(config);
        const SpectralDecomposition dl = eigen_decompose(sl.h1, dopts);
        const SpectralDecomposition dm = eigen_decompose(sm.h1, dopts);
        double res_l = 0.0, res_r = 0.0;
        for (Complex lam : dl.eigenvalues) {
            const ResidueResult res = residue_at(model, cl, sl, sm, lam, trap);
            res_l = std::max(res_l, res.residual_left);
            res_r = std::max(res_r, res.residual_right);
        }
        add_row(rows, "residue_left", "Res M1^-1 = (I + Omega)^-1 P(-l)*", res_l, tol.id_tol);
        add_row(rows, "residue_right", "Res M1^-1 = P(l) (I + Omega)^-1", res_r, tol.id_tol);

        const PNReport pn = verify_pn_equations(model, cl, sl, dl);
        double pmax = 0.0, nmax = 0.0;
        for (double v : pn.projection_residuals) pmax = std::max(pmax, v);
        for (const auto& v : pn.nilpotent_residuals)
            for (double x : v) nmax = std::max(nmax, x);
        add_row(rows, "projection_equation", "M1(lambda) P - N + sum T_k N^k = 0", pmax, tol.id_tol);
        add_row(rows, "nilpotent_equation", "M1(lambda) N^(n-p) - N^(n-p+1) + sum T_k N^(n-p+k) = 0", nmax, tol.id_tol);
        add_row(rows, "spectral_reconstruction", "H(l) = sum (lambda P + N)", pn.reconstruction_residual, tol.id_tol);
        add_row(rows, "mirror_spectrum", "spec H(-l) = conj spec H(l)", mirror_mismatch(dl.eigenvalues, dm.eigenvalues),
                1e-9);

        std::vector<Complex> real_eigs;
        for (Complex lam : dl.eigenvalues)
            if (std::abs(lam.imag()) <= real_tag_tol(sl)) real_eigs.push_back(lam);
        const GramReport gram = riesz_gram(model, cl, sl, sm, real_eigs, dopts);
        add_row(rows, "gram", "(Phi* (I + Omega) Psi)^T = I",
                std::max({gram.gram_residual, gram.projection_residual, gram.real_gram_residual}), tol.id_tol);

        RunResult r;
        bool all = true;
        Json jr = Json::array();
        for (const auto& row : rows) {
            all = all && row.pass;
            jr.push_back({{"name", row.name},
                          {"identity", row.identity},
                          {"residual", real_to_json(row.residual)},
                          {"threshold", row.threshold},
                          {"pass", row.pass}});
        }
        r.exit_code = all ? kPass : kIdentityFailure;
        r.json = base_json(config);
        r.json["status"] = all ? "pass" : "identity-failure";
        r.json["certificate"] = certificate_to_json(sl.certificate);
        r.json["gamma"] = Json::array();
        for (const Circle& c : gi.gamma) r.json["gamma"].push_back({{"center", to_json(c.center)}, {"radius", c.radius}});
        r.json["gamma_points"] = m0.points;
        r.json["rows"] = std::move(jr);
        r.rows = std::move(rows);
        return r;
    });
}

namespace {

struct SweepPoint {
    std::string status = "ok";
    double r_min = 0.0;
    int iterations = 0;
    std::vector<Complex> eigenvalues;
    std::vector<bool> real;
};

SweepPoint sweep_point(const RunConfig& config, double value) {
    SweepPoint p;
    SpectralModel model = config.model;
    const double factor = config.sweep->parameter == "beta" ? value * value : value;
    try {
        model.coupling = model.coupling.scaled(factor);
        const Contour contour = build_contour(model, *config.contour);
        const Solution sol = solve_basic(model, contour, {config.tolerances.solve_tol, config.tolerances.max_iter});
        const SpectralDecomposition dec = eigen_decompose(sol.h1, decompose_options(config));
        p.r_min = sol.certificate.r_min.value_or(0.0);
        p.iterations = sol.iterations;
        for (Complex z : dec.eigenvalues) {
            p.eigenvalues.push_back(z);
            p.real.push_back(std::abs(z.imag()) <= real_tag_tol(sol));
        }
    } catch (const InadmissibleError&) {
        p.status = "inadmissible";
    } catch (const NonConvergenceError&) {
        p.status = "nonconvergence";
    } catch (const ContractionViolationError&) {
        p.status = "contraction-violation";
    } catch (const Error&) {
        p.status = "error";
    }
    return p;
}

}  // namespace

RunResult run_sweep(const RunConfig& config) {
    return guarded(config, [&] {
        require_valid(config.model);
        const std::vector<double>& grid = config.sweep->grid;
        std::vector<SweepPoint> points(grid.size());
        const unsigned workers = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(grid.size()));
        if (workers <= 1) {
            for (std::size_t i = 0; i < grid.size(); ++i) points[i] = sweep_point(config, grid[i]);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < grid.size(); i = next++) points[i] = sweep_point(config, grid[i]);
                });
            for (auto& t : pool) t.join();
        }

        RunResult r;
        std::ostringstream csv;
        csv << config.sweep->parameter << ",index,re,im,tag,r_min,iterations,status\n";
        Json rows = Json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const SweepPoint& p = points[i];
            if (p.status != "ok") {
                csv << fmt(grid[i]) << ",,,,,,," << p.status << "\n";
                rows.push_back({{"parameter", grid[i]}, {"status", p.status}});
                continue;
            }
            for (std::size_t k = 0; k < p.eigenvalues.size(); ++k) {
                const Complex z = p.eigenvalues[k];
                const char* tag = p.real[k] ? "real" : "complex";
                csv << fmt(grid[i]) << "," << k << "," << fmt(z.real()) << "," << fmt(z.imag()) << "," << tag << ","
                    << fmt(p.r_min) << "," << p.iterations << ",ok\n";
                rows.push_back({{"parameter", grid[i]},
                                {"index", k},
                                {"value", to_json(z)},
                                {"tag", tag},
                                {"r_min", p.r_min},
                                {"iterations", p.iterations},
                                {"status", "ok"}});
            }
        }
        r.csv = csv.str();
        r.json = base_json(config);
        r.json["status"] = "ok";
        r.json["parameter"] = config.sweep->parameter;
        r.json["rows"] = std::move(rows);
        return r;
    });
}

RunResult run_oracle(const RunConfig& config) {
    return guarded(config, [&] {
        const FriedrichsParams base = friedrichs_params(config.model);
        RunResult r;
        r.json = base_json(config);
        r.json["status"] = "ok";
        r.json["parameters"] = {{"a", base.a}, {"lambda1", base.lambda1}, {"beta", base.beta}};
        Json roots = Json::array();
        std::vector<std::pair<int, Complex>> found;
        for (int nu : config.oracle_nu) {
            FriedrichsParams p = base;
            p.nu = nu;
            Json e;
            e["nu"] = nu;
            try {
                const ResonanceRoot root = resonance_root(p);
                e["root"] = to_json(root.z);
                e["residual"] = root.residual;
                e["iterations"] = root.iterations;
                if (root.angle_residual) e["angle_residual"] = *root.angle_residual;
                found.emplace_back(nu, root.z);
            } catch (const RootFindingError& err) {
                e["status"] = "no-root";
                e["message"] = err.what();
            }
            roots.push_back(std::move(e));
        }
        r.json["resonances"] = std::move(roots);

        const BoundStates b = bound_states(base);
        const double z0a = z0_asymptote(base), zaa = za_asymptote(base);
        r.json["bound_states"] = {{"z0", b.z0},
                                  {"za", b.za},
                                  {"residual0", b.residual0},
                                  {"residual_a", b.residual_a},
                                  {"z0_asymptote", z0a},
                                  {"za_asymptote", zaa},
                                  {"z0_ratio", b.z0 / z0a},
                                  {"za_ratio", (b.za - base.a) / (zaa - base.a)}};

        if (config.contour) {
            Json cmp = Json::array();
            for (const auto& [nu, z] : found) {
                if (nu != 1 && nu != -1) continue;
                ContourConfig cc = *config.contour;
                cc.l = MultiIndex{nu};
                const Contour contour = build_contour(config.model, cc);
                Json e;
                e["nu"] = nu;
                try {
                    const Solution sol = solve_basic(config.model, contour, {config.tolerances.solve_tol, config.tolerances.max_iter});
                    const double diff = std::abs(sol.h1(0, 0) - z);
                    e["solver"] = to_json(sol.h1(0, 0));
                    e["difference"] = diff;
                    e["within_1e-8"] = diff <= 1e-8;
                } catch (const InadmissibleError& err) {
                    e["status"] = "inadmissible";
                }
                cmp.push_back(std::move(e));
            }
            r.json["solver_comparison"] = std::move(cmp);
        }
        return r;
    });
}

RunResult run(const RunConfig& config) {
    switch (config.command) {
        case Command::Solve: return run_solve(config);
        case Command::Verify: return run_verify(config);
        case Command::Sweep: return run_sweep(config);
        case Command::Oracle: return run_oracle(config);
    }
    return {};
}

std::string format_rows(const std::vector<IdentityRow>& rows) {
    std::size_t wn = 4, wi = 8;
    for (const auto& r : rows) {
        wn = std::max(wn, r.name.size());
        wi = std::max(wi, r.identity.size());
    }
    std::ostringstream os;
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
    os << pad("name", wn) << "  " << pad("identity", wi) << "  " << pad("residual", 24) << "  " << pad("threshold", 24)
       << "  result\n";
    for (const auto& r : rows)
        os << pad(r.name, wn) << "  " << pad(r.identity, wi) << "  " << pad(fmt(r.residual), 24) << "  "
           << pad(fmt(r.threshold), 24) << "  " << (r.pass ? "pass" : "FAIL") << "\n";
    return os.str();
}

}  // namespace resonance
