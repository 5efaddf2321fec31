#include "resonance/spectral.hpp"

#include "resonance/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace resonance {

namespace {

Matrix inverse(const Matrix& m) { return Eigen::PartialPivLU<Matrix>(m).inverse(); }

Matrix resolvent(const Matrix& h, Complex z) {
    Matrix s = h;
    s.diagonal().array() -= z;
    return inverse(s);
}

bool complex_less(Complex a, Complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

Matrix range_basis(const Matrix& p, int m) {
    Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(m);
}

std::vector<Complex> eigenvalues_of(const Matrix& h) {
    Eigen::ComplexEigenSolver<Matrix> es(h, false);
    std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(), complex_less);
    return out;
}

}  // namespace

Matrix SpectralDecomposition::reconstruct() const {
    if (projections.empty()) return {};
    Matrix h = Matrix::Zero(projections.front().rows(), projections.front().cols());
    for (std::size_t i = 0; i < size(); ++i) h += eigenvalues[i] * projections[i] + nilpotents[i];
    return h;
}

std::optional<std::size_t> SpectralDecomposition::find(Complex z, double tol) const {
    std::optional<std::size_t> best;
    double bd = kInf;
    for (std::size_t i = 0; i < size(); ++i) {
        const double d = std::abs(eigenvalues[i] - z);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    if (best && bd <= tol) return best;
    return std::nullopt;
}

MomentResult circle_integral(const std::function<Matrix(Complex)>& f, const Gamma& gamma, int moment,
                             const TrapezoidOptions& options) {
    auto compute = [&](int points) {
        Matrix acc;
        for (const Circle& c : gamma) {
            for (int j = 0; j < points; ++j) {
                const double theta = 2.0 * kPi * j / points;
                const Complex e = std::polar(1.0, theta);
                const Complex z = c.center + c.radius * e;
                Complex scale = -(c.radius / points) * e;
                if (moment == 1) scale *= z;
                Matrix term = f(z) * scale;
                if (acc.size() == 0)
                    acc = std::move(term);
                else
                    acc += term;
            }
        }
        return acc;
    };
    MomentResult r;
    int n = std::max(options.points, 1);
    Matrix coarse = compute(n);
    for (;;) {
        Matrix fine = compute(2 * n);
        const double diff = spectral_norm(fine - coarse) / std::max(1.0, spectral_norm(fine));
        if (!options.adaptive) {
            r.matrix = std::move(coarse);
            r.points = n;
            r.self_convergence = diff;
            return r;
        }
        if (diff <= options.tol || 2 * n >= options.max_points) {
            r.matrix = std::move(fine);
            r.points = 2 * n;
            r.self_convergence = diff;
            return r;
        }
        n *= 2;
        coarse = std::move(fine);
    }
}

SpectralDecomposition eigen_decompose(const Matrix& h1, const DecomposeOptions& options) {
    const Eigen::Index n = h1.rows();
    SpectralDecomposition dec;
    dec.h_norm = spectral_norm(h1);
    dec.cluster_tol = options.cluster_tol.value_or(1e-7 * dec.h_norm);
    dec.nilpotent_tol = options.nilpotent_tol;
    if (n == 0) return dec;

    const std::vector<Complex> eig = eigenvalues_of(h1);
    std::vector<std::size_t> parent(eig.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < eig.size(); ++i)
        for (std::size_t j = i + 1; j < eig.size(); ++j)
            if (std::abs(eig[i] - eig[j]) <= dec.cluster_tol) parent[root(i)] = root(j);

    std::vector<std::vector<Complex>> clusters;
    std::vector<std::size_t> label(eig.size(), SIZE_MAX);
    for (std::size_t i = 0; i < eig.size(); ++i) {
        const std::size_t r = root(i);
        if (label[r] == SIZE_MAX) {
            label[r] = clusters.size();
            clusters.emplace_back();
        }
        clusters[label[r]].push_back(eig[i]);
    }
    std::vector<Complex> centers;
    for (const auto& c : clusters) centers.push_back(std::accumulate(c.begin(), c.end(), Complex(0.0)) / double(c.size()));
    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return complex_less(centers[a], centers[b]); });

    std::vector<double> spread(clusters.size(), 0.0);
    for (std::size_t a = 0; a < clusters.size(); ++a)
        for (Complex z : clusters[a]) spread[a] = std::max(spread[a], std::abs(z - centers[a]));
    for (std::size_t a = 0; a < clusters.size(); ++a)
        for (std::size_t b = a + 1; b < clusters.size(); ++b)
            for (Complex x : clusters[a])
                for (Complex y : clusters[b])
                    if (std::abs(x - y) < 4.0 * dec.cluster_tol) {
                        std::ostringstream os;
                        os << "eigenvalue clusters at " << centers[a] << " and " << centers[b]
                           << " are closer than 4 * cluster_tol; choose a different tolerance";
                        throw ClusteringError(os.str());
                    }

    TrapezoidOptions trap{options.min_points, true, options.projection_tol, options.max_points};
    for (std::size_t idx : order) {
        double radius;
        if (clusters.size() == 1) {
            radius = spread[idx] + 0.5 * (1.0 + dec.h_norm);
        } else {
            radius = kInf;
            for (std::size_t b = 0; b < clusters.size(); ++b)
                if (b != idx) radius = std::min(radius, 0.5 * std::abs(centers[idx] - centers[b]));
            if (!(radius > 1.5 * spread[idx])) throw ClusteringError("cluster is not separable by a circle");
        }
        const Complex lam = centers[idx];
        const MomentResult pr =
            circle_integral([&](Complex z) { return resolvent(h1, z); }, {{lam, radius}}, 0, trap);
        Matrix p = pr.matrix;
        Matrix shifted = h1;
        shifted.diagonal().array() -= lam;
        Matrix nil = shifted * p;
        const int m = static_cast<int>(std::llround(p.trace().real()));

        const double hs = dec.h_norm;
        std::vector<double> norms;
        int order_k = 0;
        Matrix power = nil;
        for (int k = 1; k <= std::max(m, 1); ++k) {
            const double nk = spectral_norm(power);
            const double rel = hs > 0.0 ? nk / std::pow(hs, k) : nk;
            norms.push_back(rel);
            if (order_k == 0 && (nk == 0.0 || rel <= options.nilpotent_tol)) order_k = k;
            power = (power * nil).eval();
        }
        if (order_k == 0) order_k = std::max(m, 1);

        Eigen::JacobiSVD<Matrix> svd(nil);
        int rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > options.nilpotent_tol * std::max(hs, 1e-300)) ++rank;

        dec.eigenvalues.push_back(lam);
        dec.projections.push_back(std::move(p));
        dec.nilpotents.push_back(std::move(nil));
        dec.algebraic.push_back(m);
        dec.geometric.push_back(m - rank);
        dec.pole_orders.push_back(order_k);
        dec.nilpotent_norms.push_back(std::move(norms));
        dec.radii.push_back(radius);
    }
    return dec;
}

W1Factor w1_factor(const SpectralModel& model, const Contour& contour, const Solution& sol, Complex z) {
    const Matrix m = transfer_matrix(model, contour, z);
    const Eigen::Index n = model.dimension();
    Matrix w = identity(n);
    for (const auto& a : contour.atoms) w.noalias() -= (a.weight / (a.mu - z)) * (a.k * resolvent(sol.h1, a.mu));
    Matrix hz = sol.h1;
    hz.diagonal().array() -= z;
    return {w, spectral_norm(m - w * hz)};
}

double w1_inverse_bound(const SolvabilityCertificate& cert) {
    return 1.0 / (1.0 - cert.v0 / (0.25 * cert.d0 * cert.d0));
}

double hadj_residual(const SpectralModel& model, const Contour& contour_l, const Contour& contour_minus_l,
                     const Solution& sol_l, const Solution& sol_minus_l, Complex z) {
    check_mirror_pair(contour_l, contour_minus_l);
    const Matrix wl = w1_factor(model, contour_l, sol_l, z).w1;
    const Matrix wm = w1_factor(model, contour_minus_l, sol_minus_l, std::conj(z)).w1;
    Matrix hl = sol_l.h1;
    hl.diagonal().array() -= z;
    Matrix hms = sol_minus_l.h1.adjoint();
    hms.diagonal().array() -= z;
    return spectral_norm(wl * hl - hms * wm.adjoint());
}

OmegaOperator omega(const SpectralModel& model, const Contour& contour_l, const Solution& sol_l,
                    const Solution& sol_minus_l) {
    if (!(contour_l.multi_index == sol_l.multi_index) || !(sol_minus_l.multi_index == sol_l.multi_index.mirrored()))
        throw PairingError("omega needs solutions for l and -l on the contour for l");
    const Eigen::Index n = model.dimension();
    const Matrix hms = sol_minus_l.h1.adjoint();
    Matrix om = Matrix::Zero(n, n);
    for (const auto& a : contour_l.atoms) om.noalias() += a.weight * (resolvent(hms, a.mu) * a.k * resolvent(sol_l.h1, a.mu));
    OmegaOperator out;
    out.matrix = std::move(om);
    out.norm = spectral_norm(out.matrix);
    const auto& c = sol_l.certificate;
    out.norm_bound_check = c.v0 / (0.25 * c.d0 * c.d0);
    out.within_bound = out.norm <= out.norm_bound_check * (1.0 + 1e-9);
    return out;
}

double similarity_residual(const SpectralModel& model, const Contour& contour_l, const Contour& contour_minus_l,
                           const Solution& sol_l, const Solution& sol_minus_l) {
    check_mirror_pair(contour_l, contour_minus_l);
    const Matrix om = omega(model, contour_minus_l, sol_minus_l, sol_l).matrix;
    const Matrix t = identity(model.dimension()) + om;
    return spectral_norm(sol_l.h1.adjoint() - t * sol_minus_l.h1 * inverse(t));
}

GammaInfo default_gamma(const SpectralModel& model, const Contour& contour, const Solution& sol) {
    (void)contour;
    const RealVector a = a1_eigenvalues(model);
    const double d0 = sol.certificate.d0;
    double delta = 0.0;
    for (Complex lam : eigenvalues_of(sol.h1)) {
        double d = kInf;
        for (Eigen::Index i = 0; i < a.size(); ++i) d = std::min(d, std::abs(lam - a(i)));
        delta = std::max(delta, d);
    }
    const double rho = 0.5 * (delta + 0.5 * d0);
    GammaInfo info;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= a.size(); ++i) {
        if (i == a.size() || a(i) - a(i - 1) >= d0) {
            const double lo = a(start), hi = a(i - 1);
            info.gamma.push_back({Complex(0.5 * (lo + hi), 0.0), 0.5 * (hi - lo) + rho});
            if (i - 1 > start && hi > lo) info.within_neighborhood = false;
            start = i;
        }
    }
    return info;
}

void check_gamma(const Contour& contour, const Solution& sol, const Gamma& gamma) {
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const Circle& c = gamma[i];
        if (!(c.radius > 0.0)) throw GeometryError("gamma circle needs a positive radius");
        for (const auto& atom : contour.atoms)
            if (std::abs(atom.mu - c.center) <= c.radius + contour.guard())
                throw GeometryError("gamma circle meets or encloses the contour or a discrete point");
        for (std::size_t j = i + 1; j < gamma.size(); ++j)
            if (std::abs(c.center - gamma[j].center) <= c.radius + gamma[j].radius)
                throw GeometryError("gamma circles overlap");
    }
    for (Complex lam : eigenvalues_of(sol.h1)) {
        int inside = 0;
        for (const Circle& c : gamma) inside += std::abs(lam - c.center) < c.radius;
        if (inside != 1) {
            std::ostringstream os;
            os << "gamma does not enclose eigenvalue " << lam << " exactly once";
            throw GeometryError(os.str());
        }
    }
}

MomentResult contour_moment(const SpectralModel& model, const Contour& contour, const Solution& sol, const Gamma& gamma,
                            int moment, const TrapezoidOptions& options) {
    if (moment != 0 && moment != 1) throw std::invalid_argument("moment must be 0 or 1");
    check_gamma(contour, sol, gamma);
    return circle_integral([&](Complex z) { return inverse(transfer_matrix(model, contour, z)); }, gamma, moment, options);
}

ResidueResult residue_at(const SpectralModel& model, const Contour& contour_l, const Solution& sol_l,
                         const Solution& sol_minus_l, Complex lambda, const TrapezoidOptions& options) {
    const SpectralDecomposition dec = eigen_decompose(sol_l.h1);
    const auto idx = dec.find(lambda, 1e-6 * (1.0 + std::abs(lambda)));
    if (!idx) {
        std::ostringstream os;
        os << lambda << " is not an eigenvalue of H";
        throw GeometryError(os.str());
    }
    const Complex c = dec.eigenvalues[*idx];
    double radius = 0.5 * contour_l.distance_to_atoms(c);
    for (std::size_t j = 0; j < dec.size(); ++j)
        if (j != *idx) radius = std::min(radius, 0.5 * std::abs(dec.eigenvalues[j] - c));
    if (!(radius > contour_l.guard())) throw GeometryError("no room for a residue circle around the eigenvalue");

    ResidueResult r;
    r.circle = {c, radius};
    const MomentResult pm =
        circle_integral([&](Complex z) { return inverse(transfer_matrix(model, contour_l, z)); }, {r.circle}, 0, options);
    r.p_m1 = pm.matrix;
    r.points = pm.points;
    r.self_convergence = pm.self_convergence;
    TrapezoidOptions fine = options;
    fine.adaptive = true;
    r.p_l = circle_integral([&](Complex z) { return resolvent(sol_l.h1, z); }, {r.circle}, 0, fine).matrix;
    r.p_minus_l_adj = circle_integral([&](Complex z) { return resolvent(sol_minus_l.h1, z); },
                                      {{std::conj(c), radius}}, 0, fine)
                          .matrix.adjoint();
    const Matrix t = inverse(identity(model.dimension()) + omega(model, contour_l, sol_l, sol_minus_l).matrix);
    r.residual_left = spectral_norm(r.p_m1 - t * r.p_minus_l_adj);
    r.residual_right = spectral_norm(r.p_m1 - r.p_l * t);
    return r;
}

double PNReport::max_residual() const {
    double m = reconstruction_residual;
    for (double r : projection_residuals) m = std::max(m, r);
    for (const auto& v : nilpotent_residuals)
        for (double r : v) m = std::max(m, r);
    return m;
}

PNReport verify_pn_equations(const SpectralModel& model, const Contour& contour, const Solution& sol,
                             const SpectralDecomposition& dec) {
    PNReport rep;
    for (std::size_t i = 0; i < dec.size(); ++i) {
        const Complex lam = dec.eigenvalues[i];
        const int order = dec.pole_orders[i];
        const Matrix& p = dec.projections[i];
        const Matrix& nil = dec.nilpotents[i];
        std::vector<Matrix> taylor(order);
        for (int k = 1; k < order; ++k) taylor[k] = v1_taylor(model, contour, lam, k);
        std::vector<Matrix> npow(order + 1);
        npow[0] = p;
        for (int k = 1; k <= order; ++k) npow[k] = npow[k - 1] * nil;
        const Matrix m = transfer_matrix(model, contour, lam);

        Matrix res = m * p - nil;
        for (int k = 1; k < order; ++k) res += taylor[k] * npow[k];
        rep.projection_residuals.push_back(spectral_norm(res));

        std::vector<double> nres;
        for (int q = 1; q < order; ++q) {
            Matrix r = m * npow[order - q] - npow[order - q + 1];
            for (int k = 1; k < q; ++k) r += taylor[k] * npow[order - q + k];
            nres.push_back(spectral_norm(r));
        }
        rep.nilpotent_residuals.push_back(std::move(nres));
    }
    const Matrix h = dec.reconstruct();
    rep.reconstruction_residual = spectral_norm(h - sol.h1);
    rep.distance_to_a1 = spectral_norm(h - model.a1);
    rep.within_r_max = sol.certificate.r_max && rep.distance_to_a1 < *sol.certificate.r_max;
    return rep;
}

GramReport riesz_gram(const SpectralModel& model, const Contour& contour_l, const Solution& sol_l,
                      const Solution& sol_minus_l, const std::vector<Complex>& real_eigs,
                      const DecomposeOptions& options) {
    const Eigen::Index n = model.dimension();
    const SpectralDecomposition dl = eigen_decompose(sol_l.h1, options);
    const SpectralDecomposition dm = eigen_decompose(sol_minus_l.h1, options);
    const Matrix om = omega(model, contour_l, sol_l, sol_minus_l).matrix;
    const Matrix t = identity(n) + om;
    const double match_tol = 1e-6 * (1.0 + dl.h_norm);

    GramReport rep;
    rep.eigenvalues = dl.eigenvalues;
    std::vector<Matrix> psi, phi;
    for (std::size_t i = 0; i < dl.size(); ++i) {
        if (dl.pole_orders[i] != 1) rep.semisimple = false;
        const auto j = dm.find(std::conj(dl.eigenvalues[i]), match_tol);
        if (!j || dm.algebraic[*j] != dl.algebraic[i]) {
            std::ostringstream os;
            os << "no mirror eigenvalue for " << dl.eigenvalues[i];
            throw InconsistencyError(os.str());
        }
        const int m = dl.algebraic[i];
        Matrix ps = range_basis(dl.projections[i], m);
        Matrix ph = range_basis(dm.projections[*j], m);
        const Matrix b = ph.adjoint() * t * ps;
        ph = ph * inverse(b).adjoint();
        rep.projection_residual =
            std::max(rep.projection_residual, spectral_norm(dl.projections[i] - ps * ph.adjoint() * t));
        psi.push_back(std::move(ps));
        phi.push_back(std::move(ph));
    }
    Matrix Psi(n, n), Phi(n, n);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        Psi.middleCols(col, psi[i].cols()) = psi[i];
        Phi.middleCols(col, phi[i].cols()) = phi[i];
        col += psi[i].cols();
    }
    rep.gram = (Phi.leftCols(col).adjoint() * t * Psi.leftCols(col)).transpose();
    rep.gram_residual = spectral_norm(rep.gram - identity(col));

    // real eigenvalues: eigenvectors shared by both solutions, orthonormal under (I + Omega)
    std::vector<Matrix> real_basis;
    Eigen::Index rcols = 0;
    for (Complex lam : real_eigs) {
        const auto i = dl.find(lam, match_tol);
        const auto j = dm.find(lam, match_tol);
        if (!i || !j) {
            std::ostringstream os;
            os << "real eigenvalue " << lam << " missing from a decomposition";
            throw InconsistencyError(os.str());
        }
        const int m = dl.algebraic[*i];
        Matrix ps = range_basis(dl.projections[*i], m);
        const Matrix ph = range_basis(dm.projections[*j], dm.algebraic[*j]);
        rep.real_subspace_mismatch =
            std::max(rep.real_subspace_mismatch, spectral_norm(ph - ps * (ps.adjoint() * ph)));
        for (Eigen::Index c = 0; c < ps.cols(); ++c) rep.real_raw_norms.push_back((ps.col(c).adjoint() * t * ps.col(c))(0, 0));
        const Matrix block = ps.adjoint() * t * ps;
        Eigen::LLT<Matrix> llt(0.5 * (block + block.adjoint()));
        ps = Matrix(llt.matrixL().solve(Matrix(ps.adjoint()))).adjoint();
        rcols += ps.cols();
        real_basis.push_back(std::move(ps));
    }
    Matrix R(n, rcols);
    col = 0;
    for (const auto& b : real_basis) {
        R.middleCols(col, b.cols()) = b;
        col += b.cols();
    }
    rep.real_gram = R.adjoint() * t * R;
    rep.real_gram_residual = rcols ? spectral_norm(rep.real_gram - identity(rcols)) : 0.0;
    return rep;
}

ResolventCurveCheck resolvent_curve(const SpectralModel& model, const Contour& contour, const Solution& sol, int samples) {
    const RealVector a = a1_eigenvalues(model);
    const double d0 = sol.certificate.d0;
    const double h = 0.5 * d0;
    ResolventCurveCheck out;
    out.margin = h * (1.0 - 4.0 * sol.certificate.v0 / (d0 * d0));
    out.min_singular_value = kInf;
    const int per = (samples + static_cast<int>(a.size()) - 1) / static_cast<int>(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (int j = 0; j < per; ++j) {
            const Complex z = a(i) + std::polar(h, 2.0 * kPi * (j + 0.5) / per);
            bool on_curve = true;
            for (Eigen::Index k = 0; k < a.size(); ++k)
                if (k != i && std::abs(z - a(k)) < h * (1.0 - 1e-12)) on_curve = false;
            if (!on_curve) continue;
            out.min_singular_value = std::min(out.min_singular_value, smallest_singular_value(transfer_matrix(model, contour, z)));
            ++out.samples;
        }
    }
    return out;
}

}  // namespace resonance
