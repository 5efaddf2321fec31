#include "resonance/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace resonance {

double Solution::max_step_ratio() const {
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * (1.0 + spectral_norm(h1));
    double r = 0.0;
    for (std::size_t k = 1; k < step_norms.size(); ++k)
        if (step_norms[k - 1] > floor && step_norms[k] > floor) r = std::max(r, step_norms[k] / step_norms[k - 1]);
    return r;
}

namespace {

Matrix shifted_inverse(const Matrix& y, Complex mu) {
    Matrix s = y;
    s.diagonal().array() -= mu;
    Eigen::PartialPivLU<Matrix> lu(s);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream os;
        os << "Y - mu I is numerically singular at node mu = " << mu;
        throw ResolventSingularityError(os.str(), mu);
    }
    return lu.inverse();
}

}  // namespace

Matrix v1_of_operator(const SpectralModel& model, const Contour& contour, const Matrix& y) {
    const Eigen::Index n = model.dimension();
    Matrix v = Matrix::Zero(n, n);
    for (const auto& a : contour.atoms) v.noalias() += a.weight * (a.k * shifted_inverse(y, a.mu));
    return v;
}

double v1_operator_bound(const SpectralModel& model, const Contour& contour, const Matrix& y) {
    double worst = 0.0;
    for (const auto& a : contour.atoms) worst = std::max(worst, spectral_norm(shifted_inverse(y, a.mu)));
    return variation(model, contour) * worst;
}

Solution solve_basic(const SpectralModel& model, const Contour& contour, const SolveOptions& options) {
    const SolvabilityCertificate cert = solvability_certificate(model, contour);
    if (!cert.admissible) {
        std::ostringstream os;
        os << "no solvability certificate: d0 = " << cert.d0 << ", v0 = " << cert.v0 << ", omega = " << cert.omega;
        throw InadmissibleError(os.str(), cert);
    }
    Solution sol;
    sol.multi_index = contour.multi_index;
    sol.certificate = cert;
    sol.contraction = cert.contraction();
    const double q = sol.contraction;
    const double threshold = q > 0.0 ? options.tol * (1.0 - q) / q : std::numeric_limits<double>::infinity();

    const Eigen::Index n = model.dimension();
    Matrix x = Matrix::Zero(n, n);
    bool converged = false;
    for (int k = 1; k <= options.max_iter; ++k) {
        Matrix next = v1_of_operator(model, contour, model.a1 + x);
        const double step = spectral_norm(next - x);
        sol.step_norms.push_back(step);
        x = std::move(next);
        const double norm = spectral_norm(x);
        sol.max_iterate_norm = std::max(sol.max_iterate_norm, norm);
        if (norm > *cert.r_max) {
            std::ostringstream os;
            os << "iterate " << k << " left the uniqueness ball: ||X|| = " << norm << " > r_max = " << *cert.r_max;
            throw ContractionViolationError(os.str(), k, norm);
        }
        sol.iterations = k;
        sol.last_step_norm = step;
        if (step <= threshold) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "no convergence after " << options.max_iter << " iterations, last step " << sol.last_step_norm;
        throw NonConvergenceError(os.str(), sol.step_norms);
    }
    sol.a_posteriori_bound = q < 1.0 ? q / (1.0 - q) * sol.last_step_norm : std::numeric_limits<double>::infinity();
    sol.x = x;
    sol.h1 = model.a1 + x;
    sol.fixed_point_residual = spectral_norm(x - v1_of_operator(model, contour, sol.h1));
    return sol;
}

double contour_independence(const SpectralModel& model, const Solution& sol, const Contour& other,
                            const SolveOptions& options) {
    if (!(other.multi_index == sol.multi_index))
        throw PairingError("contour multi-index " + other.multi_index.str() + " differs from the solution's " +
                           sol.multi_index.str());
    const Solution alt = solve_basic(model, other, options);
    return spectral_norm(alt.x - sol.x);
}

double adjoint_equation_residual(const SpectralModel& model, const Contour& contour_l, const Solution& sol_minus_l) {
    if (!(contour_l.multi_index == sol_minus_l.multi_index.mirrored()))
        throw PairingError("adjoint equation needs the contour mirrored to the solution's");
    const Matrix xs = sol_minus_l.x.adjoint();
    const Matrix y = model.a1 + xs;
    const Eigen::Index n = model.dimension();
    Matrix rhs = Matrix::Zero(n, n);
    for (const auto& a : contour_l.atoms) rhs.noalias() += a.weight * (shifted_inverse(y, a.mu) * a.k);
    return spectral_norm(xs - rhs);
}

}  // namespace resonance
