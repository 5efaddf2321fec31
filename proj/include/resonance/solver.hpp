#pragma once

#include "resonance/contour.hpp"
#include "resonance/errors.hpp"

#include <vector>

namespace resonance {

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 200;
};

struct Solution {
    MultiIndex multi_index;
    Matrix x;
    Matrix h1;
    int iterations = 0;
    double last_step_norm = 0.0;
    double a_posteriori_bound = 0.0;
    SolvabilityCertificate certificate;
    double contraction = 0.0;  // q at r_min
    std::vector<double> step_norms;
    double max_iterate_norm = 0.0;
    double fixed_point_residual = 0.0;

    // Largest ratio of consecutive step norms above the rounding floor.
    double max_step_ratio() const;
};

class InadmissibleError : public Error {
public:
    InadmissibleError(const std::string& what, SolvabilityCertificate certificate)
        : Error(what), certificate(certificate) {}
    SolvabilityCertificate certificate;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> step_norms)
        : Error(what), step_norms(std::move(step_norms)) {}
    std::vector<double> step_norms;
};

class ContractionViolationError : public Error {
public:
    ContractionViolationError(const std::string& what, int iteration, double norm)
        : Error(what), iteration(iteration), norm(norm) {}
    int iteration;
    double norm;
};

// Sum over atoms of w K (Y - mu)^-1.
Matrix v1_of_operator(const SpectralModel& model, const Contour& contour, const Matrix& y);

// v0 * max over atoms of ||(Y - mu)^-1||, the a-priori bound on ||v1_of_operator(Y)||.
double v1_operator_bound(const SpectralModel& model, const Contour& contour, const Matrix& y);

Solution solve_basic(const SpectralModel& model, const Contour& contour, const SolveOptions& options = {});

// ||X on `other` - sol.x||; PairingError if the multi-indices differ.
double contour_independence(const SpectralModel& model, const Solution& sol, const Contour& other,
                            const SolveOptions& options = {});

// ||X* - sum w (A1 + X* - mu)^-1 K|| over the atoms of `contour_l`, for X solved on the mirror contour.
double adjoint_equation_residual(const SpectralModel& model, const Contour& contour_l, const Solution& sol_minus_l);

}  // namespace resonance
