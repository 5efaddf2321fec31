#pragma once

#include "resonance/solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace resonance {

struct DecomposeOptions {
    std::optional<double> cluster_tol;  // absolute; default 1e-7 * ||H||
    double nilpotent_tol = 1e-6;        // relative threshold on ||N^k|| / ||H||^k
    int min_points = 64;
    int max_points = 8192;
    double projection_tol = 1e-13;
};

struct SpectralDecomposition {
    std::vector<Complex> eigenvalues;  // cluster centroids
    std::vector<Matrix> projections;
    std::vector<Matrix> nilpotents;
    std::vector<int> algebraic;
    std::vector<int> geometric;
    std::vector<int> pole_orders;
    // ||N_i^k|| / ||H||^k for k = 1..m_i; the pole-order threshold margin.
    std::vector<std::vector<double>> nilpotent_norms;
    std::vector<double> radii;  // separating circle per cluster
    double cluster_tol = 0.0;
    double nilpotent_tol = 0.0;
    double h_norm = 0.0;

    std::size_t size() const { return eigenvalues.size(); }
    Matrix reconstruct() const;
    // Cluster nearest to z, if within tol.
    std::optional<std::size_t> find(Complex z, double tol) const;
};

SpectralDecomposition eigen_decompose(const Matrix& h1, const DecomposeOptions& options = {});

struct Circle {
    Complex center;
    double radius = 0.0;
};

using Gamma = std::vector<Circle>;

struct TrapezoidOptions {
    int points = 64;
    bool adaptive = true;  // double until stable; otherwise use exactly `points`
    double tol = 1e-13;
    int max_points = 8192;
};

struct MomentResult {
    Matrix matrix;
    int points = 0;
    // ||I_N - I_2N|| / max(1, ||I_2N||) for the last pair compared.
    double self_convergence = 0.0;
};

// -(1/2 pi i) sum over circles of the integral of z^moment f(z).
MomentResult circle_integral(const std::function<Matrix(Complex)>& f, const Gamma& gamma, int moment,
                             const TrapezoidOptions& options);

struct W1Factor {
    Matrix w1;
    double factor_residual = 0.0;
};

W1Factor w1_factor(const SpectralModel& model, const Contour& contour, const Solution& sol, Complex z);

// Right-hand bound 1 / (1 - v0 / (d0^2 / 4)) on ||W1^-1||.
double w1_inverse_bound(const SolvabilityCertificate& cert);

// ||W1(z,l)(H^(l) - z) - (H^(-l)* - z) W1(conj z,-l)^*||.
double hadj_residual(const SpectralModel& model, const Contour& contour_l, const Contour& contour_minus_l,
                     const Solution& sol_l, const Solution& sol_minus_l, Complex z);

struct OmegaOperator {
    Matrix matrix;
    double norm = 0.0;
    double norm_bound_check = 0.0;  // v0 / (d0/2)^2, below 1 when admissible
    bool within_bound = false;
};

OmegaOperator omega(const SpectralModel& model, const Contour& contour_l, const Solution& sol_l,
                    const Solution& sol_minus_l);

// ||H^(l)* - (I + Omega^(-l)) H^(-l) (I + Omega^(-l))^-1||.
double similarity_residual(const SpectralModel& model, const Contour& contour_l, const Contour& contour_minus_l,
                           const Solution& sol_l, const Solution& sol_minus_l);

struct GammaInfo {
    Gamma gamma;
    bool within_neighborhood = true;  // every point within d0/2 of the spectrum of A1
};

// Circles around groups of A1 eigenvalues enclosing the spectrum of H^(l).
GammaInfo default_gamma(const SpectralModel& model, const Contour& contour, const Solution& sol);

// GeometryError if gamma meets the contour, contains an atom, overlaps itself or misses an eigenvalue of H.
void check_gamma(const Contour& contour, const Solution& sol, const Gamma& gamma);

MomentResult contour_moment(const SpectralModel& model, const Contour& contour, const Solution& sol, const Gamma& gamma,
                            int moment, const TrapezoidOptions& options = {});

struct ResidueResult {
    Matrix p_m1;           // residue of M1^-1
    Matrix p_l;            // eigenprojection of H^(l)
    Matrix p_minus_l_adj;  // eigenprojection of H^(-l)* at the same point
    double residual_left = 0.0;   // ||p_m1 - (I+Omega)^-1 P^(-l)*||
    double residual_right = 0.0;  // ||p_m1 - P^(l) (I+Omega)^-1||
    Circle circle;
    int points = 0;
    double self_convergence = 0.0;
};

ResidueResult residue_at(const SpectralModel& model, const Contour& contour_l, const Solution& sol_l,
                         const Solution& sol_minus_l, Complex lambda, const TrapezoidOptions& options = {});

struct PNReport {
    std::vector<double> projection_residuals;               // per eigenvalue
    std::vector<std::vector<double>> nilpotent_residuals;   // per eigenvalue, p = 1..n_i-1
    double reconstruction_residual = 0.0;                   // ||sum (lambda P + N) - H||
    double distance_to_a1 = 0.0;                            // ||reconstructed H - A1||
    bool within_r_max = false;

    double max_residual() const;
};

PNReport verify_pn_equations(const SpectralModel& model, const Contour& contour, const Solution& sol,
                             const SpectralDecomposition& dec);

struct GramReport {
    std::vector<Complex> eigenvalues;
    bool semisimple = true;
    Matrix gram;                    // binormalized, should be I
    double gram_residual = 0.0;
    double projection_residual = 0.0;  // max ||P_i - Psi_i Phi_i^* (I + Omega)||
    Matrix real_gram;               // normalized real-eigenvector Gram, should be I
    double real_gram_residual = 0.0;
    std::vector<Complex> real_raw_norms;  // <(I+Omega) psi, psi> for unit psi
    double real_subspace_mismatch = 0.0;  // eigenvectors of H^(-l) outside those of H^(l)
};

GramReport riesz_gram(const SpectralModel& model, const Contour& contour_l, const Solution& sol_l,
                      const Solution& sol_minus_l, const std::vector<Complex>& real_eigs,
                      const DecomposeOptions& options = {});

struct ResolventCurveCheck {
    double min_singular_value = 0.0;
    double margin = 0.0;  // (1 - 4 v0 / d0^2) d0 / 2
    int samples = 0;
};

// Smallest singular value of M1(z, Gamma_l) on the curve dist(z, spec A1) = d0/2.
ResolventCurveCheck resolvent_curve(const SpectralModel& model, const Contour& contour, const Solution& sol,
                                    int samples = 50);

}  // namespace resonance
