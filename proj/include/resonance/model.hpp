#pragma once

#include "resonance/types.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace resonance {

enum class CouplingKind { ConstantVector, PolynomialMatrix, RationalMatrix, Plugin };

std::string to_string(CouplingKind kind);

// ||K'(mu)|| <= c * (1 + |Re mu|)^(-theta), required for unbounded intervals.
struct DecayBound {
    double c = 0.0;
    double theta = 0.0;
};

// Density mu -> K'(mu) of the coupling measure, continued into the complex plane.
class CouplingFunction {
public:
    CouplingFunction();  // zero coupling of dimension 0

    static CouplingFunction zero(Eigen::Index n);
    // K'(mu) = b^* b for a constant row b.
    static CouplingFunction constant_vector(const Vector& row);
    // K'(mu) = sum_p C_p mu^p with Hermitian C_p.
    static CouplingFunction polynomial(std::vector<Matrix> coeffs);
    // K'(mu) = F~(mu)^* F(mu), F(mu) = sum_p F_p mu^p (r x n); PSD on the real line by construction.
    static CouplingFunction polynomial_factor(const std::vector<Matrix>& factor_coeffs);
    // K'(mu) = (sum_p C_p mu^p) / q(mu), q with real coefficients (ascending powers).
    static CouplingFunction rational(std::vector<Matrix> numerator, std::vector<double> denominator);
    static CouplingFunction plugin(Eigen::Index n, std::function<Matrix(Complex)> fn);

    CouplingFunction with_decay(DecayBound decay) const;
    CouplingFunction scaled(double factor) const;

    Matrix operator()(Complex mu) const;

    CouplingKind kind() const { return kind_; }
    Eigen::Index dimension() const { return n_; }
    const Vector& row() const { return row_; }
    const std::vector<Matrix>& coefficients() const { return coeffs_; }
    const std::vector<double>& denominator() const { return denominator_; }
    const std::optional<DecayBound>& decay() const { return decay_; }
    // Complex zeros of the denominator (rational kind only).
    std::vector<Complex> poles() const;
    bool is_zero() const;

private:
    CouplingKind kind_ = CouplingKind::PolynomialMatrix;
    Eigen::Index n_ = 0;
    Vector row_;
    std::vector<Matrix> coeffs_;
    std::vector<double> denominator_;
    std::function<Matrix(Complex)> plugin_;
    std::optional<DecayBound> decay_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double strip = 0.0;  // holomorphy half-width around the interval

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double length() const { return hi - lo; }
    bool contains_open(double x) const { return x > lo && x < hi; }
};

struct DiscretePoint {
    double nu = 0.0;
    Matrix k;
};

struct SpectralModel {
    Matrix a1;
    std::vector<Interval> intervals;
    std::vector<DiscretePoint> discrete;
    CouplingFunction coupling;

    Eigen::Index dimension() const { return a1.rows(); }
};

struct Violation {
    std::string assumption;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
    bool mentions(const std::string& assumption) const;
};

// Throws ModelError for malformed input (shapes, non-finite entries, empty interval list).
void check_structure(const SpectralModel& model);

ValidationReport validate_model(const SpectralModel& model);

// Index of the interval whose holomorphy strip contains mu, or -1.
int strip_index(const SpectralModel& model, Complex mu);

// K'(mu); DomainError if mu is outside every declared strip.
Matrix kprime_eval(const SpectralModel& model, Complex mu);

// Sorted eigenvalues of the Hermitian part of A1.
RealVector a1_eigenvalues(const SpectralModel& model);

}  // namespace resonance
