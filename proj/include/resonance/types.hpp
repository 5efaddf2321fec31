#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace resonance {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Largest singular value.
double spectral_norm(const Matrix& m);

// Smallest singular value (0 for an empty matrix).
double smallest_singular_value(const Matrix& m);

Matrix identity(Eigen::Index n);

bool all_finite(const Matrix& m);

}  // namespace resonance
