#pragma once

#include "resonance/model.hpp"

#include <optional>
#include <vector>

namespace resonance {

// Single level lambda1 coupled with constant strength beta to the continuum (0, a).
struct FriedrichsParams {
    double a = 2.0;
    double lambda1 = 1.0;
    double beta = 0.0;
    int nu = 0;  // sheet index, 0 = physical

    double beta2() const { return beta * beta; }
};

void check_params(const FriedrichsParams& p);

// beta^2 (Log z - Log(z - a) + 2 pi i nu) with principal logarithms.
Complex v1_closed(const FriedrichsParams& p, Complex z);
Complex v1_closed_derivative(const FriedrichsParams& p, Complex z);

struct ResonanceRoot {
    Complex z;
    double residual = 0.0;
    int iterations = 0;
    std::vector<Complex> trajectory;
    // Residual of the angle equation (symmetric case lambda1 = a/2 only).
    std::optional<double> angle_residual;
};

// Newton from an explicit start; RootFindingError after 100 steps.
ResonanceRoot newton_root(const FriedrichsParams& p, Complex start);
// Newton from lambda1 + i sign(nu) a / 10.
ResonanceRoot resonance_root(const FriedrichsParams& p);

// Symmetric case: tan(phi) = bt2 (phi - pi/2 + pi nu), with beta^2 = (R/2) bt2.
double angle_equation(double phi, double bt2, int nu);
// Root in [0, pi/2) by sign scan and bisection; nullopt when none exists.
std::optional<double> angle_root(double bt2, int nu);

struct BoundStates {
    double z0 = 0.0;  // below the interval
    double za = 0.0;  // above the interval
    double residual0 = 0.0;
    double residual_a = 0.0;
};

BoundStates bound_states(const FriedrichsParams& p);
double z0_asymptote(const FriedrichsParams& p);
double za_asymptote(const FriedrichsParams& p);

enum class Hypothesis { Holds, Fails, Indeterminate };

std::string to_string(Hypothesis h);

struct OutsideCheck {
    Hypothesis hypothesis = Hypothesis::Indeterminate;
    double v_lo = 0.0;  // largest eigenvalue of int K'(mu) / (mu - lo) dmu (inf if divergent)
    double v_hi = 0.0;  // largest eigenvalue of int K'(mu) / (hi - mu) dmu
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::vector<double> roots_below;  // real zeros of det M1 below the interval
    std::vector<double> roots_above;
};

// Sufficient test for absence of real spectrum outside the (single, bounded) interval, plus a determinant scan.
OutsideCheck no_spectrum_outside(const SpectralModel& model, int grid = 2000);

// n = 1 model on (0, a) with constant row [beta].
SpectralModel friedrichs_model(const FriedrichsParams& p, double strip = 0.0);
// Parameters of an n = 1 constant-vector model on (0, a); UnsupportedModelError otherwise.
FriedrichsParams friedrichs_params(const SpectralModel& model);

}  // namespace resonance
