#include "resonance/friedrichs.hpp"

#include "resonance/errors.hpp"
#include "resonance/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resonance {

void check_params(const FriedrichsParams& p) {
    if (!(p.a > 0.0) || !std::isfinite(p.a)) throw ModelError("interval length a must be positive");
    if (!(p.beta >= 0.0) || !std::isfinite(p.beta)) throw ModelError("coupling beta must be nonnegative");
    if (!std::isfinite(p.lambda1)) throw ModelError("lambda1 must be finite");
}

Complex v1_closed(const FriedrichsParams& p, Complex z) {
    if (z == Complex(0.0) || z == Complex(p.a)) throw DomainError("v1_closed evaluated at a branch point", 0, 0.0);
    return p.beta2() * (std::log(z) - std::log(z - p.a) + 2.0 * kPi * kI * static_cast<double>(p.nu));
}

Complex v1_closed_derivative(const FriedrichsParams& p, Complex z) {
    return p.beta2() * (1.0 / z - 1.0 / (z - p.a));
}

ResonanceRoot newton_root(const FriedrichsParams& p, Complex start) {
    check_params(p);
    ResonanceRoot r;
    Complex z = start;
    const double tol = 1e-12 * std::max({1.0, p.a, std::abs(p.lambda1)});
    r.trajectory.push_back(z);
    for (int k = 0; k <= 100; ++k) {
        const Complex f = p.lambda1 - z + v1_closed(p, z);
        r.residual = std::abs(f);
        r.iterations = k;
        if (r.residual <= tol) {
            r.z = z;
            if (std::abs(p.lambda1 - 0.5 * p.a) <= 1e-14 * p.a && p.nu != 0 && p.beta > 0.0) {
                const double radius = 0.5 * p.a;
                const Complex w = p.nu > 0 ? z : std::conj(z);
                const double phi = std::atan2(w.imag(), radius);
                r.angle_residual = std::abs(angle_equation(phi, 2.0 * p.beta2() / radius, std::abs(p.nu)));
            }
            return r;
        }
        if (k == 100) break;
        const Complex df = -1.0 + v1_closed_derivative(p, z);
        z -= f / df;
        r.trajectory.push_back(z);
    }
    throw RootFindingError("Newton did not converge in 100 steps", r.trajectory);
}

ResonanceRoot resonance_root(const FriedrichsParams& p) {
    if (p.nu == 0) throw ModelError("resonance_root needs a nonzero sheet index");
    const double s = p.nu > 0 ? 1.0 : -1.0;
    return newton_root(p, Complex(p.lambda1, s * p.a / 10.0));
}

double angle_equation(double phi, double bt2, int nu) {
    return std::tan(phi) - bt2 * (phi - 0.5 * kPi + kPi * nu);
}

std::optional<double> angle_root(double bt2, int nu) {
    const int samples = 4096;
    const double top = 0.5 * kPi * (1.0 - 1e-12);
    double prev_phi = 0.0;
    double prev = angle_equation(0.0, bt2, nu);
    if (prev == 0.0) return 0.0;
    for (int j = 1; j <= samples; ++j) {
        const double phi = top * j / samples;
        const double g = angle_equation(phi, bt2, nu);
        if ((prev < 0.0) != (g < 0.0)) {
            double lo = prev_phi, hi = phi, glo = prev;
            for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = angle_equation(mid, bt2, nu);
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_phi = phi;
        prev = g;
    }
    return std::nullopt;
}

namespace {

// Bisection for a monotone function on [lo, hi] given the sign at lo; stops at |f| <= tol or full resolution.
template <class F>
double bisect(F f, double lo, double hi, double tol, double& residual) {
    const bool neg_lo = f(lo) < 0.0;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        residual = std::abs(fm);
        if (residual <= tol || mid == lo || mid == hi) break;
        if ((fm < 0.0) == neg_lo)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

}  // namespace

BoundStates bound_states(const FriedrichsParams& p) {
    check_params(p);
    if (!(p.lambda1 > 0.0 && p.lambda1 < p.a)) throw ModelError("bound_states needs lambda1 inside (0, a)");
    if (!(p.beta > 0.0)) throw ModelError("bound_states needs beta > 0");
    const double b2 = p.beta2();
    const double la = std::log(p.a);
    const double tol = 1e-12;

    // z = -exp(t): f = lambda1 + e^t + b2 (t - ln(a + e^t)), increasing in t.
    auto f0 = [&](double t) { return p.lambda1 + std::exp(t) + b2 * (t - la - std::log1p(std::exp(t) / p.a)); };
    double t_lo = la - p.lambda1 / b2 - 5.0, t_hi = la + p.lambda1 / b2 + 1.0;
    for (int k = 0; k < 60 && f0(t_lo) >= 0.0; ++k) t_lo -= 10.0;
    for (int k = 0; k < 60 && f0(t_hi) <= 0.0; ++k) t_hi += 10.0;
    if (!(f0(t_lo) < 0.0 && f0(t_hi) > 0.0)) throw RootFindingError("bound state below the interval: bracket failure", {});
    BoundStates out;
    const double t0 = bisect(f0, t_lo, t_hi, tol, out.residual0);
    out.z0 = -std::exp(t0);

    // z = a + exp(s): f = lambda1 - a - e^s + b2 (ln(a + e^s) - s), decreasing in s.
    auto fa = [&](double s) { return p.lambda1 - p.a - std::exp(s) + b2 * (la + std::log1p(std::exp(s) / p.a) - s); };
    double s_lo = la - (p.a - p.lambda1) / b2 - 5.0, s_hi = la + (p.a - p.lambda1) / b2 + 1.0;
    for (int k = 0; k < 60 && fa(s_lo) <= 0.0; ++k) s_lo -= 10.0;
    for (int k = 0; k < 60 && fa(s_hi) >= 0.0; ++k) s_hi += 10.0;
    if (!(fa(s_lo) > 0.0 && fa(s_hi) < 0.0)) throw RootFindingError("bound state above the interval: bracket failure", {});
    const double sa = bisect(fa, s_lo, s_hi, tol, out.residual_a);
    out.za = p.a + std::exp(sa);
    return out;
}

double z0_asymptote(const FriedrichsParams& p) { return -p.a * std::exp(-p.lambda1 / p.beta2()); }

double za_asymptote(const FriedrichsParams& p) { return p.a * (1.0 + std::exp(-(p.a - p.lambda1) / p.beta2())); }

std::string to_string(Hypothesis h) {
    switch (h) {
        case Hypothesis::Holds: return "holds";
        case Hypothesis::Fails: return "fails";
        case Hypothesis::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

namespace {

struct RealQuadrature {
    std::vector<double> x;
    std::vector<double> w;
};

RealQuadrature interval_rule(double lo, double hi, int panels, int points) {
    const GaussRule g = gauss_legendre(points);
    RealQuadrature q;
    const double h = (hi - lo) / panels;
    for (int j = 0; j < panels; ++j)
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            q.x.push_back(lo + h * (j + 0.5 * (1.0 + g.nodes[i])));
            q.w.push_back(0.5 * h * g.weights[i]);
        }
    return q;
}

double max_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double det_m1(const SpectralModel& model, const RealQuadrature& q, double z) {
    Matrix m = model.a1;
    m.diagonal().array() -= z;
    for (std::size_t i = 0; i < q.x.size(); ++i) m += model.coupling(q.x[i]) * (q.w[i] / (z - q.x[i]));
    return m.determinant().real();
}

// Sign changes of det M1 along z = edge + dir * d, d log-spaced in [dmin, dmax], refined by bisection.
std::vector<double> scan_roots(const SpectralModel& model, const RealQuadrature& q, double edge, double dir, double dmin,
                               double dmax, int grid) {
    std::vector<double> roots;
    auto g = [&](double d) { return det_m1(model, q, edge + dir * d); };
    const double lmin = std::log(dmin), lmax = std::log(dmax);
    double prev_d = dmin, prev = g(dmin);
    for (int j = 1; j <= grid; ++j) {
        const double d = std::exp(lmin + (lmax - lmin) * j / grid);
        const double cur = g(d);
        if (prev != 0.0 && cur != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            double lo = prev_d, hi = d;
            const bool neg_lo = prev < 0.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = std::sqrt(lo * hi);
                if (mid <= lo || mid >= hi) break;
                if ((g(mid) < 0.0) == neg_lo)
                    lo = mid;
                else
                    hi = mid;
            }
            roots.push_back(edge + dir * std::sqrt(lo * hi));
        }
        prev_d = d;
        prev = cur;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

OutsideCheck no_spectrum_outside(const SpectralModel& model, int grid) {
    check_structure(model);
    if (model.intervals.size() != 1 || !model.intervals[0].bounded())
        throw UnsupportedModelError("no_spectrum_outside needs exactly one bounded interval");
    if (!model.discrete.empty()) throw UnsupportedModelError("no_spectrum_outside does not handle a discrete remainder");
    const double lo = model.intervals[0].lo, hi = model.intervals[0].hi;
    const double len = hi - lo;
    const RealQuadrature q = interval_rule(lo, hi, 64, 16);

    OutsideCheck out;
    const RealVector eigs = a1_eigenvalues(model);
    out.lambda_min = eigs(0);
    out.lambda_max = eigs(eigs.size() - 1);

    const double scale = 1e-13 * (1.0 + spectral_norm(model.coupling(lo)) + spectral_norm(model.coupling(hi)));
    const bool finite_lo = spectral_norm(model.coupling(lo)) <= scale;
    const bool finite_hi = spectral_norm(model.coupling(hi)) <= scale;
    const Eigen::Index n = model.dimension();
    Matrix qlo = Matrix::Zero(n, n), qhi = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        const Matrix k = model.coupling(q.x[i]);
        qlo += k * (q.w[i] / (q.x[i] - lo));
        qhi += k * (q.w[i] / (hi - q.x[i]));
    }
    out.v_lo = finite_lo ? max_eigenvalue(qlo) : kInf;
    out.v_hi = finite_hi ? max_eigenvalue(qhi) : kInf;
    if (!finite_lo || !finite_hi)
        out.hypothesis = Hypothesis::Indeterminate;
    else
        out.hypothesis = (out.v_lo < out.lambda_min - lo && out.v_hi < hi - out.lambda_max) ? Hypothesis::Holds
                                                                                            : Hypothesis::Fails;

    double total = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) total += q.w[i] * spectral_norm(model.coupling(q.x[i]));
    const double reach = 2.0 * (spectral_norm(model.a1) + std::abs(lo) + std::abs(hi) + 1.0) + total;
    const double dmin = 1e-14 * (1.0 + len);
    out.roots_below = scan_roots(model, q, lo, -1.0, dmin, reach, grid);
    out.roots_above = scan_roots(model, q, hi, 1.0, dmin, reach, grid);
    return out;
}

SpectralModel friedrichs_model(const FriedrichsParams& p, double strip) {
    check_params(p);
    SpectralModel m;
    m.a1 = Matrix::Constant(1, 1, Complex(p.lambda1, 0.0));
    m.intervals = {{0.0, p.a, strip > 0.0 ? strip : p.a}};
    Vector row(1);
    row(0) = p.beta;
    m.coupling = CouplingFunction::constant_vector(row);
    return m;
}

FriedrichsParams friedrichs_params(const SpectralModel& model) {
    check_structure(model);
    if (model.dimension() != 1 || model.coupling.kind() != CouplingKind::ConstantVector ||
        model.intervals.size() != 1 || !model.discrete.empty() || model.intervals[0].lo != 0.0 ||
        !model.intervals[0].bounded())
        throw UnsupportedModelError("not an n = 1 constant-coupling model on (0, a)");
    FriedrichsParams p;
    p.a = model.intervals[0].hi;
    p.lambda1 = model.a1(0, 0).real();
    p.beta = std::abs(model.coupling.row()(0));
    return p;
}

}  // namespace resonance
