#include "resonance/model.hpp"

#include "resonance/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace resonance {

std::string to_string(CouplingKind kind) {
    switch (kind) {
        case CouplingKind::ConstantVector: return "constant-vector";
        case CouplingKind::PolynomialMatrix: return "polynomial-matrix";
        case CouplingKind::RationalMatrix: return "rational-matrix";
        case CouplingKind::Plugin: return "user-plugin";
    }
    return "unknown";
}

namespace {

Matrix horner(const std::vector<Matrix>& coeffs, Complex mu) {
    Matrix acc = coeffs.back();
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = (acc * mu + *it).eval();
    return acc;
}

Complex horner(const std::vector<double>& coeffs, Complex mu) {
    Complex acc = coeffs.back();
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = acc * mu + *it;
    return acc;
}

std::vector<Matrix> factor_to_coefficients(const std::vector<Matrix>& f) {
    const auto degree = f.size() - 1;
    const Eigen::Index n = f.front().cols();
    std::vector<Matrix> c(2 * degree + 1, Matrix::Zero(n, n));
    for (std::size_t p = 0; p < f.size(); ++p)
        for (std::size_t q = 0; q < f.size(); ++q) c[p + q] += f[p].adjoint() * f[q];
    return c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

CouplingFunction::CouplingFunction() : coeffs_{Matrix::Zero(0, 0)} {}

CouplingFunction CouplingFunction::zero(Eigen::Index n) {
    CouplingFunction c;
    c.n_ = n;
    c.coeffs_ = {Matrix::Zero(n, n)};
    return c;
}

CouplingFunction CouplingFunction::constant_vector(const Vector& row) {
    CouplingFunction c;
    c.kind_ = CouplingKind::ConstantVector;
    c.n_ = row.size();
    c.row_ = row;
    Matrix b = row.transpose();
    c.coeffs_ = {b.adjoint() * b};
    return c;
}

CouplingFunction CouplingFunction::polynomial(std::vector<Matrix> coeffs) {
    if (coeffs.empty()) throw ModelError("polynomial coupling needs at least one coefficient");
    const Eigen::Index n = coeffs.front().rows();
    for (const auto& m : coeffs)
        if (m.rows() != n || m.cols() != n) throw ModelError("polynomial coupling coefficients must be square and equal-sized");
    CouplingFunction c;
    c.kind_ = CouplingKind::PolynomialMatrix;
    c.n_ = n;
    c.coeffs_ = std::move(coeffs);
    return c;
}

CouplingFunction CouplingFunction::polynomial_factor(const std::vector<Matrix>& factor_coeffs) {
    if (factor_coeffs.empty()) throw ModelError("polynomial factor needs at least one coefficient");
    for (const auto& m : factor_coeffs)
        if (m.rows() != factor_coeffs.front().rows() || m.cols() != factor_coeffs.front().cols())
            throw ModelError("polynomial factor coefficients must share a shape");
    return polynomial(factor_to_coefficients(factor_coeffs));
}

CouplingFunction CouplingFunction::rational(std::vector<Matrix> numerator, std::vector<double> denominator) {
    CouplingFunction c = polynomial(std::move(numerator));
    if (denominator.empty()) throw ModelError("rational coupling needs a denominator");
    while (denominator.size() > 1 && denominator.back() == 0.0) denominator.pop_back();
    if (denominator.back() == 0.0) throw ModelError("rational coupling denominator is identically zero");
    c.kind_ = CouplingKind::RationalMatrix;
    c.denominator_ = std::move(denominator);
    return c;
}

CouplingFunction CouplingFunction::plugin(Eigen::Index n, std::function<Matrix(Complex)> fn) {
    if (!fn) throw ModelError("plugin coupling needs a callable");
    CouplingFunction c;
    c.kind_ = CouplingKind::Plugin;
    c.n_ = n;
    c.coeffs_.clear();
    c.plugin_ = std::move(fn);
    return c;
}

CouplingFunction CouplingFunction::with_decay(DecayBound decay) const {
    CouplingFunction c = *this;
    c.decay_ = decay;
    return c;
}

CouplingFunction CouplingFunction::scaled(double factor) const {
    CouplingFunction c = *this;
    if (kind_ == CouplingKind::Plugin) {
        auto inner = plugin_;
        c.plugin_ = [inner, factor](Complex mu) -> Matrix { return factor * inner(mu); };
    } else {
        for (auto& m : c.coeffs_) m *= factor;
        if (kind_ == CouplingKind::ConstantVector) {
            if (factor < 0.0) throw ModelError("constant-vector coupling can only be scaled by a nonnegative factor");
            c.row_ *= std::sqrt(factor);
        }
    }
    if (c.decay_) c.decay_->c *= std::abs(factor);
    return c;
}

Matrix CouplingFunction::operator()(Complex mu) const {
    if (kind_ == CouplingKind::Plugin) return plugin_(mu);
    Matrix p = horner(coeffs_, mu);
    if (kind_ == CouplingKind::RationalMatrix) p /= horner(denominator_, mu);
    return p;
}

std::vector<Complex> CouplingFunction::poles() const {
    if (kind_ != CouplingKind::RationalMatrix || denominator_.size() < 2) return {};
    const auto d = static_cast<Eigen::Index>(denominator_.size()) - 1;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -denominator_[i] / denominator_[d];
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + d);
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

bool CouplingFunction::is_zero() const {
    if (kind_ == CouplingKind::Plugin) return false;
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Matrix& m) { return m.norm() == 0.0; });
}

bool ValidationReport::mentions(const std::string& assumption) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.assumption == assumption; });
}

void check_structure(const SpectralModel& model) {
    const Eigen::Index n = model.a1.rows();
    if (n == 0 || model.a1.cols() != n) throw ModelError("a1 must be a non-empty square matrix");
    if (!model.a1.allFinite()) throw ModelError("a1 has non-finite entries");
    if (model.intervals.empty()) throw ModelError("model needs at least one continuum interval");
    for (const auto& iv : model.intervals) {
        if (std::isnan(iv.lo) || std::isnan(iv.hi) || std::isnan(iv.strip))
            throw ModelError("interval has NaN endpoint or strip");
        if (!(iv.lo < iv.hi)) throw ModelError("interval endpoints must satisfy lo < hi");
        if (!(iv.strip > 0.0) || !std::isfinite(iv.strip)) throw ModelError("strip half-width must be positive and finite");
        if (iv.lo == kInf || iv.hi == -kInf) throw ModelError("interval endpoints point the wrong way");
    }
    for (const auto& d : model.discrete) {
        if (!std::isfinite(d.nu)) throw ModelError("discrete point must be finite");
        if (d.k.rows() != n || d.k.cols() != n) throw ModelError("discrete weight has wrong shape");
        if (!d.k.allFinite()) throw ModelError("discrete weight has non-finite entries");
    }
    if (model.coupling.dimension() != n) throw ModelError("coupling dimension does not match a1");
    for (const auto& c : model.coupling.coefficients())
        if (!c.allFinite()) throw ModelError("coupling coefficients have non-finite entries");
    for (double q : model.coupling.denominator())
        if (!std::isfinite(q)) throw ModelError("coupling denominator has non-finite entries");
    if (const auto& d = model.coupling.decay(); d && (!std::isfinite(d->c) || !std::isfinite(d->theta)))
        throw ModelError("decay bound must be finite");
}

int strip_index(const SpectralModel& model, Complex mu) {
    for (std::size_t k = 0; k < model.intervals.size(); ++k) {
        const auto& iv = model.intervals[k];
        const double slack = 1e-12 * (1.0 + std::abs(mu));
        if (mu.real() >= iv.lo - slack && mu.real() <= iv.hi + slack && std::abs(mu.imag()) <= iv.strip + slack)
            return static_cast<int>(k);
    }
    return -1;
}

Matrix kprime_eval(const SpectralModel& model, Complex mu) {
    if (strip_index(model, mu) >= 0) return model.coupling(mu);
    int nearest = -1;
    double best = kInf;
    for (std::size_t k = 0; k < model.intervals.size(); ++k) {
        const auto& iv = model.intervals[k];
        const double dx = std::max({iv.lo - mu.real(), mu.real() - iv.hi, 0.0});
        const double dy = std::max(std::abs(mu.imag()) - iv.strip, 0.0);
        const double d = std::hypot(dx, dy);
        if (d < best) {
            best = d;
            nearest = static_cast<int>(k);
        }
    }
    std::ostringstream os;
    os << "K' evaluated outside every holomorphy strip at mu = " << mu << "; nearest strip is interval " << nearest
       << " at distance " << best;
    throw DomainError(os.str(), nearest, best);
}

RealVector a1_eigenvalues(const SpectralModel& model) {
    Matrix h = 0.5 * (model.a1 + model.a1.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

namespace {

// Real sample points inside an interval; unbounded ends are replaced by a finite window.
std::vector<double> interval_samples(const Interval& iv, int count, std::mt19937_64& rng) {
    double lo = iv.lo, hi = iv.hi;
    if (!std::isfinite(lo)) lo = hi - 10.0 * (1.0 + std::abs(hi));
    if (!std::isfinite(hi)) hi = lo + 10.0 * (1.0 + std::abs(lo));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        double t = u(rng);
        t = 1e-6 + (1.0 - 2e-6) * t;
        out.push_back(lo + t * (hi - lo));
    }
    return out;
}

double min_hermitian_eigenvalue(const Matrix& m) {
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

// Least-squares slope of log ||K'(e + s*delta) - K'(e)|| against log delta over a geometric ladder.
std::optional<double> holder_exponent(const CouplingFunction& kp, double endpoint, double direction, double scale) {
    const Matrix k0 = kp(endpoint);
    const double ref = 1.0 + spectral_norm(k0);
    std::vector<double> xs, ys;
    for (int j = 0; j < 8; ++j) {
        const double delta = scale * std::pow(0.5, j + 1);
        const double diff = spectral_norm(kp(endpoint + direction * delta) - k0);
        if (diff > 1e-14 * ref) {
            xs.push_back(std::log(delta));
            ys.push_back(std::log(diff));
        }
    }
    if (xs.size() < 2) return std::nullopt;  // locally constant
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

ValidationReport validate_model(const SpectralModel& model) {
    check_structure(model);
    ValidationReport report;
    auto add = [&](std::string assumption, std::string detail) {
        report.violations.push_back({std::move(assumption), std::move(detail)});
    };

    const Matrix& a1 = model.a1;
    const double a1_norm = spectral_norm(a1);
    const double herm = spectral_norm(a1 - a1.adjoint());
    if (herm > 1e-12 * std::max(a1_norm, 1e-300) && herm > 0.0)
        add("a1 Hermitian", "||A1 - A1*|| = " + fmt(herm));

    const auto& ivs = model.intervals;
    for (std::size_t k = 0; k < ivs.size(); ++k) {
        if (k > 0 && !(ivs[k - 1].hi <= ivs[k].lo))
            add("intervals sorted and disjoint", "interval " + std::to_string(k - 1) + " overlaps or follows interval " +
                                                     std::to_string(k));
        if (k > 0 && !std::isfinite(ivs[k].lo)) add("intervals sorted and disjoint", "only the first interval may start at -inf");
        if (k + 1 < ivs.size() && !std::isfinite(ivs[k].hi))
            add("intervals sorted and disjoint", "only the last interval may end at +inf");
        if (k > 0 && ivs[k - 1].hi >= ivs[k].lo)
            report.warnings.push_back("holomorphy strips of intervals " + std::to_string(k - 1) + " and " +
                                      std::to_string(k) + " touch; branch identity is not checked");
    }

    const RealVector eigs = a1_eigenvalues(model);
    for (std::size_t j = 0; j < model.discrete.size(); ++j) {
        const auto& d = model.discrete[j];
        for (std::size_t k = 0; k < ivs.size(); ++k)
            if (ivs[k].contains_open(d.nu))
                add("discrete point inside continuum interval",
                    "nu_" + std::to_string(j) + " = " + fmt(d.nu) + " lies in interval " + std::to_string(k));
        const double kn = spectral_norm(d.k);
        const double herm_k = spectral_norm(d.k - d.k.adjoint());
        if (herm_k > 1e-12 * std::max(kn, 1e-300) && herm_k > 0.0)
            add("discrete weight Hermitian PSD", "K_" + std::to_string(j) + " is not Hermitian");
        const double mn = min_hermitian_eigenvalue(d.k);
        if (mn < -1e-12 * kn) add("discrete weight Hermitian PSD", "K_" + std::to_string(j) + " has eigenvalue " + fmt(mn));
        for (Eigen::Index i = 0; i < eigs.size(); ++i)
            if (std::abs(eigs(i) - d.nu) <= 1e-12 * (1.0 + std::abs(d.nu)))
                add("A1 spectrum disjoint from discrete remainder", "eigenvalue " + fmt(eigs(i)) + " equals nu_" + std::to_string(j));
    }

    const CouplingFunction& kp = model.coupling;
    std::mt19937_64 rng(20240611);
    for (std::size_t k = 0; k < ivs.size(); ++k) {
        const auto& iv = ivs[k];
        if (!iv.bounded() && !kp.decay() && !kp.is_zero())
            add("decay declared for unbounded interval", "interval " + std::to_string(k) + " is unbounded without decay bound");
        if (!iv.bounded() && kp.decay() && !(kp.decay()->theta > 1.0))
            add("decay declared for unbounded interval", "decay exponent " + fmt(kp.decay()->theta) + " must exceed 1");

        for (double mu : interval_samples(iv, 100, rng)) {
            const Matrix m = kp(mu);
            if (!m.allFinite()) {
                add("K' Hermitian PSD on intervals", "non-finite K' at mu = " + fmt(mu));
                break;
            }
            const double mn_norm = spectral_norm(m);
            const double herm_m = spectral_norm(m - m.adjoint());
            if (herm_m > 1e-12 * (1.0 + mn_norm)) {
                add("K' Hermitian PSD on intervals", "K' not Hermitian at mu = " + fmt(mu));
                break;
            }
            const double mn = min_hermitian_eigenvalue(m);
            if (mn < -1e-12 * (1.0 + mn_norm)) {
                add("K' Hermitian PSD on intervals", "K' has eigenvalue " + fmt(mn) + " at mu = " + fmt(mu));
                break;
            }
            if (!iv.bounded() && kp.decay()) {
                const double bound = kp.decay()->c * std::pow(1.0 + std::abs(mu), -kp.decay()->theta);
                if (mn_norm > bound * (1.0 + 1e-9) + 1e-300) {
                    add("decay declared for unbounded interval", "||K'|| = " + fmt(mn_norm) + " exceeds declared bound at mu = " + fmt(mu));
                    break;
                }
            }
        }

        // conjugate symmetry inside the strip
        std::uniform_real_distribution<double> uy(-1.0, 1.0);
        for (double x : interval_samples(iv, 20, rng)) {
            const Complex mu(x, 0.95 * iv.strip * uy(rng));
            const Matrix m = kp(mu);
            const double res = spectral_norm(kp(std::conj(mu)) - m.adjoint());
            if (res > 1e-12 * (1.0 + spectral_norm(m))) {
                add("K' conjugate symmetry", "residual " + fmt(res) + " at mu = " + fmt(mu.real()) + "+" + fmt(mu.imag()) + "i");
                break;
            }
        }

        for (Complex p : kp.poles()) {
            if (p.real() >= iv.lo && p.real() <= iv.hi && std::abs(p.imag()) <= iv.strip)
                add("coupling poles outside holomorphy strips",
                    "pole " + fmt(p.real()) + "+" + fmt(p.imag()) + "i inside strip of interval " + std::to_string(k));
        }

        if (iv.bounded()) {
            const double scale = std::min(0.25 * iv.length(), 1.0);
            for (int side = 0; side < 2; ++side) {
                const double e = side == 0 ? iv.lo : iv.hi;
                const double dir = side == 0 ? 1.0 : -1.0;
                if (!kp(e).allFinite()) {
                    add("Hoelder condition at endpoints", "K' is not finite at endpoint " + fmt(e));
                    continue;
                }
                auto gamma = holder_exponent(kp, e, dir, scale);
                if (gamma && *gamma <= 0.1)
                    add("Hoelder condition at endpoints", "fitted exponent " + fmt(*gamma) + " at endpoint " + fmt(e));
            }
        }
    }
    return report;
}

}  // namespace resonance
