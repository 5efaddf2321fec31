#include "test_support.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

// Own bisection for tan(phi) = bt2 (phi + pi/2) on (0, pi/2).
double angle_bisect(double bt2) {
    auto g = [&](double phi) { return std::tan(phi) - bt2 * (phi + 0.5 * kPi); };
    double lo = 0.0, hi = 0.5 * kPi - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("closed-form continuation values") {
    const FriedrichsParams p{3.0, 1.0, 0.4, 0};
    CHECK(std::abs(v1_closed(p, 6.0) - p.beta2() * std::log(2.0)) < 1e-15);
    FriedrichsParams up = p, down = p;
    up.nu = 1;
    down.nu = -1;
    for (Complex z : {Complex(1.0, 0.3), Complex(-1.0, 2.0), Complex(2.5, -0.7)}) {
        CHECK(std::abs(v1_closed(up, z) - v1_closed(p, z) - 2.0 * kPi * kI * p.beta2()) < 1e-14);
        CHECK(std::abs(v1_closed(down, z) - v1_closed(p, z) + 2.0 * kPi * kI * p.beta2()) < 1e-14);
        const double h = 1e-6;
        const Complex fd = (v1_closed(p, z + h) - v1_closed(p, z - h)) / (2.0 * h);
        CHECK(std::abs(v1_closed_derivative(p, z) - fd) < 1e-8);
    }
    CHECK_THROWS_AS(v1_closed(p, 0.0), DomainError);
    CHECK_THROWS_AS(v1_closed(p, 3.0), DomainError);
}

TEST_CASE("closed form agrees with the quadrature continuation") {
    const FriedrichsParams p{2.0, 1.0, std::sqrt(0.05), 1};
    const SpectralModel m = friedrichs_model(p, 1.5);
    const Contour c = build_contour(m, CurveSpec{}, MultiIndex{1}, {{16, 16}, 1e-12});
    FriedrichsParams phys = p;
    phys.nu = 0;
    CHECK(std::abs(v1_continued(m, c, {1.0, 0.4})(0, 0) - v1_closed(p, {1.0, 0.4})) < 1e-11);
    CHECK(std::abs(v1_continued(m, c, {1.0, -0.4})(0, 0) - v1_closed(phys, {1.0, -0.4})) < 1e-11);
}

TEST_CASE("symmetric resonance matches the angle equation") {
    for (double R : {0.5, 1.0, 2.0}) {
        for (double frac : {0.1, 0.5, 0.9}) {
            const double b2 = frac * R / (4.0 * kPi);
            const double bt2 = 2.0 * b2 / R;
            const double phi = angle_bisect(bt2);
            const Complex expect(R, R * std::tan(phi));
            for (int nu : {1, -1}) {
                const FriedrichsParams p{2.0 * R, R, std::sqrt(b2), nu};
                const ResonanceRoot r = resonance_root(p);
                const Complex e = nu > 0 ? expect : std::conj(expect);
                CHECK(std::abs(r.z - e) < 1e-10 * R);
                REQUIRE(r.angle_residual);
                CHECK(*r.angle_residual < 1e-10);
            }
            const auto lib = angle_root(bt2, 1);
            REQUIRE(lib);
            CHECK(std::abs(*lib - phi) < 1e-12);
        }
    }
}

TEST_CASE("angle equation has no root on non-positive sheets") {
    for (double bt2 : {0.01, 0.1, 1.0}) {
        CHECK_FALSE(angle_root(bt2, 0));
        CHECK_FALSE(angle_root(bt2, -1));
        CHECK(angle_root(bt2, 2));
    }
}

TEST_CASE("asymmetric resonances come in conjugate pairs") {
    const FriedrichsParams p{2.0, 0.7, 0.2, 1};
    FriedrichsParams q = p;
    q.nu = -1;
    const ResonanceRoot a = resonance_root(p), b = resonance_root(q);
    CHECK(a.z.imag() > 0.0);
    CHECK(std::abs(a.z - std::conj(b.z)) < 1e-12);
    CHECK(std::abs(p.lambda1 - a.z + p.beta2() * (std::log(a.z) - std::log(a.z - 2.0) + 2.0 * kPi * kI)) < 1e-12);
    CHECK_FALSE(a.angle_residual);
    CHECK(a.trajectory.size() == static_cast<std::size_t>(a.iterations) + 1);
    FriedrichsParams phys = p;
    phys.nu = 0;
    CHECK_THROWS_AS(resonance_root(phys), ModelError);
}

TEST_CASE("bound states outside the interval") {
    double prev_err = kInf;
    for (double b2 : {0.3, 0.2, 0.1, 0.05}) {
        const FriedrichsParams p{2.0, 1.0, std::sqrt(b2), 0};
        const BoundStates s = bound_states(p);
        CHECK(s.z0 < 0.0);
        CHECK(s.za > 2.0);
        // 1 - z + b2 log(z / (z - 2)) changes sign within 1e-11 of each root
        auto f = [&](double z) { return 1.0 - z + b2 * std::log(z / (z - 2.0)); };
        for (double z : {s.z0, s.za}) {
            const double h = 1e-11;
            CHECK(f(z - h) * f(z + h) <= 0.0);
        }
        const double r0 = s.z0 / z0_asymptote(p);
        const double ra = (s.za - 2.0) / (za_asymptote(p) - 2.0);
        CHECK(r0 > 0.5);
        CHECK(r0 < 2.0);
        CHECK(ra > 0.5);
        CHECK(ra < 2.0);
        const double err = std::abs(r0 - 1.0) + std::abs(ra - 1.0);
        CHECK(err <= prev_err);
        prev_err = err;
    }
    CHECK_THROWS_AS(bound_states({2.0, 3.0, 0.2, 0}), ModelError);
    CHECK_THROWS_AS(bound_states({2.0, 1.0, 0.0, 0}), ModelError);
}

TEST_CASE("parameter checks and model extraction") {
    CHECK_THROWS_AS(check_params({-1.0, 1.0, 0.1, 0}), ModelError);
    CHECK_THROWS_AS(check_params({2.0, 1.0, -0.1, 0}), ModelError);
    const FriedrichsParams p{2.5, 1.1, 0.3, 0};
    const FriedrichsParams back = friedrichs_params(friedrichs_model(p));
    CHECK(back.a == p.a);
    CHECK(back.lambda1 == p.lambda1);
    CHECK(back.beta == doctest::Approx(p.beta).epsilon(1e-15));
    CHECK_THROWS_AS(friedrichs_params(gram3_model()), UnsupportedModelError);
    SpectralModel shifted = friedrichs_model(p);
    shifted.intervals[0].lo = 0.5;
    CHECK_THROWS_AS(friedrichs_params(shifted), UnsupportedModelError);
}

TEST_CASE("no real spectrum outside the interval") {
    auto model = [](double c) {
        SpectralModel m;
        m.a1 = Matrix::Constant(1, 1, 1.0);
        m.intervals = {{0.0, 2.0, 1.5}};
        // c mu (2 - mu) vanishes at both endpoints
        std::vector<Matrix> coeffs{Matrix::Zero(1, 1), Matrix::Constant(1, 1, 2.0 * c), Matrix::Constant(1, 1, -c)};
        m.coupling = CouplingFunction::polynomial(coeffs);
        return m;
    };
    const OutsideCheck weak = no_spectrum_outside(model(0.3));
    CHECK(weak.hypothesis == Hypothesis::Holds);
    CHECK(weak.v_lo == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(weak.v_hi == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(weak.roots_below.empty());
    CHECK(weak.roots_above.empty());

    const OutsideCheck strong = no_spectrum_outside(model(1.0));
    CHECK(strong.hypothesis == Hypothesis::Fails);
    REQUIRE(strong.roots_below.size() == 1);
    REQUIRE(strong.roots_above.size() == 1);
    // 1 - z + int c mu (2 - mu) / (z - mu) dmu, integrated in closed form
    auto f = [](double z) { return 1.0 - z + 2.0 * (z - 1.0) - z * (z - 2.0) * std::log(std::abs(z / (z - 2.0))); };
    CHECK(std::abs(f(strong.roots_below[0])) < 1e-8);
    CHECK(std::abs(f(strong.roots_above[0])) < 1e-8);

    const OutsideCheck constant = no_spectrum_outside(friedrichs(1.0, 0.2));
    CHECK(constant.hypothesis == Hypothesis::Indeterminate);
    CHECK(constant.v_lo == kInf);
    REQUIRE(constant.roots_below.size() == 1);
    REQUIRE(constant.roots_above.size() == 1);
    const BoundStates bs = bound_states({2.0, 1.0, std::sqrt(0.2), 0});
    CHECK(constant.roots_below[0] == doctest::Approx(bs.z0).epsilon(1e-8));
    CHECK(constant.roots_above[0] == doctest::Approx(bs.za).epsilon(1e-8));

    CHECK_THROWS_AS(no_spectrum_outside(two_interval_model()), UnsupportedModelError);
    SpectralModel d = friedrichs(1.0, 0.05);
    d.discrete.push_back({-3.0, Matrix::Constant(1, 1, 0.1)});
    CHECK_THROWS_AS(no_spectrum_outside(d), UnsupportedModelError);
}
