#include "test_support.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

Complex weight_sum(const Contour& c, std::size_t piece) {
    Complex s = 0.0;
    const ContourPiece& p = c.pieces[piece];
    for (std::size_t i = p.first_atom; i < p.first_atom + p.atom_count; ++i) s += c.atoms[i].weight;
    return s;
}

double abs_weight_sum(const Contour& c, std::size_t piece) {
    double s = 0.0;
    const ContourPiece& p = c.pieces[piece];
    for (std::size_t i = p.first_atom; i < p.first_atom + p.atom_count; ++i) s += std::abs(c.atoms[i].weight);
    return s;
}

}  // namespace

TEST_CASE("multi-index helpers") {
    const MultiIndex l{1, -1, 1};
    CHECK(l.mirrored() == MultiIndex{-1, 1, -1});
    CHECK(MultiIndex::uniform(2, -1) == MultiIndex{-1, -1});
    const auto all = MultiIndex::all(2);
    REQUIRE(all.size() == 4);
    CHECK(all.front() == MultiIndex{-1, -1});
    CHECK(all.back() == MultiIndex{1, 1});
}

TEST_CASE("semicircle geometry") {
    const double R = 1.3;
    const SpectralModel m = friedrichs(R, 0.02);
    for (int sign : {1, -1}) {
        const Contour c = build_contour(m, CurveSpec{}, MultiIndex{sign});
        REQUIRE(c.pieces.size() == 1);
        const ContourPiece& p = c.pieces[0];
        CHECK(p.is_circle());
        CHECK(std::abs(p.arc_point(0.0) - Complex(0.0, 0.0)) < 1e-14);
        CHECK(std::abs(p.arc_point(kPi) - Complex(2.0 * R, 0.0)) < 1e-14);
        CHECK(std::abs(p.arc_point(0.5 * kPi) - Complex(R, sign * R)) < 1e-14);
        // integral of dmu along the curve is the interval length, of |dmu| the arc length
        CHECK(std::abs(weight_sum(c, 0) - 2.0 * R) < 1e-13);
        CHECK(abs_weight_sum(c, 0) == doctest::Approx(kPi * R).epsilon(1e-13));
        for (const Atom& a : c.atoms) CHECK(sign * a.mu.imag() >= 0.0);
        CHECK(p.encloses({R, 0.5 * sign * R}));
        CHECK_FALSE(p.encloses({R, -0.5 * sign * R}));
        CHECK(c.region({R, 0.5 * sign * R}) == 0);
        CHECK(c.region({3.0 * R, 0.1}) == -1);
    }
}

TEST_CASE("flat contour has real positive weights") {
    const SpectralModel m = friedrichs(1.0, 0.05);
    const Contour c = flat_contour(m);
    CHECK(c.is_flat());
    for (const Atom& a : c.atoms) {
        CHECK(a.mu.imag() == 0.0);
        CHECK(a.weight.imag() == 0.0);
        CHECK(a.weight.real() > 0.0);
        CHECK(a.mu.real() > 0.0);
        CHECK(a.mu.real() < 2.0);
    }
    CHECK(std::abs(weight_sum(c, 0) - 2.0) < 1e-13);
}

TEST_CASE("quadrature order doubling") {
    const SpectralModel m = polynomial4_model();
    const Contour c = build_contour(m, CurveSpec{}, MultiIndex{1});
    const Contour d = reorder_contour(m, c, c.order.doubled());
    CHECK(d.order == QuadratureOrder{16, 16});
    CHECK(d.atoms.size() == 2 * c.atoms.size());
    CHECK(std::abs(variation(m, c) - variation(m, d)) < 1e-12);
}

TEST_CASE("variation of constant coupling on a semicircle") {
    for (double R : {0.5, 1.0, 2.5}) {
        const double b2 = 0.04;
        const SpectralModel m = friedrichs(R, b2);
        const Contour c = build_contour(m, CurveSpec{}, MultiIndex{1});
        CHECK(variation(m, c) == doctest::Approx(kPi * b2 * R).epsilon(1e-12));
        CHECK(variation(m, mirror_contour(m, c)) == doctest::Approx(variation(m, c)).epsilon(1e-14));
    }
}

TEST_CASE("variation includes discrete weights") {
    SpectralModel m = friedrichs(1.0, 0.04);
    const double base = variation(m, build_contour(m, CurveSpec{}, MultiIndex{1}));
    m.discrete.push_back({-2.0, Matrix::Constant(1, 1, 0.3)});
    CHECK(variation(m, build_contour(m, CurveSpec{}, MultiIndex{1})) == doctest::Approx(base + 0.3).epsilon(1e-13));
}

TEST_CASE("separation distance") {
    SpectralModel m = friedrichs(1.0, 0.04);
    const Contour c = build_contour(m, CurveSpec{}, MultiIndex{1});
    CHECK(separation_distance(m, c) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(separation(m, c).slack == 0.0);
    CHECK(separation_distance(m, flat_contour(m)) == doctest::Approx(0.0).epsilon(1e-14));

    m.discrete.push_back({-0.4, Matrix::Constant(1, 1, 0.01)});
    CHECK(separation_distance(m, build_contour(m, CurveSpec{}, MultiIndex{1})) == doctest::Approx(1.0));
    m.discrete.back().nu = 2.6;
    m.a1(0, 0) = 2.1;
    // eigenvalue 2.1 is 0.1 from the arc endpoint and 0.5 from the discrete point
    CHECK(separation_distance(m, build_contour(m, CurveSpec{}, MultiIndex{1})) == doctest::Approx(0.1).epsilon(1e-12));
    m.discrete.back().nu = 2.15;
    CHECK(separation_distance(m, build_contour(m, CurveSpec{}, MultiIndex{1})) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("half-ellipse separation is a certified lower bound") {
    const SpectralModel m = friedrichs(1.0, 0.03);
    const Contour c = build_contour(m, CurveSpec{CurveShape::Semicircle, 0.6}, MultiIndex{1});
    const Separation s = separation(m, c);
    // the nearest point of the half-ellipse to its center is the top vertex
    CHECK(s.d0 <= 0.6);
    CHECK(s.d0 > 0.6 - 1e-3);
    CHECK(s.slack >= 0.0);
}

TEST_CASE("certificate for the reference model") {
    const SpectralModel m = friedrichs(1.0, reference_beta2());
    const SolvabilityCertificate cert = solvability_certificate(m, build_contour(m, CurveSpec{}, MultiIndex{1}));
    CHECK(cert.admissible);
    CHECK(cert.d0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cert.v0 == doctest::Approx(3.0 / 16.0).epsilon(1e-12));
    CHECK(cert.omega == doctest::Approx(0.25).epsilon(1e-12));
    REQUIRE(cert.r_min);
    REQUIRE(cert.r_max);
    CHECK(*cert.r_min == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(*cert.r_max == doctest::Approx(1.0 - std::sqrt(3.0 / 16.0)).epsilon(1e-12));
    CHECK(cert.contraction() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("certificate radii solve the ball equations") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ud(0.1, 5.0), uf(0.01, 0.999);
    for (int i = 0; i < 200; ++i) {
        const double d0 = ud(rng);
        const double v0 = uf(rng) * d0 * d0 / 4.0;
        const SolvabilityCertificate c = certificate_from(d0, v0);
        REQUIRE(c.admissible);
        const double r = *c.r_min, R = *c.r_max;
        CHECK(std::abs(r * (d0 - r) - v0) <= 1e-13 * d0 * d0);
        CHECK(std::abs((d0 - R) * (d0 - R) - v0) <= 1e-13 * d0 * d0);
        CHECK(r <= d0 / 2.0 + 1e-15);
        CHECK(r < R);
        CHECK(c.contraction() < 1.0);
    }
    CHECK_FALSE(certificate_from(1.0, 0.25).admissible);
    CHECK_FALSE(certificate_from(1.0, 0.3).r_min);
    CHECK_FALSE(certificate_from(0.0, 0.0).admissible);
}

TEST_CASE("admissibility threshold at beta^2 = 1/(4 pi)") {
    const double t = 1.0 / (4.0 * kPi);
    for (double R : {0.5, 1.0, 3.0}) {
        auto cert = [&](double b2) {
            const SpectralModel m = friedrichs(R, b2 * R);
            return solvability_certificate(m, build_contour(m, CurveSpec{}, MultiIndex{1}));
        };
        CHECK(cert(t * (1.0 - 1e-9)).admissible);
        CHECK_FALSE(cert(t * (1.0 + 1e-9)).admissible);
    }
}

TEST_CASE("zero coupling certificate") {
    SpectralModel m = friedrichs(1.0, 0.05);
    m.coupling = CouplingFunction::zero(1);
    const SolvabilityCertificate c = solvability_certificate(m, build_contour(m, CurveSpec{}, MultiIndex{1}));
    CHECK(c.admissible);
    CHECK(c.v0 == 0.0);
    CHECK(*c.r_min == 0.0);
    CHECK(*c.r_max == 1.0);
    CHECK(c.contraction() == 0.0);
}

TEST_CASE("rectangle contour") {
    const double b2 = 0.03, h = 0.7;
    const SpectralModel m = friedrichs(1.0, b2);
    const Contour c = build_contour(m, CurveSpec{CurveShape::Rectangle, h}, MultiIndex{-1});
    CHECK(c.pieces[0].segments.size() == 3);
    CHECK(std::abs(weight_sum(c, 0) - 2.0) < 1e-13);
    CHECK(abs_weight_sum(c, 0) == doctest::Approx(2.0 + 2.0 * h).epsilon(1e-13));
    CHECK(variation(m, c) == doctest::Approx(b2 * (2.0 + 2.0 * h)).epsilon(1e-12));
    CHECK(separation_distance(m, c) == doctest::Approx(h).epsilon(1e-12));
    for (const Atom& a : c.atoms) CHECK(a.mu.imag() <= 0.0);
    CHECK(c.region({1.0, -0.5 * h}) == 0);
    CHECK(c.region({1.0, 0.5 * h}) == -1);
}

TEST_CASE("unbounded interval with declared decay") {
    SpectralModel m;
    m.a1 = Matrix::Constant(1, 1, -1.0);
    m.intervals = {{0.0, kInf, 0.5}};
    // 0.05 / (1 + mu^2), poles at +-i
    m.coupling = CouplingFunction::rational({Matrix::Constant(1, 1, 0.05)}, {1.0, 0.0, 1.0}).with_decay(DecayBound{0.2, 2.0});
    REQUIRE(validate_model(m).ok());
    const Contour c = build_contour(m, CurveSpec{CurveShape::Rectangle, 0.25}, MultiIndex{1});
    CHECK(c.pieces[0].tail_bound > 0.0);
    CHECK(c.pieces[0].tail_bound < 1e-12);
    const double v = variation(m, c);
    CurveSpec far{CurveShape::Rectangle, 0.25};
    far.ray_extent = 1e5;
    const double v_far = variation(m, build_contour(m, far, MultiIndex{1}));
    const Contour far_c = build_contour(m, far, MultiIndex{1});
    CHECK(std::abs(v - v_far) <= far_c.pieces[0].tail_bound + 1e-12);
    // |K'| on the leg and ray is close to 0.05 / (1 + x^2) for small height; its integral is 0.05 pi / 2
    CHECK(v == doctest::Approx(0.05 * kPi / 2.0).epsilon(0.05));
    CHECK_THROWS_AS(build_contour(m, CurveSpec{}, MultiIndex{1}), UnsupportedModelError);

    SpectralModel nodecay = m;
    nodecay.coupling = CouplingFunction::rational({Matrix::Constant(1, 1, 0.05)}, {1.0, 0.0, 1.0});
    CHECK_THROWS_AS(build_contour(nodecay, CurveSpec{CurveShape::Rectangle, 0.25}, MultiIndex{1}), UnsupportedModelError);
}

TEST_CASE("geometry errors") {
    const SpectralModel narrow = friedrichs(1.0, 0.05, 0.5);
    try {
        build_contour(narrow, CurveSpec{}, MultiIndex{1});
        FAIL("expected a geometry error");
    } catch (const GeometryError& e) {
        CHECK(e.interval == 0);
    }
    CHECK_NOTHROW(build_contour(narrow, CurveSpec{CurveShape::Semicircle, 0.4}, MultiIndex{1}));
    const SpectralModel m = two_interval_model();
    CHECK_THROWS_AS(build_contour(m, CurveSpec{}, MultiIndex{1}), GeometryError);
    CHECK_THROWS_AS(build_contour(m, CurveSpec{}, MultiIndex{1, 2}), GeometryError);
    CHECK_THROWS_AS(build_contour(m, std::vector<CurveSpec>(3), MultiIndex{1, 1}), GeometryError);
    CHECK_THROWS_AS(build_contour(m, CurveSpec{CurveShape::Rectangle, -0.5}, MultiIndex{1, 1}), GeometryError);
}

TEST_CASE("scan over a family of contours") {
    const SpectralModel m = friedrichs(1.0, reference_beta2());
    const ScanResult s = scan_r0(m, MultiIndex{1}, ContourFamily::semicircles({0.25, 0.5, 1.0}, 1));
    REQUIRE(s.certificates.size() == 3);
    CHECK_FALSE(s.certificates[0].admissible);
    CHECK(s.certified);
    CHECK(s.r0_estimate == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.d_max_estimate == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(s.best_contour);
    CHECK(s.best_contour->pieces[0].is_circle());

    const SpectralModel strong = friedrichs(1.0, 0.1);
    CHECK_FALSE(scan_r0(strong, MultiIndex{1}, ContourFamily::semicircles({0.25, 0.5, 1.0}, 1)).certified);

    const SpectralModel weak = friedrichs(1.0, 0.01);
    const ScanResult w = scan_r0(weak, MultiIndex{1}, ContourFamily::semicircles({0.25, 0.5, 1.0}, 1));
    CHECK(w.certified);
    double best = kInf;
    for (const auto& c : w.certificates)
        if (c.admissible) best = std::min(best, *c.r_min);
    CHECK(w.r0_estimate == best);
}
