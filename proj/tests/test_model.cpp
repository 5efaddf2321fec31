#include "resonance/model_io.hpp"
#include "resonance/quadrature.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace testsupport;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    for (int n : {1, 2, 5, 16, 40}) {
        const GaussRule g = gauss_legendre(n);
        REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
        CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("reference one-level model validates") {
    const ValidationReport rep = validate_model(friedrichs(1.0, reference_beta2()));
    CHECK(rep.ok());
}

TEST_CASE("zero coupling validates") {
    SpectralModel m;
    m.a1 = Matrix::Identity(2, 2);
    m.intervals = {{0.0, 2.0, 1.0}};
    m.coupling = CouplingFunction::zero(2);
    CHECK(validate_model(m).ok());
}

TEST_CASE("discrete point inside a continuum interval is reported") {
    SpectralModel m = friedrichs(1.0, 0.05);
    m.discrete.push_back({0.5, Matrix::Constant(1, 1, 0.1)});
    const ValidationReport rep = validate_model(m);
    CHECK_FALSE(rep.ok());
    CHECK(rep.mentions("discrete point inside continuum interval"));
}

TEST_CASE("each standing assumption has its own violation") {
    SpectralModel m = friedrichs(1.0, 0.05);
    SUBCASE("non-Hermitian A1") {
        m.a1 = Matrix::Identity(2, 2);
        m.a1(0, 1) = 1.0;
        m.coupling = CouplingFunction::zero(2);
        CHECK(validate_model(m).mentions("a1 Hermitian"));
    }
    SUBCASE("overlapping intervals") {
        m.intervals = {{0.0, 2.0, 0.5}, {1.0, 3.0, 0.5}};
        CHECK(validate_model(m).mentions("intervals sorted and disjoint"));
    }
    SUBCASE("indefinite discrete weight") {
        m.discrete.push_back({-3.0, Matrix::Constant(1, 1, -0.1)});
        CHECK(validate_model(m).mentions("discrete weight Hermitian PSD"));
    }
    SUBCASE("A1 eigenvalue on a discrete point") {
        m.discrete.push_back({1.0 + 0.0, Matrix::Constant(1, 1, 0.1)});
        m.intervals = {{2.0, 4.0, 1.0}};
        CHECK(validate_model(m).mentions("A1 spectrum disjoint from discrete remainder"));
    }
    SUBCASE("unbounded interval without decay") {
        m.intervals = {{0.0, kInf, 1.0}};
        CHECK(validate_model(m).mentions("decay declared for unbounded interval"));
    }
    SUBCASE("indefinite density") {
        m.coupling = CouplingFunction::polynomial({Matrix::Constant(1, 1, -0.1)});
        CHECK(validate_model(m).mentions("K' Hermitian PSD on intervals"));
    }
    SUBCASE("pole inside a strip") {
        // 1 / (mu^2 - 2 mu + 1.01): poles at 1 +- 0.1 i
        m.coupling = CouplingFunction::rational({Matrix::Constant(1, 1, 0.1)}, {1.01, -2.0, 1.0});
        CHECK(validate_model(m).mentions("coupling poles outside holomorphy strips"));
    }
    SUBCASE("conjugate symmetry broken") {
        m.coupling = CouplingFunction::plugin(1, [](Complex mu) { return Matrix::Constant(1, 1, 0.1 + 0.05 * kI * mu.imag() + 0.01 * kI); });
        CHECK(validate_model(m).mentions("K' conjugate symmetry"));
    }
    SUBCASE("non-Hoelder endpoint behaviour") {
        m.coupling = CouplingFunction::plugin(1, [](Complex mu) {
            const double x = std::min(mu.real(), 2.0 - mu.real());
            return Matrix::Constant(1, 1, x > 0 ? 0.1 * std::pow(1.0 - std::log(x), -0.2) : 0.0);
        });
        CHECK(validate_model(m).mentions("Hoelder condition at endpoints"));
    }
}

TEST_CASE("validation is deterministic") {
    SpectralModel m = polynomial4_model();
    m.discrete.push_back({1.0, Matrix::Identity(4, 4)});
    const ValidationReport a = validate_model(m), b = validate_model(m);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        CHECK(a.violations[i].assumption == b.violations[i].assumption);
        CHECK(a.violations[i].detail == b.violations[i].detail);
    }
}

TEST_CASE("structural errors are distinct from violations") {
    SpectralModel m = friedrichs(1.0, 0.05);
    m.a1 = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(validate_model(m), ModelError);
    m = friedrichs(1.0, 0.05);
    m.a1(0, 0) = std::nan("");
    CHECK_THROWS_AS(check_structure(m), ModelError);
    m = friedrichs(1.0, 0.05);
    m.intervals.clear();
    CHECK_THROWS_AS(check_structure(m), ModelError);
}

TEST_CASE("kprime_eval") {
    const double b2 = 0.07;
    const SpectralModel m = friedrichs(1.0, b2);
    for (Complex mu : {Complex(0.3, 0.0), Complex(1.0, 0.7), Complex(1.9, -1.2)})
        CHECK(std::abs(kprime_eval(m, mu)(0, 0) - b2) < 1e-15);

    SpectralModel z = m;
    z.coupling = CouplingFunction::zero(1);
    CHECK(kprime_eval(z, {1.0, 0.5}).norm() == 0.0);

    try {
        kprime_eval(m, {1.0, 5.0});
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.nearest_interval == 0);
        CHECK(e.distance == doctest::Approx(3.5));
    }
}

TEST_CASE("built-in couplings: conjugate symmetry and positivity") {
    std::mt19937_64 rng(42);
    std::vector<SpectralModel> models = {friedrichs(1.0, 0.05), polynomial4_model(), two_interval_model(), gram3_model()};
    SpectralModel rational = polynomial4_model();
    rational.coupling = CouplingFunction::rational(rational.coupling.coefficients(), {4.0, 0.0, 1.0});
    models.push_back(rational);
    for (const auto& m : models) {
        REQUIRE(validate_model(m).ok());
        for (const auto& iv : m.intervals) {
            std::uniform_real_distribution<double> re(iv.lo, iv.hi), im(-0.99 * iv.strip, 0.99 * iv.strip);
            for (int i = 0; i < 100; ++i) {
                const Complex mu(re(rng), im(rng));
                const Matrix k = kprime_eval(m, mu);
                const Matrix kc = kprime_eval(m, std::conj(mu));
                CHECK(spectral_norm(kc - k.adjoint()) <= 1e-12 * (1.0 + spectral_norm(k)));

                const Matrix kr = kprime_eval(m, re(rng));
                Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (kr + kr.adjoint()));
                CHECK(es.eigenvalues().minCoeff() >= -1e-12 * spectral_norm(kr));
            }
        }
    }
}

TEST_CASE("JSON round trip is bit exact") {
    for (const SpectralModel& m : {friedrichs(1.0, reference_beta2()), polynomial4_model(), two_interval_model()}) {
        SpectralModel withd = m;
        withd.discrete.push_back({-7.25, Matrix::Identity(m.dimension(), m.dimension()) * 0.1});
        const Json j = model_to_json(withd);
        const SpectralModel back = model_from_json(Json::parse(j.dump()));
        CHECK((back.a1.array() == withd.a1.array()).all());
        REQUIRE(back.intervals.size() == withd.intervals.size());
        for (std::size_t i = 0; i < back.intervals.size(); ++i) {
            CHECK(back.intervals[i].lo == withd.intervals[i].lo);
            CHECK(back.intervals[i].hi == withd.intervals[i].hi);
            CHECK(back.intervals[i].strip == withd.intervals[i].strip);
        }
        CHECK(back.discrete[0].nu == withd.discrete[0].nu);
        CHECK((back.discrete[0].k.array() == withd.discrete[0].k.array()).all());
        CHECK(back.coupling.kind() == withd.coupling.kind());
        for (Complex mu : {Complex(0.5, 0.1), Complex(1.5, -0.3)})
            CHECK((back.coupling(mu).array() == withd.coupling(mu).array()).all());
        CHECK(model_to_json(back).dump() == j.dump());
    }
}

TEST_CASE("JSON schema: decimals, infinities, coupling kinds") {
    const Json j = Json::parse(R"({
        "a1": [[0.5, [0.25, -0.125]], [[0.25, 0.125], 2.0]],
        "intervals": [{"lo": "−inf", "hi": -1.0, "strip": 0.5}, {"lo": 1.0, "hi": "+inf", "strip": 0.5}],
        "discrete": [{"nu": 0.0, "k": [[0.1, 0], [0, 0.2]]}],
        "coupling": {"kind": "rational-matrix", "numerator": [[[1, 0], [0, 1]]], "denominator": [1.0, 0.0, 1.0],
                     "decay": {"c": 1.0, "theta": 2.0}}
    })");
    const SpectralModel m = model_from_json(j);
    CHECK(m.intervals[0].lo == -kInf);
    CHECK(m.intervals[1].hi == kInf);
    CHECK(m.a1(0, 1) == Complex(0.25, -0.125));
    CHECK(m.coupling.kind() == CouplingKind::RationalMatrix);
    REQUIRE(m.coupling.decay());
    CHECK(m.coupling.decay()->theta == 2.0);
    const Json again = model_to_json(m);
    CHECK(again["intervals"][0]["lo"] == "-inf");
    CHECK(model_from_json(again).intervals[1].hi == kInf);
}

TEST_CASE("JSON schema errors") {
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"intervals": []})")), ModelError);
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"a1": [[1]], "intervals": [{"lo": 0, "hi": 1, "strip": 1}],
        "coupling": {"kind": "nope"}})")),
                    ModelError);
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"a1": [[1, 2]], "intervals": [{"lo": 0, "hi": 1, "strip": 1}],
        "coupling": {"kind": "zero"}})")),
                    ModelError);
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"a1": [[1]], "intervals": [{"lo": "minus", "hi": 1, "strip": 1}],
        "coupling": {"kind": "zero"}})")),
                    ModelError);
    SpectralModel p = friedrichs(1.0, 0.05);
    p.coupling = CouplingFunction::plugin(1, [](Complex) { return Matrix::Constant(1, 1, 0.05); });
    CHECK_THROWS_AS(model_to_json(p), ModelError);
}
