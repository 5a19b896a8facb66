#include <doctest.h>

#include <cmath>
#include <random>

#include "ghom/errors.hpp"
#include "ghom/field.hpp"
#include "ghom/grid.hpp"

using namespace ghom;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec random_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Vec x{};
    for (int a = 0; a < kMaxDim; ++a) x[a] = dist(rng);
    return x;
}

// Central differences against the analytic Jacobian and divergence.
void check_derivatives(const VectorFieldSpec& spec, std::mt19937& rng, double tol) {
    const int n = spec.dim();
    const double step = 1e-4;
    for (int trial = 0; trial < 25; ++trial) {
        const Vec x = random_point(rng);
        double jac[kMaxDim][kMaxDim];
        spec.jacobian(x, jac);
        double div = 0.0;
        for (int j = 0; j < n; ++j) {
            Vec xp = x;
            Vec xm = x;
            xp[j] += step;
            xm[j] -= step;
            const Vec vp = spec.eval(xp);
            const Vec vm = spec.eval(xm);
            for (int i = 0; i < n; ++i) {
                const double fd = (vp[i] - vm[i]) / (2.0 * step);
                CHECK(std::abs(jac[i][j] - fd) <= tol);
            }
            div += (vp[j] - vm[j]) / (2.0 * step);
        }
        CHECK(std::abs(spec.divergence(x) - div) <= tol);
    }
}

}  // namespace

TEST_CASE("constant field") {
    Vec c{};
    c[0] = 0.3;
    c[1] = 0.4;
    const VectorFieldSpec spec = VectorFieldSpec::constant(2, c);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec x = random_point(rng);
        const Vec v = spec.eval(x);
        CHECK(v[0] == 0.3);
        CHECK(v[1] == 0.4);
        CHECK(spec.divergence(x) == 0.0);
    }

    TorusGrid grid(2, {32, 32});
    const AssumptionReport report = check_assumptions(spec, default_chi(2), grid);
    CHECK(report.divergence_norm == 0.0);
    CHECK(report.lipschitz_bound == 0.0);
    CHECK(report.sup_norm == doctest::Approx(0.525));  // |c| = 1/2 with 5% headroom
    CHECK(report.passes_A2);
    CHECK(report.coercive_everywhere);
}

TEST_CASE("shear profile rides the transverse axis") {
    const VectorFieldSpec spec = VectorFieldSpec::shear_sin(2, 0, 2.0);
    Vec x{};
    x[0] = 0.77;
    x[1] = 0.25;
    const Vec v = spec.eval(x);
    CHECK(v[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v[1] == 0.0);

    std::mt19937 rng(11);
    check_derivatives(spec, rng, 1e-5);

    TorusGrid grid(2, {64, 64});
    CHECK(divergence_norm(spec, grid) == 0.0);
    const AssumptionReport report = check_assumptions(spec, default_chi(2), grid);
    CHECK(report.passes_A2);
    CHECK_FALSE(report.coercive_everywhere);
    CHECK(report.sup_norm > 2.0);
    CHECK(report.sup_norm < 2.15);
    CHECK(report.lipschitz_bound > 12.9);  // 4 pi with 5% headroom, grid-sampled
    CHECK(report.lipschitz_bound < 13.3);
}

TEST_CASE("cellular field is divergence free") {
    const VectorFieldSpec spec = VectorFieldSpec::cellular(2.0);
    std::mt19937 rng(13);
    check_derivatives(spec, rng, 1e-5);
    TorusGrid grid(2, {48, 48});
    CHECK(divergence_norm(spec, grid) == 0.0);

    Vec x{};
    x[0] = 0.25;
    x[1] = 0.0;
    const Vec v = spec.eval(x);  // (A sin cos, -A cos sin) pattern
    CHECK(v[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(0.0));
}

TEST_CASE("sink divergence and its L^N norm") {
    Vec center{};
    center[0] = 0.5;
    center[1] = 0.5;
    const VectorFieldSpec spec = VectorFieldSpec::sink(2, 2.0, center);
    std::mt19937 rng(17);
    check_derivatives(spec, rng, 1e-4);

    CHECK(spec.divergence(center) == doctest::Approx(-8.0 * kPi).epsilon(1e-12));

    TorusGrid grid(2, {64, 64});
    CHECK(divergence_norm(spec, grid) == doctest::Approx(4.0 * kPi).epsilon(1e-9));

    // A = 2 pushes ||div V||_{L^2} = 4 pi past the default threshold 2 sqrt 2.
    const AssumptionReport report = check_assumptions(spec, default_chi(2), grid);
    CHECK_FALSE(report.passes_A2);
    CHECK(report.threshold == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("trig polynomial: single compressive mode") {
    std::vector<TrigTerm> terms(1);
    terms[0].comp = 0;
    terms[0].is_sin = true;
    terms[0].k = IVec{1, 0, 0, 0};
    terms[0].coef = 1.0;
    const VectorFieldSpec spec = VectorFieldSpec::trig_poly(2, terms);
    std::mt19937 rng(19);
    check_derivatives(spec, rng, 1e-5);

    TorusGrid grid(2, {64, 64});
    CHECK(divergence_norm(spec, grid) == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("default chi follows the slab bound") {
    CHECK(default_chi(2) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
    CHECK(default_chi(3) == doctest::Approx(std::pow(2.0, 1.0 / 3.0 - 2.0)).epsilon(1e-15));
}

TEST_CASE("field validation") {
    CHECK_THROWS_AS(VectorFieldSpec::shear_sin(2, 2, 1.0), ConfigError);
    CHECK_THROWS_AS(VectorFieldSpec::shear(2, 0, 1.0, {}), ConfigError);

    std::vector<TrigTerm> bad(1);
    bad[0].comp = 3;
    CHECK_THROWS_AS(VectorFieldSpec::trig_poly(2, bad), ConfigError);

    const VectorFieldSpec spec = VectorFieldSpec::shear_sin(2, 0, 1.0);
    TorusGrid grid3(3, {8, 8, 8});
    CHECK_THROWS_AS(divergence_norm(spec, grid3), ConfigError);
    CHECK_THROWS_AS(check_assumptions(spec, 0.0, TorusGrid(2, {8, 8})), ConfigError);
}
