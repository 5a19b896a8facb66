#include "ghom/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ghom/errors.hpp"

namespace ghom {

namespace {

constexpr double kGoldenInv = 0.6180339887498949;  // 1/phi

void check_k(int k) {
    if (k < 1) throw ConfigError("truncation level k must be a positive integer");
}

}  // namespace

// ----- Hamiltonian -----

double hamiltonian(int dim, const Vec& v, const Vec& p) {
    return vec_norm(dim, p) + vec_dot(dim, p, v);
}

double hamiltonian(const VectorFieldSpec& spec, const Vec& x, const Vec& p) {
    return hamiltonian(spec.dim(), spec.eval(x), p);
}

double coercive_hamiltonian(int dim, const Vec& v, const Vec& p, int k) {
    check_k(k);
    const double kk = static_cast<double>(k);
    const double h = hamiltonian(dim, v, p);
    return std::max(h, -kk) + std::max(vec_norm(dim, p) - kk, 0.0);
}

double coercive_hamiltonian(const VectorFieldSpec& spec, const Vec& x, const Vec& p, int k) {
    return coercive_hamiltonian(spec.dim(), spec.eval(x), p, k);
}

// ----- Gauge / support function -----

// Feasibility of |q - sv| <= s*delta is the quadratic A s^2 - 2 B s + C <= 0
// with A = |v|^2 - delta^2, B = q.v, C = |q|^2.  The feasible set is an
// interval whose left endpoint is the gauge; computed in the B + sqrt(D)
// form, which has no cancellation.
double gauge_radius(int dim, const Vec& v, double delta, const Vec& q) {
    if (!(delta > 0.0)) throw ConfigError("control-set radius must be positive");
    const double a = vec_dot(dim, v, v) - delta * delta;
    const double b = vec_dot(dim, q, v);
    const double c = vec_dot(dim, q, q);
    if (c == 0.0) return 0.0;
    if (a == 0.0) {
        // |v| = delta exactly: the quadratic degenerates to a line.
        return b > 0.0 ? c / (2.0 * b) : kInf;
    }
    const double disc = b * b - a * c;
    if (a < 0.0) {
        // disc = b^2 + |a| c > 0; single sign change, feasible ray to +inf.
        return c / (b + std::sqrt(disc));
    }
    if (b <= 0.0 || disc < 0.0) return kInf;
    return c / (b + std::sqrt(disc));
}

SupportValue support_sigma(int dim, const Vec& v, const Vec& q) {
    SupportValue out;
    out.value = gauge_radius(dim, v, 1.0, q);
    if (out.value > 0.0 && out.value < kInf) {
        // At the left endpoint the constraint is tight: |q - sv| = s, so the
        // maximizer of p.q over Z is a positive multiple of q - sv.
        Vec e{};
        for (int i = 0; i < dim; ++i) e[i] = q[i] - out.value * v[i];
        const double len = vec_norm(dim, e);
        if (len > 0.0) {
            for (int i = 0; i < dim; ++i) e[i] /= len;
            out.direction = e;
            out.has_direction = true;
        }
    }
    return out;
}

SupportValue support_sigma(const VectorFieldSpec& spec, const Vec& x, const Vec& q) {
    return support_sigma(spec.dim(), spec.eval(x), q);
}

bool gauge_membership(const ControlSetQuery& query, const Vec& q, double tol) {
    if (!(query.radius > 0.0) || query.radius > 1.0)
        throw ConfigError("control-set radius must lie in (0, 1]");
    if (tol < 0.0) throw ConfigError("gauge membership tolerance must be nonnegative");
    return gauge_radius(query.dim, query.center, query.radius, q) <= 1.0 + tol;
}

bool recession_cone_contains(int dim, const Vec& v, const Vec& p) {
    return hamiltonian(dim, v, p) <= 0.0;
}

bool recession_cone_contains(const VectorFieldSpec& spec, const Vec& x, const Vec& p) {
    return recession_cone_contains(spec.dim(), spec.eval(x), p);
}

// ----- Truncated support function -----

// Along p = r u (|u| = 1, r >= 0) with c = 1 + u.V:
//   H_k(r u) = max{r c, -k} + max{r - k, 0}
// which is continuous, piecewise linear, and eventually increasing with
// slope >= 1, so {r : H_k(r u) <= a} = [0, r*] for every a >= 0.
double truncated_ray_radius(double c, int k, double a) {
    const double kk = static_cast<double>(k);
    if (c > 0.0) return a <= kk * c ? a / c : (a + kk) / (c + 1.0);
    if (c == 0.0) return a + kk;
    if (c <= -1.0) return a + 2.0 * kk;
    // -1 < c < 0: the clamp max{rc, -k} engages at r = k/(-c), where the
    // level reaches k/(-c) - 2k; above that the slope-1 tail r - 2k rules.
    const double level_at_clamp = kk / (-c) - 2.0 * kk;
    return a >= level_at_clamp ? a + 2.0 * kk : (a + kk) / (c + 1.0);
}

namespace {

// Value of the ray bound in direction u against query q (clamped at 0:
// directions with u.q <= 0 cannot carry the maximum since r* >= 0).
double ray_value(int dim, const Vec& v, int k, double a, const Vec& q, const Vec& u) {
    const double uq = vec_dot(dim, u, q);
    if (uq <= 0.0) return 0.0;
    return truncated_ray_radius(1.0 + vec_dot(dim, u, v), k, a) * uq;
}

Vec unit2(double theta) {
    Vec u{};
    u[0] = std::cos(theta);
    u[1] = std::sin(theta);
    return u;
}

Vec unit3(double theta, double phi) {
    Vec u{};
    const double s = std::sin(theta);
    u[0] = s * std::cos(phi);
    u[1] = s * std::sin(phi);
    u[2] = std::cos(theta);
    return u;
}

// Golden-section maximization of f over [lo, hi]; f is continuous and the
// bracket is one coarse-sample spacing wide, so unimodality holds in practice.
template <typename F>
double golden_argmax(F&& f, double lo, double hi, int iters) {
    double x1 = hi - kGoldenInv * (hi - lo);
    double x2 = lo + kGoldenInv * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGoldenInv * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGoldenInv * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

template <typename F>
double golden_max(F&& f, double lo, double hi, int iters) {
    return f(golden_argmax(f, lo, hi, iters));
}

double truncated_support_1d(const Vec& v, int k, double a, const Vec& q) {
    Vec up{};
    up[0] = 1.0;
    Vec un{};
    un[0] = -1.0;
    return std::max(ray_value(1, v, k, a, q, up), ray_value(1, v, k, a, q, un));
}

constexpr int kFan2 = 256;
constexpr double kFanStep2 = 2.0 * M_PI / kFan2;

const std::array<Vec, kFan2>& fan_table_2d() {
    static const std::array<Vec, kFan2> table = [] {
        std::array<Vec, kFan2> t{};
        for (int j = 0; j < kFan2; ++j) t[j] = unit2(j * kFanStep2);
        return t;
    }();
    return table;
}

double truncated_support_2d(const Vec& v, int k, double a, const Vec& q) {
    const auto& fan = fan_table_2d();
    double best = 0.0;
    int best_j = 0;
    for (int j = 0; j < kFan2; ++j) {
        const double val = ray_value(2, v, k, a, q, fan[j]);
        if (val > best) {
            best = val;
            best_j = j;
        }
    }
    if (best == 0.0) return 0.0;
    const double theta0 = best_j * kFanStep2;
    const double refined = golden_max(
        [&](double theta) { return ray_value(2, v, k, a, q, unit2(theta)); },
        theta0 - kFanStep2, theta0 + kFanStep2, 40);
    return std::max(best, refined);
}

constexpr int kFan3 = 1024;
constexpr double kGoldenAngle = 2.399963229728653;  // pi (3 - sqrt 5)

struct SphereSample {
    Vec u;
    double theta;
    double phi;
};

const std::array<SphereSample, kFan3>& fan_table_3d() {
    static const std::array<SphereSample, kFan3> table = [] {
        std::array<SphereSample, kFan3> t{};
        for (int i = 0; i < kFan3; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / kFan3;
            t[i].theta = std::acos(std::clamp(z, -1.0, 1.0));
            t[i].phi = i * kGoldenAngle;
            t[i].u = unit3(t[i].theta, t[i].phi);
        }
        return t;
    }();
    return table;
}

double truncated_support_3d(const Vec& v, int k, double a, const Vec& q) {
    const auto& fan = fan_table_3d();
    double best = 0.0;
    double best_theta = 0.0;
    double best_phi = 0.0;
    for (int i = 0; i < kFan3; ++i) {
        const double val = ray_value(3, v, k, a, q, fan[i].u);
        if (val > best) {
            best = val;
            best_theta = fan[i].theta;
            best_phi = fan[i].phi;
        }
    }
    if (best == 0.0) return 0.0;
    // Alternate golden-section passes in the two spherical angles, shrinking
    // the bracket from the Fibonacci-lattice spacing.
    double window = 0.12;
    for (int round = 0; round < 3; ++round) {
        const double lo_t = std::max(best_theta - window, 0.0);
        const double hi_t = std::min(best_theta + window, M_PI);
        best_theta = golden_argmax(
            [&](double t) { return ray_value(3, v, k, a, q, unit3(t, best_phi)); }, lo_t, hi_t,
            32);
        best_phi = golden_argmax(
            [&](double p) { return ray_value(3, v, k, a, q, unit3(best_theta, p)); },
            best_phi - window, best_phi + window, 32);
        window *= 0.25;
    }
    return std::max(best, ray_value(3, v, k, a, q, unit3(best_theta, best_phi)));
}

}  // namespace

double support_sigma_truncated(int dim, const Vec& v, int k, double a, const Vec& q) {
    check_k(k);
    if (a < 0.0) throw ConfigError("truncated support level a must be nonnegative");
    if (vec_dot(dim, q, q) == 0.0) return 0.0;
    switch (dim) {
        case 1:
            return truncated_support_1d(v, k, a, q);
        case 2:
            return truncated_support_2d(v, k, a, q);
        case 3:
            return truncated_support_3d(v, k, a, q);
        default:
            throw ConfigError("truncated support sampling implemented for dimensions 1-3");
    }
}

double support_sigma_truncated(const VectorFieldSpec& spec, const Vec& x, int k, double a,
                               const Vec& q) {
    return support_sigma_truncated(spec.dim(), spec.eval(x), k, a, q);
}

}  // namespace ghom
