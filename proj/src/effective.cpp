#include "ghom/effective.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ghom/errors.hpp"
#include "ghom/geometry.hpp"
#include "ghom/metric.hpp"

namespace ghom {

std::pair<double, double> effective_bounds(const VectorFieldSpec& spec, const Vec& P,
                                           const TorusGrid& grid) {
    if (spec.dim() != grid.dim())
        throw ConfigError("effective bounds: field and grid dimensions differ");
    const int dim = grid.dim();
    const double pnorm = vec_norm(dim, P);
    double lo = kInf;
    double hi = -kInf;
    for (std::int64_t cell = 0; cell < grid.cells(); ++cell) {
        const double value = pnorm + vec_dot(dim, P, spec.eval(grid.center(cell)));
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    return {lo, hi};
}

namespace {

EdgeWeighting truncated_weighting(const Vec& P, int k, double level, int stencil_radius) {
    EdgeWeighting w;
    w.level = level;
    w.tilt = P;
    w.truncation = k;
    w.stencil_radius = stencil_radius;
    return w;
}

}  // namespace

KRouteResult effective_k_cycles(const VectorFieldSpec& spec, const Vec& P, int k,
                                const TorusGrid& grid, double tol, int stencil_radius,
                                Exec mode) {
    if (k < 1) throw ConfigError("truncation index must be at least 1");
    if (!(tol > 0.0)) throw ConfigError("bisection tolerance must be positive");

    const auto [lower, upper] = effective_bounds(spec, P, grid);
    KRouteResult result;
    double lo = std::max(lower, 0.0);
    double hi = std::max(upper, lo);

    // At the exact critical level the best cycle sums to zero, and quadrature
    // roundoff can tip the certificate a few ulps negative; such certificates
    // must not drive the bisection.  Genuine sub-critical cycles come in at
    // the tolerance scale, many orders above this floor.
    double tilt_max = 0.0;
    for (int a = 0; a < grid.dim(); ++a) tilt_max = std::max(tilt_max, std::abs(P[a]));
    const double noise_floor = 1e-9 * (1.0 + std::abs(upper) + tilt_max);

    const auto has_cycle = [&](double level) {
        ++result.iterations;
        const WeightTable table =
            build_weights(spec, grid, truncated_weighting(P, k, level, stencil_radius), mode);
        const auto cert = bellman_ford_negative_cycle(table, mode);
        return cert.has_value() && cert->total_weight < -noise_floor;
    };

    // The critical level is the infimum of levels with no negative cycle.
    if (!has_cycle(lo)) {
        result.value = lo;
        result.clipped_at_lower = true;
        return result;
    }
    if (has_cycle(hi)) {
        const double pushed = hi + (hi - lo) + 1.0;
        if (has_cycle(pushed))
            throw NumericalError("cycle bisection bracket failure: negative cycle above max H");
        hi = pushed;
        result.inflated_upper = true;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (has_cycle(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    result.value = 0.5 * (lo + hi);
    return result;
}

namespace {

// One Lax-Friedrichs march of w_t + H_k(x, P + Dw) = 0 on the given grid.
// Returns the cell-mean of -(w(T) - w(T/2)) / (T/2) and adds the step count
// to *steps.  Dissipation is per axis: alpha_a bounds |dH_k/dp_a| over the
// sampled field values, which keeps the scheme monotone without smearing the
// weak axes as much as a single global constant would.
double lax_friedrichs_rate(const VectorFieldSpec& spec, const Vec& P, int k,
                           const TorusGrid& grid, double T, double tol, double cfl, Exec mode,
                           std::int64_t* steps) {
    const int dim = grid.dim();
    const std::int64_t n = grid.cells();

    std::vector<Vec> vfield(static_cast<std::size_t>(n));
    par_for(mode, n, [&](std::int64_t cell) {
        vfield[static_cast<std::size_t>(cell)] = spec.eval(grid.center(cell));
    });

    Vec alpha{};
    for (int a = 0; a < dim; ++a) {
        double comp_max = 0.0;
        for (std::int64_t c = 0; c < n; ++c)
            comp_max = std::max(comp_max, std::abs(vfield[static_cast<std::size_t>(c)][a]));
        alpha[a] = 2.0 + comp_max;
    }
    double rate_sum = 0.0;
    for (int a = 0; a < dim; ++a) rate_sum += alpha[a] / grid.spacing(a);
    const double dt_limit = cfl / rate_sum;
    const auto half_steps = static_cast<std::int64_t>(std::ceil(0.5 * T / dt_limit));
    const double dt = 0.5 * T / static_cast<double>(half_steps);

    // neighbor tables: cells x dim, up and down along each axis
    std::vector<std::int64_t> up(static_cast<std::size_t>(n) * dim);
    std::vector<std::int64_t> dn(static_cast<std::size_t>(n) * dim);
    par_for(mode, n, [&](std::int64_t cell) {
        const IVec c = grid.coord(cell);
        for (int a = 0; a < dim; ++a) {
            IVec q = c;
            q[a] = c[a] + 1;
            up[static_cast<std::size_t>(cell) * dim + a] = grid.index_wrapped(q);
            q[a] = c[a] - 1;
            dn[static_cast<std::size_t>(cell) * dim + a] = grid.index_wrapped(q);
        }
    });

    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    std::vector<double> wnext(static_cast<std::size_t>(n));
    std::vector<double> whalf;

    for (std::int64_t step = 1; step <= 2 * half_steps; ++step) {
        par_for(mode, n, [&](std::int64_t cell) {
            Vec p = P;
            double visc = 0.0;
            const double wc = w[static_cast<std::size_t>(cell)];
            for (int a = 0; a < dim; ++a) {
                const double wp = w[static_cast<std::size_t>(
                    up[static_cast<std::size_t>(cell) * dim + a])];
                const double wm = w[static_cast<std::size_t>(
                    dn[static_cast<std::size_t>(cell) * dim + a])];
                const double h = grid.spacing(a);
                p[a] += (wp - wm) / (2.0 * h);
                visc += 0.5 * alpha[a] * (wp - 2.0 * wc + wm) / h;
            }
            const double hk = coercive_hamiltonian(dim, vfield[static_cast<std::size_t>(cell)],
                                                   p, k);
            wnext[static_cast<std::size_t>(cell)] = wc - dt * (hk - visc);
        });
        w.swap(wnext);
        if (step == half_steps) whalf = w;
    }
    *steps += 2 * half_steps;

    double mean = 0.0;
    double lo = kInf;
    double hi = -kInf;
    for (std::int64_t c = 0; c < n; ++c) {
        const double rate = -(w[static_cast<std::size_t>(c)] - whalf[static_cast<std::size_t>(c)]) /
                            (0.5 * T);
        mean += rate;
        lo = std::min(lo, rate);
        hi = std::max(hi, rate);
    }
    mean /= static_cast<double>(n);
    if (!std::isfinite(mean)) throw NumericalError("cell-problem march produced non-finite values");
    if (hi - lo > 10.0 * tol)
        throw NumericalError("cell-problem rate spread exceeds 10x tolerance: not converged");
    return mean;
}

}  // namespace

KRouteResult effective_k_pde(const VectorFieldSpec& spec, const Vec& P, int k,
                             const TorusGrid& grid, double T, double tol, double cfl, Exec mode) {
    if (k < 1) throw ConfigError("truncation index must be at least 1");
    if (!(T >= 10.0)) throw ConfigError("cell-problem horizon must be at least 10");
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
    if (spec.dim() != grid.dim())
        throw ConfigError("cell problem: field and grid dimensions differ");

    bool can_coarsen = true;
    std::vector<std::int64_t> half_res(static_cast<std::size_t>(grid.dim()));
    for (int a = 0; a < grid.dim(); ++a) {
        if (grid.res(a) % 2 != 0 || grid.res(a) < 8) can_coarsen = false;
        half_res[static_cast<std::size_t>(a)] = grid.res(a) / 2;
    }

    KRouteResult result;
    std::int64_t steps = 0;
    const double fine = lax_friedrichs_rate(spec, P, k, grid, T, tol, cfl, mode, &steps);
    if (can_coarsen) {
        const TorusGrid half(grid.dim(), half_res);
        const double coarse = lax_friedrichs_rate(spec, P, k, half, T, tol, cfl, mode, &steps);
        result.value = 2.0 * fine - coarse;
    } else {
        result.value = fine;
    }
    result.iterations = static_cast<int>(steps);
    return result;
}

EffectiveResult effective_hamiltonian(const VectorFieldSpec& spec, const Vec& P,
                                      const TorusGrid& grid, const EffectiveOptions& opts,
                                      Exec mode) {
    if (!(opts.tol > 0.0)) throw ConfigError("schedule tolerance must be positive");
    if (opts.k_max < 1) throw ConfigError("k_max must be at least 1");

    EffectiveResult result;
    result.P = P;
    const auto [lower, upper] = effective_bounds(spec, P, grid);
    result.lower = lower;
    result.upper = upper;
    const double bis_tol =
        opts.bisection_tol > 0.0 ? opts.bisection_tol : 1e-3 * (upper - lower + 1.0);

    double prev = kInf;
    int last_k = 1;
    for (int k = 1; k <= opts.k_max; k *= 2) {
        const KRouteResult r =
            effective_k_cycles(spec, P, k, grid, bis_tol, opts.stencil_radius, mode);
        result.sequence.push_back({k, r.value, "cycles", r.iterations});
        last_k = k;
        if (r.value > prev + 2.0 * bis_tol)
            throw NumericalError("truncated values increased along the k-schedule");
        if (prev < kInf && std::abs(r.value - prev) < opts.tol) {
            prev = r.value;
            result.stabilized = true;
            break;
        }
        prev = r.value;
    }
    result.limit = prev;

    if (opts.audit_pde) {
        const KRouteResult audit =
            effective_k_pde(spec, P, last_k, grid, opts.pde_T, opts.tol, opts.cfl, mode);
        result.sequence.push_back({last_k, audit.value, "pde", audit.iterations});
        result.route_gap = std::abs(prev - audit.value);
    }
    return result;
}

bool WulffSet::contains(const Vec& v, double tol) const {
    for (std::size_t j = 0; j < directions.size(); ++j) {
        if (vec_dot(dim, v, directions[j]) > values[j] + tol) return false;
    }
    return true;
}

WulffSet wulff_set(const VectorFieldSpec& spec, const TorusGrid& grid, int direction_count,
                   const EffectiveOptions& opts, Exec mode) {
    const int dim = spec.dim();
    WulffSet wulff;
    wulff.dim = dim;
    if (dim == 1) {
        for (const double s : {1.0, -1.0}) {
            Vec u{};
            u[0] = s;
            wulff.directions.push_back(u);
        }
    } else if (dim == 2) {
        if (direction_count < 8) throw ConfigError("Wulff sampling needs at least 8 directions");
        for (int j = 0; j < direction_count; ++j) {
            const double th = 2.0 * M_PI * j / direction_count;
            Vec u{};
            u[0] = std::cos(th);
            u[1] = std::sin(th);
            wulff.directions.push_back(u);
        }
    } else if (dim == 3) {
        if (direction_count < 32) throw ConfigError("Wulff sampling needs at least 32 directions");
        for (int j = 0; j < direction_count; ++j) {
            const double z = 1.0 - (2.0 * j + 1.0) / direction_count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = j * 2.399963229728653;
            Vec u{};
            u[0] = r * std::cos(phi);
            u[1] = r * std::sin(phi);
            u[2] = z;
            wulff.directions.push_back(u);
        }
    } else {
        throw ConfigError("Wulff sets implemented for dimensions 1-3");
    }

    wulff.values.resize(wulff.directions.size());
    for (std::size_t j = 0; j < wulff.directions.size(); ++j) {
        const EffectiveResult r =
            effective_hamiltonian(spec, wulff.directions[j], grid, opts, mode);
        if (r.limit < 0.0)
            throw NumericalError("effective value came out negative on a Wulff direction");
        wulff.values[j] = r.limit;
    }
    return wulff;
}

GridFunction corrector_field(const VectorFieldSpec& spec, const TorusGrid& grid, const Vec& P,
                             int k, double level, int stencil_radius, Exec mode) {
    if (k < 1) throw ConfigError("truncation index must be at least 1");
    if (level < 0.0) throw ConfigError("corrector level must be nonnegative");

    // Near-critical cycles mark the discrete Aubry region; anchor there when
    // one exists a hair below the level, otherwise any base cell does.
    const double eps = 1e-3 * (1.0 + std::abs(level));
    std::int64_t base = 0;
    if (level - eps >= 0.0) {
        const WeightTable probe = build_weights(
            spec, grid, truncated_weighting(P, k, level - eps, stencil_radius), mode);
        if (const auto cert = bellman_ford_negative_cycle(probe, mode)) base = cert->cells.front();
    }

    for (int attempt = 0; attempt < 2; ++attempt) {
        const double a = level + attempt * eps;
        const WeightTable table =
            build_weights(spec, grid, truncated_weighting(P, k, a, stencil_radius), mode);
        try {
            return bellman_ford_distances(table, base, mode);
        } catch (const NumericalError&) {
            if (attempt == 1) throw;
        }
    }
    throw NumericalError("corrector distances kept hitting negative cycles");
}

}  // namespace ghom
