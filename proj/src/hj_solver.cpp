#include "ghom/hj_solver.hpp"

#include <algorithm>
#include <cmath>

#include "ghom/errors.hpp"

namespace ghom {

// ----- Initial data -----

InitialData InitialData::cone(int dim, const Vec& center) {
    InitialData d;
    d.kind = Kind::Cone;
    d.dim = dim;
    d.centers.push_back(center);
    return d;
}

InitialData InitialData::smooth(int dim) {
    InitialData d;
    d.kind = Kind::Smooth;
    d.dim = dim;
    return d;
}

InitialData InitialData::plateau(int dim, const std::vector<Vec>& centers, double cap) {
    if (centers.empty()) throw ConfigError("plateau data needs at least one cone center");
    if (!(cap > 0.0)) throw ConfigError("plateau height must be positive");
    InitialData d;
    d.kind = Kind::Plateau;
    d.dim = dim;
    d.centers = centers;
    d.cap = cap;
    return d;
}

namespace {

double periodic_distance(int dim, const Vec& x, const Vec& c, double period) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
        double d = std::fabs(std::fmod(x[a] - c[a], period));
        d = std::min(d, period - d);
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

double InitialData::eval(const Vec& x, double period) const {
    if (!(period > 0.0)) throw ConfigError("initial data period must be positive");
    double value = 0.0;
    switch (kind) {
        case Kind::Smooth: {
            double s = 0.0;
            for (int a = 0; a < dim; ++a)
                s += 0.5 * (1.0 - std::cos(2.0 * M_PI * x[a] / period));
            value = s / dim;
            break;
        }
        case Kind::Cone:
        case Kind::Plateau: {
            double best = cap;
            for (const Vec& c : centers)
                best = std::min(best, periodic_distance(dim, x, c, period));
            value = best;
            break;
        }
    }
    return value + offset;
}

// ----- Oscillatory marcher -----

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct Marcher {
    int dim = 0;
    std::int64_t n = 0;
    double h = 0.0;
    std::vector<std::int64_t> up;
    std::vector<std::int64_t> dn;
    std::vector<Vec> vfield;

    // One explicit update of u_t + |Du| + Du.V = 0 at a single cell.
    double update(const std::vector<double>& u, std::int64_t cell, double dt) const {
        const double uc = u[static_cast<std::size_t>(cell)];
        const Vec& v = vfield[static_cast<std::size_t>(cell)];
        double grad2 = 0.0;
        double drift = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double wp = u[static_cast<std::size_t>(up[static_cast<std::size_t>(cell) * dim + a])];
            const double wm = u[static_cast<std::size_t>(dn[static_cast<std::size_t>(cell) * dim + a])];
            const double fwd = (wp - uc) / h;
            const double bwd = (uc - wm) / h;
            const double gp = std::max(bwd, 0.0);
            const double gm = std::min(fwd, 0.0);
            grad2 += gp * gp + gm * gm;
            drift += v[a] > 0.0 ? v[a] * bwd : v[a] * fwd;
        }
        return uc - dt * (std::sqrt(grad2) + drift);
    }
};

// Raising one input never lowers any output; spot-checked by bumping random
// cells and re-evaluating the update on the affected stencil.
void audit_monotonicity(const Marcher& m, std::vector<double>& u, double dt, int count,
                        std::uint64_t seed) {
    std::uint64_t state = seed;
    for (int trial = 0; trial < count; ++trial) {
        const auto cell = static_cast<std::int64_t>(splitmix64(state) % static_cast<std::uint64_t>(m.n));
        const double delta =
            m.h * (0.5 + static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53);

        std::vector<std::int64_t> affected;
        affected.push_back(cell);
        for (int a = 0; a < m.dim; ++a) {
            affected.push_back(m.up[static_cast<std::size_t>(cell) * m.dim + a]);
            affected.push_back(m.dn[static_cast<std::size_t>(cell) * m.dim + a]);
        }
        std::vector<double> base;
        base.reserve(affected.size());
        for (const std::int64_t i : affected) base.push_back(m.update(u, i, dt));

        u[static_cast<std::size_t>(cell)] += delta;
        for (std::size_t j = 0; j < affected.size(); ++j) {
            const double bumped = m.update(u, affected[j], dt);
            if (bumped < base[j] - 1e-12 * (1.0 + std::fabs(base[j]))) {
                u[static_cast<std::size_t>(cell)] -= delta;
                throw NumericalError("monotonicity audit failed: update decreased under a raised input");
            }
        }
        u[static_cast<std::size_t>(cell)] -= delta;
    }
}

}  // namespace

OscillatorySolution solve_oscillatory(const VectorFieldSpec& spec, const InitialData& u0,
                                      const SolverConfig& config,
                                      const std::vector<double>& times, Exec mode) {
    const int dim = spec.dim();
    if (dim != u0.dim) throw ConfigError("initial data and field dimensions differ");
    if (!(config.epsilon > 0.0 && config.epsilon <= 1.0))
        throw ConfigError("epsilon must lie in (0, 1]");
    if (!(config.cfl > 0.0 && config.cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
    if (config.resolution < 8) throw ConfigError("resolution must be at least 8 cells per unit");
    if (config.epsilon * static_cast<double>(config.resolution) < 8.0 - 1e-9)
        throw ConfigError("fast period underresolved: epsilon * resolution must be >= 8");
    if (config.domain_size < 1) throw ConfigError("domain size must be a positive integer");
    if (config.audit_cells < 0) throw ConfigError("audit cell count must be nonnegative");
    if (times.empty()) throw ConfigError("no snapshot times requested");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || times[i] > config.T + 1e-12)
            throw ConfigError("snapshot times must lie in [0, T]");
        if (i > 0 && times[i] < times[i - 1])
            throw ConfigError("snapshot times must be nondecreasing");
    }

    const double period = static_cast<double>(config.domain_size);
    std::vector<std::int64_t> res(static_cast<std::size_t>(dim),
                                  config.domain_size * config.resolution);
    const TorusGrid grid(dim, res);

    Marcher m;
    m.dim = dim;
    m.n = grid.cells();
    m.h = 1.0 / static_cast<double>(config.resolution);
    m.up.resize(static_cast<std::size_t>(m.n) * dim);
    m.dn.resize(static_cast<std::size_t>(m.n) * dim);
    m.vfield.resize(static_cast<std::size_t>(m.n));
    par_for(mode, m.n, [&](std::int64_t cell) {
        const IVec c = grid.coord(cell);
        for (int a = 0; a < dim; ++a) {
            IVec q = c;
            q[a] = c[a] + 1;
            m.up[static_cast<std::size_t>(cell) * dim + a] = grid.index_wrapped(q);
            q[a] = c[a] - 1;
            m.dn[static_cast<std::size_t>(cell) * dim + a] = grid.index_wrapped(q);
        }
        Vec x = grid.center(cell);
        for (int a = 0; a < dim; ++a) x[a] *= period / config.epsilon;
        m.vfield[static_cast<std::size_t>(cell)] = spec.eval(x);
    });

    double sup_v = 0.0;
    for (std::int64_t c = 0; c < m.n; ++c)
        sup_v = std::max(sup_v, vec_norm(dim, m.vfield[static_cast<std::size_t>(c)]));
    const double dt_limit = config.cfl * m.h / (dim * (1.0 + sup_v));

    std::vector<double> u(static_cast<std::size_t>(m.n));
    par_for(mode, m.n, [&](std::int64_t cell) {
        Vec x = grid.center(cell);
        for (int a = 0; a < dim; ++a) x[a] *= period;
        u[static_cast<std::size_t>(cell)] = u0.eval(x, period);
    });

    OscillatorySolution out;
    out.dim = dim;
    out.side = grid.res(0);
    out.h = m.h;

    std::vector<double> unext(static_cast<std::size_t>(m.n));
    double t_cur = 0.0;
    bool audited = false;
    for (const double target : times) {
        if (target > t_cur + 1e-15) {
            const auto segments =
                static_cast<std::int64_t>(std::ceil((target - t_cur) / dt_limit - 1e-12));
            const double dt = (target - t_cur) / static_cast<double>(segments);
            if (!audited && config.audit_cells > 0) {
                audit_monotonicity(m, u, dt, config.audit_cells, config.audit_seed);
                audited = true;
            }
            for (std::int64_t s = 0; s < segments; ++s) {
                par_for(mode, m.n, [&](std::int64_t cell) {
                    unext[static_cast<std::size_t>(cell)] = m.update(u, cell, dt);
                });
                u.swap(unext);
            }
            out.steps += segments;
            t_cur = target;
            for (std::int64_t c = 0; c < m.n; ++c) {
                if (!std::isfinite(u[static_cast<std::size_t>(c)]))
                    throw NumericalError("oscillatory march produced non-finite values");
            }
        }
        out.times.push_back(target);
        out.snapshots.push_back(u);
    }
    return out;
}

// ----- Hopf-Lax -----

WulffSamples wulff_samples(const WulffSet& wulff) {
    const int dim = wulff.dim;
    if (wulff.directions.empty()) throw ConfigError("empty Wulff description");
    WulffSamples s;
    s.dim = dim;
    s.points.push_back(Vec{});  // the body always contains the origin

    // Radial boundary point along u: r = min_j value_j / (u_j . u) over
    // constraints that face u.
    const auto radial = [&](const Vec& u) {
        double r = kInf;
        for (std::size_t j = 0; j < wulff.directions.size(); ++j) {
            const double facing = vec_dot(dim, wulff.directions[j], u);
            if (facing > 1e-12) r = std::min(r, wulff.values[j] / facing);
        }
        if (r < kInf) {
            Vec p{};
            for (int a = 0; a < dim; ++a) p[a] = r * u[a];
            s.points.push_back(p);
        }
        return r;
    };

    double reach = 0.0;
    if (dim == 1) {
        Vec e{};
        e[0] = 1.0;
        reach = std::max(reach, radial(e));
        e[0] = -1.0;
        reach = std::max(reach, radial(e));
    } else if (dim == 2) {
        constexpr int kBoundary = 1024;
        for (int j = 0; j < kBoundary; ++j) {
            const double th = 2.0 * M_PI * j / kBoundary;
            Vec u{};
            u[0] = std::cos(th);
            u[1] = std::sin(th);
            reach = std::max(reach, radial(u));
        }
        // vertices of the polygon cut out by adjacent support planes
        const std::size_t mdirs = wulff.directions.size();
        for (std::size_t j = 0; j < mdirs; ++j) {
            const Vec& a = wulff.directions[j];
            const Vec& b = wulff.directions[(j + 1) % mdirs];
            const double det = a[0] * b[1] - a[1] * b[0];
            if (std::fabs(det) < 1e-12) continue;
            Vec v{};
            v[0] = (wulff.values[j] * b[1] - wulff.values[(j + 1) % mdirs] * a[1]) / det;
            v[1] = (wulff.values[(j + 1) % mdirs] * a[0] - wulff.values[j] * b[0]) / det;
            if (wulff.contains(v, 1e-9)) s.points.push_back(v);
        }
    } else if (dim == 3) {
        constexpr int kBoundary = 256;
        constexpr double kGoldenAngle = 2.399963229728653;
        for (int j = 0; j < kBoundary; ++j) {
            const double z = 1.0 - (2.0 * j + 1.0) / kBoundary;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = j * kGoldenAngle;
            Vec u{};
            u[0] = r * std::cos(phi);
            u[1] = r * std::sin(phi);
            u[2] = z;
            reach = std::max(reach, radial(u));
        }
    } else {
        throw ConfigError("Wulff sampling implemented for dimensions 1-3");
    }
    if (!(reach < kInf)) throw ConfigError("Wulff description leaves the body unbounded");
    return s;
}

namespace {

// min over lambda in [0,1] and periodic images of |w + k*period - lambda*s|
double segment_distance(int dim, const Vec& w, const Vec& s, double period, int wraps) {
    const int span = 2 * wraps + 1;
    std::int64_t images = 1;
    for (int a = 0; a < dim; ++a) images *= span;
    const double s2 = vec_dot(dim, s, s);
    double best = kInf;
    for (std::int64_t flat = 0; flat < images; ++flat) {
        std::int64_t rem = flat;
        Vec wk = w;
        for (int a = 0; a < dim; ++a) {
            wk[a] += (static_cast<int>(rem % span) - wraps) * period;
            rem /= span;
        }
        const double lam = s2 > 0.0 ? std::clamp(vec_dot(dim, wk, s) / s2, 0.0, 1.0) : 0.0;
        double d2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double da = wk[a] - lam * s[a];
            d2 += da * da;
        }
        best = std::min(best, d2);
    }
    return std::sqrt(best);
}

}  // namespace

double hopf_lax(const InitialData& u0, const WulffSamples& samples, const Vec& x, double t,
                double period) {
    if (t < 0.0) throw ConfigError("Hopf-Lax time must be nonnegative");
    if (samples.points.empty()) throw ConfigError("empty Wulff sample");
    const int dim = samples.dim;

    if (u0.kind != InitialData::Kind::Smooth) {
        // cone bundles: exact point-to-segment distances, so nesting of the
        // segments [0, t v] makes the value exactly nonincreasing in t
        double max_ray = 0.0;
        for (const Vec& v : samples.points) max_ray = std::max(max_ray, vec_norm(dim, v));
        const int wraps = 1 + static_cast<int>(std::ceil(t * max_ray / period));
        double best = u0.cap;
        for (const Vec& c : u0.centers) {
            Vec w{};
            for (int a = 0; a < dim; ++a) w[a] = x[a] - c[a];
            for (const Vec& v : samples.points) {
                Vec s{};
                for (int a = 0; a < dim; ++a) s[a] = t * v[a];
                best = std::min(best, segment_distance(dim, w, s, period, wraps));
            }
        }
        return best + u0.offset;
    }

    // smooth data: coarse ladder along each segment, then a golden polish
    double best = kInf;
    for (const Vec& v : samples.points) {
        const auto value_at = [&](double lam) {
            Vec y = x;
            for (int a = 0; a < dim; ++a) y[a] -= t * lam * v[a];
            return u0.eval(y, period);
        };
        constexpr int kLadder = 64;
        double lam_best = 0.0;
        double val_best = value_at(0.0);
        for (int j = 1; j <= kLadder; ++j) {
            const double lam = static_cast<double>(j) / kLadder;
            const double val = value_at(lam);
            if (val < val_best) {
                val_best = val;
                lam_best = lam;
            }
        }
        double lo = std::max(lam_best - 1.0 / kLadder, 0.0);
        double hi = std::min(lam_best + 1.0 / kLadder, 1.0);
        constexpr double kGoldenInv = 0.6180339887498949;
        double x1 = hi - kGoldenInv * (hi - lo);
        double x2 = lo + kGoldenInv * (hi - lo);
        double f1 = value_at(x1);
        double f2 = value_at(x2);
        for (int it = 0; it < 24; ++it) {
            if (f1 > f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGoldenInv * (hi - lo);
                f2 = value_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGoldenInv * (hi - lo);
                f1 = value_at(x1);
            }
        }
        best = std::min({best, val_best, value_at(0.5 * (lo + hi))});
    }
    return best;
}

double solve_homogenized(const InitialData& u0, const WulffSet& wulff, const Vec& x, double t,
                         double period) {
    return hopf_lax(u0, wulff_samples(wulff), x, t, period);
}

// ----- Convergence experiment -----

HomogenizationTable homogenization_experiment(const VectorFieldSpec& spec, const InitialData& u0,
                                              const std::vector<double>& eps_list, double T,
                                              std::int64_t resolution, const WulffSet& wulff,
                                              double cfl, Exec mode) {
    if (eps_list.empty()) throw ConfigError("no epsilon values requested");
    for (std::size_t i = 1; i < eps_list.size(); ++i) {
        if (!(eps_list[i] < eps_list[i - 1]))
            throw ConfigError("epsilon values must be strictly decreasing");
    }
    if (!(T > 0.0)) throw ConfigError("experiment horizon must be positive");
    if (wulff.dim != spec.dim()) throw ConfigError("Wulff body dimension mismatch");

    const int dim = spec.dim();
    const std::vector<double> snap_times{0.5 * T, T};
    const WulffSamples samples = wulff_samples(wulff);

    SolverConfig config;
    config.T = T;
    config.resolution = resolution;
    config.cfl = cfl;

    // fixed coarse evaluation lattice: every 8th cell along each axis
    std::vector<std::int64_t> lattice;
    std::vector<Vec> lattice_x;
    {
        std::vector<std::int64_t> res(static_cast<std::size_t>(dim), resolution);
        const TorusGrid grid(dim, res);
        for (std::int64_t cell = 0; cell < grid.cells(); ++cell) {
            const IVec c = grid.coord(cell);
            bool keep = true;
            for (int a = 0; a < dim; ++a) keep = keep && c[a] % 8 == 0;
            if (keep) {
                lattice.push_back(cell);
                lattice_x.push_back(grid.center(cell));
            }
        }
    }

    std::vector<std::vector<double>> reference(snap_times.size());
    for (std::size_t ti = 0; ti < snap_times.size(); ++ti) {
        reference[ti].resize(lattice.size());
        par_for(mode, static_cast<std::int64_t>(lattice.size()), [&](std::int64_t i) {
            reference[ti][static_cast<std::size_t>(i)] =
                hopf_lax(u0, samples, lattice_x[static_cast<std::size_t>(i)], snap_times[ti]);
        });
    }

    HomogenizationTable table;
    table.times = snap_times;
    for (const double eps : eps_list) {
        config.epsilon = eps;
        const OscillatorySolution sol = solve_oscillatory(spec, u0, config, snap_times, mode);
        HomogenizationRow row;
        row.epsilon = eps;
        for (std::size_t ti = 0; ti < snap_times.size(); ++ti) {
            double err = 0.0;
            for (std::size_t i = 0; i < lattice.size(); ++i) {
                const double diff = std::fabs(sol.snapshots[ti][static_cast<std::size_t>(lattice[i])] -
                                              reference[ti][i]);
                err = std::max(err, diff);
            }
            row.time_errors.push_back(err);
            row.error = std::max(row.error, err);
        }
        row.ratio = table.rows.empty() ? 0.0 : row.error / table.rows.back().error;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace ghom
