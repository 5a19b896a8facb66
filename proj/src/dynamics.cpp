#include "ghom/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ghom/errors.hpp"
#include "ghom/geometry.hpp"

namespace ghom {

namespace {

constexpr int kMaxEdgeSamples = 65;
constexpr double kTwoPi = 6.283185307179586476925287;

struct UnionFind {
    std::vector<std::int32_t> parent;

    explicit UnionFind(std::int64_t n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::int32_t find(std::int32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];  // path halving
            a = parent[a];
        }
        return a;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // lower index wins: deterministic roots
        parent[b] = a;
    }
};

Vec offset_displacement(const TorusGrid& grid, const IVec& o) {
    Vec d{};
    for (int a = 0; a < grid.dim(); ++a) d[a] = static_cast<double>(o[a]) * grid.spacing(a);
    return d;
}

}  // namespace

std::int64_t ReachabilityGraph::edge_count() const {
    std::int64_t n = 0;
    for (const std::uint8_t b : adjacency) n += b != 0;
    return n;
}

ReachabilityGraph build_reachability_graph(const VectorFieldSpec& spec, const TorusGrid& grid,
                                           double eta, GraphSide side, int radius, Exec mode) {
    if (spec.dim() != grid.dim())
        throw ConfigError("reachability graph: field and grid dimensions differ");
    if (!(eta > 0.0) || !(eta < 1.0)) throw ConfigError("margin eta must lie in (0,1)");

    ReachabilityGraph g{grid, spec, eta, side, radius, make_stencil(grid.dim(), radius), {}, 0};
    const int dim = grid.dim();
    const std::size_t noff = g.stencil.size();
    const double lip = check_assumptions(spec, default_chi(dim), grid).lipschitz_bound;

    // Per offset: enough gauge samples along the segment that consecutive
    // samples are closer than 2*eta/L_V, so the nesting radius eta/L_V of the
    // control sets covers every gap from the nearest sample.
    std::vector<int> samples(noff);
    for (std::size_t oi = 0; oi < noff; ++oi) {
        const Vec d = offset_displacement(grid, g.stencil[oi]);
        const double seglen = vec_norm(dim, d);
        const int m = static_cast<int>(std::ceil(lip * seglen / (2.0 * eta))) + 1;
        if (m > kMaxEdgeSamples)
            throw ConfigError(
                "grid too coarse for margin eta: edge certification would need " +
                std::to_string(m) + " gauge samples per edge (cap " +
                std::to_string(kMaxEdgeSamples) + "); refine the grid or widen eta");
        samples[oi] = m;
        g.max_edge_samples = std::max(g.max_edge_samples, m);
    }

    const double control_radius = side == GraphSide::Inner ? 1.0 - eta : 1.0 + eta;
    const bool need_all = side == GraphSide::Inner;
    g.adjacency.assign(static_cast<std::size_t>(grid.cells()) * noff, 0);

    par_for(mode, grid.cells(), [&](std::int64_t cell) {
        const Vec base = grid.center(cell);
        std::uint8_t* row = g.adjacency.data() + static_cast<std::size_t>(cell) * noff;
        for (std::size_t oi = 0; oi < noff; ++oi) {
            const Vec q = offset_displacement(grid, g.stencil[oi]);
            const int m = samples[oi];
            bool ok = need_all;
            for (int j = 0; j < m; ++j) {
                const double t = m == 1 ? 0.0 : static_cast<double>(j) / (m - 1);
                Vec x{};
                for (int a = 0; a < dim; ++a) x[a] = base[a] + t * q[a];
                x = grid.wrap_point(x);
                const bool feasible =
                    gauge_radius(dim, spec.eval(x), control_radius, q) < kInf;
                if (need_all) {
                    if (!feasible) {
                        ok = false;
                        break;
                    }
                } else if (feasible) {
                    ok = true;
                    break;
                }
            }
            row[oi] = ok ? 1 : 0;
        }
    });
    return g;
}

InvariantSetReport detect_invariant_sets(const ReachabilityGraph& graph) {
    const TorusGrid& grid = graph.grid;
    const std::int64_t n = grid.cells();
    const std::size_t noff = graph.stencil.size();

    // Pre-resolve edge targets once; reused by both component passes.
    std::vector<std::int32_t> target(static_cast<std::size_t>(n) * noff);
    par_for(Exec::Parallel, n, [&](std::int64_t cell) {
        const IVec c = grid.coord(cell);
        for (std::size_t oi = 0; oi < noff; ++oi) {
            IVec d = c;
            for (int a = 0; a < grid.dim(); ++a) d[a] += graph.stencil[oi][a];
            target[static_cast<std::size_t>(cell) * noff + oi] =
                static_cast<std::int32_t>(grid.index_wrapped(d));
        }
    });

    InvariantSetReport report{grid};

    // Weakly connected components (undirected closure).
    UnionFind uf(n);
    for (std::int64_t cell = 0; cell < n; ++cell) {
        for (std::size_t oi = 0; oi < noff; ++oi) {
            if (graph.edge(cell, oi))
                uf.unite(static_cast<std::int32_t>(cell),
                         target[static_cast<std::size_t>(cell) * noff + oi]);
        }
    }
    for (std::int32_t cell = 0; cell < n; ++cell)
        if (uf.find(cell) == cell) ++report.weak_component_count;

    // Strongly connected components, iterative Tarjan.
    std::vector<std::int32_t> index(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> comp(static_cast<std::size_t>(n), -1);
    std::vector<std::uint8_t> onstack(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> stack;
    struct Frame {
        std::int32_t v;
        std::size_t ei;
    };
    std::vector<Frame> call;
    std::int32_t next_index = 0;
    std::int32_t ncomp = 0;

    for (std::int32_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        onstack[root] = 1;
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.ei < noff) {
                const std::size_t ei = f.ei++;
                if (!graph.edge(f.v, ei)) continue;
                const std::int32_t w = target[static_cast<std::size_t>(f.v) * noff + ei];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    onstack[w] = 1;
                    call.push_back({w, 0});
                } else if (onstack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                const std::int32_t v = f.v;
                call.pop_back();
                if (lowlink[v] == index[v]) {
                    while (true) {
                        const std::int32_t w = stack.back();
                        stack.pop_back();
                        onstack[w] = 0;
                        comp[w] = ncomp;
                        if (w == v) break;
                    }
                    ++ncomp;
                }
                if (!call.empty()) {
                    Frame& parent = call.back();
                    lowlink[parent.v] = std::min(lowlink[parent.v], lowlink[v]);
                }
            }
        }
    }

    // Canonical ids: order components by their smallest cell.
    std::vector<std::int32_t> min_cell(static_cast<std::size_t>(ncomp),
                                       static_cast<std::int32_t>(n));
    for (std::int32_t cell = 0; cell < n; ++cell)
        min_cell[comp[cell]] = std::min(min_cell[comp[cell]], cell);
    std::vector<std::int32_t> order(static_cast<std::size_t>(ncomp));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::int32_t a, std::int32_t b) { return min_cell[a] < min_cell[b]; });
    std::vector<std::int32_t> relabel(static_cast<std::size_t>(ncomp));
    for (std::int32_t i = 0; i < ncomp; ++i) relabel[order[i]] = i;

    report.component_count = ncomp;
    report.proper_invariant_found = ncomp >= 2;
    report.labels.resize(static_cast<std::size_t>(n));
    report.components.assign(static_cast<std::size_t>(ncomp), {});
    for (std::int32_t cell = 0; cell < n; ++cell) {
        const std::int32_t id = relabel[comp[cell]];
        report.labels[cell] = id;
        report.components[id].push_back(cell);
    }

    report.closed.assign(static_cast<std::size_t>(ncomp), 1);
    for (std::int64_t cell = 0; cell < n; ++cell) {
        for (std::size_t oi = 0; oi < noff; ++oi) {
            if (!graph.edge(cell, oi)) continue;
            const std::int32_t w = target[static_cast<std::size_t>(cell) * noff + oi];
            if (report.labels[cell] != report.labels[w]) report.closed[report.labels[cell]] = 0;
        }
    }

    double cell_volume = 1.0;
    for (int a = 0; a < grid.dim(); ++a) cell_volume *= grid.spacing(a);
    report.volumes.resize(static_cast<std::size_t>(ncomp));
    for (std::int32_t i = 0; i < ncomp; ++i)
        report.volumes[i] = cell_volume * static_cast<double>(report.components[i].size());

    // Boundary cells: any Chebyshev-1 neighbor in a different component.
    const std::vector<IVec> ring = make_stencil(grid.dim(), 1);
    report.boundary_cells.assign(static_cast<std::size_t>(ncomp), {});
    for (std::int64_t cell = 0; cell < n; ++cell) {
        const IVec c = grid.coord(cell);
        for (const IVec& o : ring) {
            IVec d = c;
            for (int a = 0; a < grid.dim(); ++a) d[a] += o[a];
            if (report.labels[grid.index_wrapped(d)] != report.labels[cell]) {
                report.boundary_cells[report.labels[cell]].push_back(cell);
                break;
            }
        }
    }

    if (report.proper_invariant_found) {
        std::int32_t best = -1;
        for (std::int32_t i = 0; i < ncomp; ++i) {
            if (!report.closed[i]) continue;
            if (best == -1 || report.volumes[i] > report.volumes[best]) best = i;
        }
        report.trapped_component = best;
    }
    return report;
}

namespace {

// Candidate unit directions for the steered selector, fixed fan per dimension.
std::vector<Vec> steering_fan(int dim) {
    std::vector<Vec> fan;
    if (dim == 1) {
        Vec u{};
        u[0] = 1.0;
        fan.push_back(u);
        u[0] = -1.0;
        fan.push_back(u);
    } else if (dim == 2) {
        for (int j = 0; j < 64; ++j) {
            const double th = kTwoPi * j / 64.0;
            Vec u{};
            u[0] = std::cos(th);
            u[1] = std::sin(th);
            fan.push_back(u);
        }
    } else {
        for (int i = 0; i < 128; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / 128.0;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = i * 2.399963229728653;
            Vec u{};
            u[0] = r * std::cos(phi);
            u[1] = r * std::sin(phi);
            u[2] = z;
            fan.push_back(u);
        }
    }
    return fan;
}

}  // namespace

std::vector<Vec> integrate_trajectory(const VectorFieldSpec& spec, const Vec& x0,
                                      const TrajectorySelector& selector, double T, double dt) {
    if (!(dt > 0.0)) throw ConfigError("trajectory time step must be positive");
    if (T < dt) throw ConfigError("trajectory horizon must cover at least one step");
    const int dim = spec.dim();
    if (dim > 3 && selector.kind == TrajectorySelector::Kind::Steered)
        throw ConfigError("steered trajectories implemented for dimensions 1-3");

    const TorusGrid probe(dim, std::vector<std::int64_t>(static_cast<std::size_t>(dim), 4));
    const std::int64_t steps = std::max<std::int64_t>(1, std::llround(T / dt));
    const std::vector<Vec> fan =
        selector.kind == TrajectorySelector::Kind::Steered ? steering_fan(dim)
                                                           : std::vector<Vec>{};

    std::vector<Vec> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    Vec x = probe.wrap_point(x0);
    path.push_back(x);

    for (std::int64_t s = 0; s < steps; ++s) {
        const Vec v = spec.eval(x);
        Vec w{};
        if (selector.kind == TrajectorySelector::Kind::Drift) {
            const double speed = vec_norm(dim, v);
            if (speed > 0.0)
                for (int a = 0; a < dim; ++a) w[a] = v[a] * (1.0 + 1.0 / speed);
        } else {
            const Vec gap = torus_delta(dim, x, selector.target);
            double best = torus_distance(dim, x, selector.target);  // w = 0 baseline
            // Landing exactly on the target is allowed when the full gap is
            // a feasible one-step displacement.
            Vec exact{};
            for (int a = 0; a < dim; ++a) exact[a] = gap[a] / dt;
            if (gauge_radius(dim, v, 1.0, exact) <= 1.0) {
                w = exact;
                best = 0.0;
            }
            ControlSetQuery fq;
            fq.dim = dim;
            fq.center = v;
            fq.radius = 1.0;
            for (const Vec& u : fan) {
                const double g = gauge_radius(dim, v, 1.0, u);
                if (!(g < kInf) || g <= 0.0) continue;
                Vec cand{};
                Vec y = x;
                for (int a = 0; a < dim; ++a) {
                    cand[a] = u[a] / g;
                    y[a] += dt * cand[a];
                }
                // Directions grazing the recession cone scale to boundary
                // points whose recomputed gauge can round to infinity; only
                // candidates that re-verify as members are eligible.
                if (!gauge_membership(fq, cand, 1e-6)) continue;
                const double d = torus_distance(dim, probe.wrap_point(y), selector.target);
                if (d < best) {
                    best = d;
                    w = cand;
                }
            }
        }

        ControlSetQuery f;
        f.dim = dim;
        f.center = v;
        f.radius = 1.0;
        if (!gauge_membership(f, w, 1e-6))
            throw NumericalError("trajectory step rejected: selected velocity left the control set");

        for (int a = 0; a < dim; ++a) x[a] += dt * w[a];
        x = probe.wrap_point(x);
        path.push_back(x);
    }
    return path;
}

BoundaryNormalStats boundary_normal_check(const InvariantSetReport& report,
                                          const VectorFieldSpec& spec, double tol) {
    if (!report.proper_invariant_found || report.trapped_component < 0)
        throw ConfigError("boundary normal check requires a proper invariant set");
    if (tol < 0.0) throw ConfigError("boundary tolerance must be nonnegative");
    const TorusGrid& grid = report.grid;
    if (spec.dim() != grid.dim())
        throw ConfigError("boundary normal check: field and grid dimensions differ");
    const int dim = grid.dim();
    const std::int64_t n = grid.cells();
    const std::int32_t t = report.trapped_component;

    // Indicator of the trapped component, box-smoothed so central differences
    // read a usable outer normal on the staircase boundary.
    std::vector<double> phi(static_cast<std::size_t>(n));
    for (std::int64_t c = 0; c < n; ++c) phi[c] = report.labels[c] == t ? 1.0 : 0.0;
    const std::vector<IVec> ring = make_stencil(dim, 1);
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int pass = 0; pass < 5; ++pass) {
        par_for(Exec::Parallel, n, [&](std::int64_t cell) {
            const IVec c = grid.coord(cell);
            double acc = phi[cell];
            for (const IVec& o : ring) {
                IVec d = c;
                for (int a = 0; a < dim; ++a) d[a] += o[a];
                acc += phi[grid.index_wrapped(d)];
            }
            next[cell] = acc / static_cast<double>(ring.size() + 1);
        });
        phi.swap(next);
    }

    BoundaryNormalStats stats;
    stats.tol = tol;
    std::int64_t pass_inflow = 0;
    std::int64_t pass_speed = 0;
    for (const std::int64_t cell : report.boundary_cells[t]) {
        ++stats.boundary_cell_count;
        const IVec c = grid.coord(cell);
        Vec grad{};
        double norm2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            IVec up = c;
            IVec dn = c;
            ++up[a];
            --dn[a];
            grad[a] = (phi[grid.index_wrapped(up)] - phi[grid.index_wrapped(dn)]) /
                      (2.0 * grid.spacing(a));
            norm2 += grad[a] * grad[a];
        }
        if (norm2 < 1e-24) {
            ++stats.skipped_cells;
            continue;
        }
        const double invnorm = -1.0 / std::sqrt(norm2);  // gradient points inward
        Vec normal{};
        for (int a = 0; a < dim; ++a) normal[a] = grad[a] * invnorm;
        const Vec v = spec.eval(grid.center(cell));
        const double ndotv = vec_dot(dim, normal, v);
        const double speed = vec_norm(dim, v);
        stats.normal_dot_v.push_back(ndotv);
        stats.speed.push_back(speed);
        if (ndotv <= -1.0 + tol) ++pass_inflow;
        if (speed >= 1.0 - tol) ++pass_speed;
    }
    const std::int64_t used = stats.boundary_cell_count - stats.skipped_cells;
    if (used > 0) {
        stats.fraction_inflow = static_cast<double>(pass_inflow) / static_cast<double>(used);
        stats.fraction_speed = static_cast<double>(pass_speed) / static_cast<double>(used);
    }
    return stats;
}

}  // namespace ghom
