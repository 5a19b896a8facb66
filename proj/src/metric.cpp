#include "ghom/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "ghom/errors.hpp"
#include "ghom/geometry.hpp"

namespace ghom {

namespace {

constexpr double kGaussOffset = 0.28867513459481287;  // 1/(2 sqrt 3)

// Sigma density along the segment from `base` in direction `seg` (full edge
// displacement), evaluated at parameter t.  Level-1 support for the plain
// metric, truncated support at the level itself otherwise.
struct EdgeDensity {
    const VectorFieldSpec& spec;
    const Vec& base;
    const Vec& seg;
    int truncation;
    double level;
    int dim;

    double operator()(double t) const {
        Vec x = base;
        for (int a = 0; a < dim; ++a) x[a] += t * seg[a];
        const Vec v = spec.eval(x);
        if (truncation > 0) return support_sigma_truncated(dim, v, truncation, level, seg);
        return support_sigma(dim, v, seg).value;
    }
};

double gauss2(const EdgeDensity& density, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double off = (hi - lo) * kGaussOffset;
    const double f1 = density(mid - off);
    if (!(f1 < kInf)) return kInf;
    const double f2 = density(mid + off);
    if (!(f2 < kInf)) return kInf;
    return 0.5 * (hi - lo) * (f1 + f2);
}

// Composite rule for edges whose segment crosses the |V| = 1 interface.
double gauss2_composite(const EdgeDensity& density, int pieces) {
    double acc = 0.0;
    for (int j = 0; j < pieces; ++j) {
        const double part =
            gauss2(density, static_cast<double>(j) / pieces, static_cast<double>(j + 1) / pieces);
        if (!(part < kInf)) return kInf;
        acc += part;
    }
    return acc;
}

bool segment_crosses_interface(const VectorFieldSpec& spec, const Vec& base, const Vec& seg,
                               int dim) {
    double lo = kInf;
    double hi = -kInf;
    for (int j = 0; j <= 4; ++j) {
        Vec x = base;
        for (int a = 0; a < dim; ++a) x[a] += 0.25 * j * seg[a];
        const double s = vec_norm(dim, spec.eval(x));
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return lo < 1.0 && hi > 1.0;
}

std::size_t negated_index(const std::vector<IVec>& stencil, std::size_t i, int dim) {
    IVec neg{};
    for (int a = 0; a < dim; ++a) neg[a] = -stencil[i][a];
    const auto it = std::lower_bound(stencil.begin(), stencil.end(), neg);
    return static_cast<std::size_t>(it - stencil.begin());
}

}  // namespace

WeightTable build_weights(const VectorFieldSpec& spec, const TorusGrid& grid,
                          const EdgeWeighting& weighting, Exec mode) {
    if (spec.dim() != grid.dim())
        throw ConfigError("edge weights: field and grid dimensions differ");
    if (weighting.truncation < 0) throw ConfigError("truncation index must be 0 (none) or >= 1");
    if (weighting.truncation == 0 && !(weighting.level > 0.0))
        throw ConfigError(
            "periodic distance needs a positive level: at level 0 it vanishes identically and "
            "below it degenerates to -inf");
    if (weighting.truncation > 0 && weighting.level < 0.0)
        throw ConfigError("truncated weights need a nonnegative level");
    const int dim = grid.dim();
    for (int a = 0; a < dim; ++a) {
        if (2 * weighting.stencil_radius >= grid.res(a))
            throw ConfigError("stencil radius too large for the grid resolution");
    }

    WeightTable table(grid, weighting);
    table.stencil = make_stencil(dim, weighting.stencil_radius);
    const std::size_t noff = table.stencil.size();
    const std::int64_t n = grid.cells();
    table.weights.assign(static_cast<std::size_t>(n) * noff, kInf);

    par_for(mode, n, [&](std::int64_t cell) {
        const Vec base = grid.center(cell);
        for (std::size_t oi = 0; oi < noff; ++oi) {
            Vec seg{};
            double tilt_term = 0.0;
            for (int a = 0; a < dim; ++a) {
                seg[a] = static_cast<double>(table.stencil[oi][a]) * grid.spacing(a);
                tilt_term -= weighting.tilt[a] * seg[a];
            }
            const EdgeDensity density{spec, base, seg, weighting.truncation, weighting.level, dim};
            const double quad = segment_crosses_interface(spec, base, seg, dim)
                                    ? gauss2_composite(density, 8)
                                    : gauss2(density, 0.0, 1.0);
            double w;
            if (!(quad < kInf)) {
                w = kInf;
            } else if (weighting.truncation > 0) {
                w = quad + tilt_term;
            } else {
                w = weighting.level * quad + tilt_term;
            }
            table.weights[static_cast<std::size_t>(cell) * noff + oi] = w;
        }
    });

    for (const double w : table.weights) {
        if (w < 0.0) {
            table.has_negative = true;
            break;
        }
    }
    return table;
}

WeightTable reversed(const WeightTable& table) {
    WeightTable rev(table.grid, table.weighting);
    rev.stencil = table.stencil;
    rev.weights.assign(table.weights.size(), kInf);
    rev.has_negative = table.has_negative;
    const std::size_t noff = table.stencil.size();
    const int dim = table.grid.dim();
    std::vector<std::size_t> neg(noff);
    for (std::size_t oi = 0; oi < noff; ++oi) neg[oi] = negated_index(table.stencil, oi, dim);
    for (std::int64_t cell = 0; cell < table.grid.cells(); ++cell) {
        for (std::size_t oi = 0; oi < noff; ++oi) {
            const std::int64_t to = table.target(cell, oi);
            rev.weights[static_cast<std::size_t>(to) * noff + neg[oi]] =
                table.weights[static_cast<std::size_t>(cell) * noff + oi];
        }
    }
    return rev;
}

GridFunction shortest_path_field(const WeightTable& table, std::int64_t source) {
    if (table.has_negative)
        throw ConfigError(
            "negative edge weights present (tilted metric); use bellman_ford_negative_cycle");
    if (source < 0 || source >= table.grid.cells())
        throw ConfigError("shortest path source cell out of range");

    GridFunction dist(table.grid, kInf);
    dist[source] = 0.0;
    using Entry = std::pair<double, std::int64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    heap.emplace(0.0, source);
    const std::size_t noff = table.stencil.size();
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (std::size_t oi = 0; oi < noff; ++oi) {
            const double w = table.weight(u, oi);
            if (!(w < kInf)) continue;
            const std::int64_t v = table.target(u, oi);
            const double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

UnwrappedDistanceField shortest_path_field_unwrapped(const WeightTable& table,
                                                     std::int64_t base_source, int periods) {
    if (periods < 1) throw ConfigError("unwrapped block needs at least one period");
    if (base_source < 0 || base_source >= table.grid.cells())
        throw ConfigError("shortest path source cell out of range");
    if (table.has_negative)
        throw ConfigError(
            "negative edge weights present (tilted metric); use bellman_ford_negative_cycle");

    const TorusGrid& grid = table.grid;
    const int dim = grid.dim();
    std::vector<std::int64_t> block_res(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) block_res[static_cast<std::size_t>(a)] = periods * grid.res(a);

    UnwrappedDistanceField out{TorusGrid(dim, block_res)};
    out.periods = periods;
    IVec src = grid.coord(base_source);
    for (int a = 0; a < dim; ++a) src[a] += ((periods - 1) / 2) * grid.res(a);
    out.source = out.block.index(src);
    out.values.assign(static_cast<std::size_t>(out.block.cells()), kInf);
    out.values[static_cast<std::size_t>(out.source)] = 0.0;

    using Entry = std::pair<double, std::int64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    heap.emplace(0.0, out.source);
    const std::size_t noff = table.stencil.size();
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > out.values[static_cast<std::size_t>(u)]) continue;
        const IVec cu = out.block.coord(u);
        IVec base_cu{};
        for (int a = 0; a < dim; ++a) base_cu[a] = cu[a] % grid.res(a);
        const std::int64_t base_cell = grid.index(base_cu);
        for (std::size_t oi = 0; oi < noff; ++oi) {
            const double w = table.weight(base_cell, oi);
            if (!(w < kInf)) continue;
            IVec cv = cu;
            bool inside = true;
            for (int a = 0; a < dim; ++a) {
                cv[a] += table.stencil[oi][a];
                inside = inside && cv[a] >= 0 && cv[a] < out.block.res(a);
            }
            if (!inside) continue;
            const std::int64_t v = out.block.index(cv);
            const double nd = d + w;
            if (nd < out.values[static_cast<std::size_t>(v)]) {
                out.values[static_cast<std::size_t>(v)] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return out;
}

double certificate_weight(const WeightTable& table, const CycleCertificate& cert) {
    if (cert.cells.empty() || cert.cells.size() != cert.offsets.size())
        throw ConfigError("certificate is empty or malformed");
    double total = 0.0;
    for (std::size_t i = 0; i < cert.cells.size(); ++i) {
        const std::int64_t from = cert.cells[i];
        const std::int64_t to = cert.cells[(i + 1) % cert.cells.size()];
        const auto oi = static_cast<std::size_t>(cert.offsets[i]);
        if (oi >= table.stencil.size() || table.target(from, oi) != to)
            throw ConfigError("certificate edges do not match the weight table");
        total += table.weight(from, oi);
    }
    return total;
}

namespace {

// Walk the predecessor forest and return some cycle in it, if any.
std::vector<std::int64_t> predecessor_cycle(const std::vector<std::int64_t>& pred) {
    const std::int64_t n = static_cast<std::int64_t>(pred.size());
    std::vector<std::int64_t> color(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> trail;
    for (std::int64_t start = 0; start < n; ++start) {
        if (color[start] != 0) continue;
        trail.clear();
        std::int64_t v = start;
        const std::int64_t stamp = start + 1;
        while (v >= 0 && color[v] == 0) {
            color[v] = stamp;
            trail.push_back(v);
            v = pred[v];
        }
        if (v >= 0 && color[v] == stamp) {
            // cycle: the tail of the trail starting at v
            const auto it = std::find(trail.begin(), trail.end(), v);
            return {it, trail.end()};
        }
        for (const std::int64_t u : trail) color[u] = -1;  // finished, no cycle through here
        if (v >= 0) color[v] = -1;
    }
    return {};
}

}  // namespace

namespace {

// In-edge of `cell` through offset oi starts at cell - stencil[oi] and has
// that cell's oi-th weight; precompute the gather sources.
std::vector<std::int64_t> gather_sources(const WeightTable& table, Exec mode) {
    const TorusGrid& grid = table.grid;
    const std::int64_t n = grid.cells();
    const std::size_t noff = table.stencil.size();
    const int dim = grid.dim();
    std::vector<std::int64_t> in_source(static_cast<std::size_t>(n) * noff);
    par_for(mode, n, [&](std::int64_t cell) {
        const IVec c = grid.coord(cell);
        for (std::size_t oi = 0; oi < noff; ++oi) {
            IVec p = c;
            for (int a = 0; a < dim; ++a) p[a] -= table.stencil[oi][a];
            in_source[static_cast<std::size_t>(cell) * noff + oi] = grid.index_wrapped(p);
        }
    });
    return in_source;
}

}  // namespace

std::optional<CycleCertificate> bellman_ford_negative_cycle(const WeightTable& table, Exec mode) {
    const TorusGrid& grid = table.grid;
    const std::int64_t n = grid.cells();
    const std::size_t noff = table.stencil.size();
    const int dim = grid.dim();
    const std::vector<std::int64_t> in_source = gather_sources(table, mode);

    std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
    std::vector<double> next(static_cast<std::size_t>(n));
    std::vector<std::int64_t> pred(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> pred_off(static_cast<std::size_t>(n), -1);
    std::vector<std::uint8_t> changed(static_cast<std::size_t>(n));

    auto extract = [&](const std::vector<std::int64_t>& loop) -> std::optional<CycleCertificate> {
        if (loop.empty()) return std::nullopt;
        // pred walks run backwards; flip to edge order
        CycleCertificate cert;
        cert.cells.assign(loop.rbegin(), loop.rend());
        const std::size_t m = cert.cells.size();
        // rotate so the smallest cell leads (stable output for logs and tests)
        const std::size_t lead = static_cast<std::size_t>(
            std::min_element(cert.cells.begin(), cert.cells.end()) - cert.cells.begin());
        std::rotate(cert.cells.begin(), cert.cells.begin() + static_cast<std::ptrdiff_t>(lead),
                    cert.cells.end());
        cert.offsets.resize(m);
        IVec disp{};
        for (std::size_t i = 0; i < m; ++i) {
            const std::int64_t to = cert.cells[(i + 1) % m];
            cert.offsets[i] = pred_off[to];
            for (int a = 0; a < dim; ++a) disp[a] += table.stencil[cert.offsets[i]][a];
        }
        cert.total_weight = certificate_weight(table, cert);
        if (!(cert.total_weight < 0.0)) return std::nullopt;
        for (int a = 0; a < dim; ++a) {
            if (disp[a] % grid.res(a) != 0)
                throw NumericalError("cycle certificate winding is not closed on the torus");
            cert.winding[a] = -disp[a] / grid.res(a);
        }
        return cert;
    };

    const std::int64_t cap = n + 5;
    for (std::int64_t round = 1; round <= cap; ++round) {
        par_for(mode, n, [&](std::int64_t cell) {
            double best = dist[static_cast<std::size_t>(cell)];
            std::int64_t bp = -1;
            std::int32_t bo = -1;
            for (std::size_t oi = 0; oi < noff; ++oi) {
                const std::int64_t p = in_source[static_cast<std::size_t>(cell) * noff + oi];
                const double w = table.weight(p, oi);
                if (!(w < kInf)) continue;
                const double cand = dist[static_cast<std::size_t>(p)] + w;
                if (cand < best) {
                    best = cand;
                    bp = p;
                    bo = static_cast<std::int32_t>(oi);
                }
            }
            next[static_cast<std::size_t>(cell)] = best;
            changed[static_cast<std::size_t>(cell)] = bp >= 0;
            if (bp >= 0) {
                pred[static_cast<std::size_t>(cell)] = bp;
                pred_off[static_cast<std::size_t>(cell)] = bo;
            }
        });
        dist.swap(next);
        bool any = false;
        for (std::int64_t c = 0; c < n; ++c) any = any || changed[static_cast<std::size_t>(c)];
        if (!any) return std::nullopt;
        if (round % 8 == 0 || round >= n) {
            if (auto cert = extract(predecessor_cycle(pred))) return cert;
            if (round >= n)
                throw NumericalError(
                    "relaxation kept updating past the round bound without a certifiable cycle");
        }
    }
    throw NumericalError("relaxation failed to stabilize within the round cap");
}

GridFunction bellman_ford_distances(const WeightTable& table, std::int64_t source, Exec mode) {
    const TorusGrid& grid = table.grid;
    const std::int64_t n = grid.cells();
    if (source < 0 || source >= n) throw ConfigError("shortest path source cell out of range");
    const std::size_t noff = table.stencil.size();
    const std::vector<std::int64_t> in_source = gather_sources(table, mode);

    GridFunction dist(grid, kInf);
    dist[source] = 0.0;
    std::vector<double> next(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> changed(static_cast<std::size_t>(n));

    const std::int64_t cap = n + 5;
    for (std::int64_t round = 1; round <= cap; ++round) {
        par_for(mode, n, [&](std::int64_t cell) {
            double best = dist[cell];
            bool touched = false;
            for (std::size_t oi = 0; oi < noff; ++oi) {
                const std::int64_t p = in_source[static_cast<std::size_t>(cell) * noff + oi];
                const double w = table.weight(p, oi);
                if (!(w < kInf)) continue;
                const double cand = dist[p] + w;
                if (cand < best) {
                    best = cand;
                    touched = true;
                }
            }
            next[static_cast<std::size_t>(cell)] = best;
            changed[static_cast<std::size_t>(cell)] = touched;
        });
        dist.values().swap(next);
        bool any = false;
        for (std::int64_t c = 0; c < n; ++c) any = any || changed[static_cast<std::size_t>(c)];
        if (!any) return dist;
        if (round >= n)
            throw NumericalError(
                "single-source relaxation kept improving past the round bound: negative cycle");
    }
    throw NumericalError("single-source relaxation failed to stabilize within the round cap");
}

BoundednessReport boundedness_check(const WeightTable& table, Exec mode) {
    const EdgeWeighting& w = table.weighting;
    bool tilt_zero = true;
    for (int a = 0; a < table.grid.dim(); ++a) tilt_zero = tilt_zero && w.tilt[a] == 0.0;
    if (w.level != 1.0 || !tilt_zero || w.truncation != 0)
        throw ConfigError("boundedness check expects the level-1 untilted metric");

    const TorusGrid& grid = table.grid;
    std::vector<std::int64_t> sources;
    for (std::int64_t cell = 0; cell < grid.cells(); ++cell) {
        const IVec c = grid.coord(cell);
        bool coarse = true;
        for (int a = 0; a < grid.dim(); ++a) coarse = coarse && c[a] % 4 == 0;
        if (coarse) sources.push_back(cell);
    }

    std::vector<double> sweep_max(sources.size());
    std::vector<std::uint8_t> sweep_finite(sources.size());
    par_for(mode, static_cast<std::int64_t>(sources.size()), [&](std::int64_t si) {
        const GridFunction d = shortest_path_field(table, sources[static_cast<std::size_t>(si)]);
        sweep_max[static_cast<std::size_t>(si)] = d.max();
        sweep_finite[static_cast<std::size_t>(si)] = !d.has_infinite();
    });

    BoundednessReport report;
    report.sources = static_cast<std::int64_t>(sources.size());
    report.finite = true;
    for (std::size_t si = 0; si < sources.size(); ++si) {
        report.finite = report.finite && sweep_finite[si] != 0;
        report.max_value = std::max(report.max_value, sweep_max[si]);
    }
    if (!report.finite) report.max_value = kInf;
    return report;
}

}  // namespace ghom
