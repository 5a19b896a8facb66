#ifndef GHOM_METRIC_HPP
#define GHOM_METRIC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ghom/field.hpp"
#include "ghom/grid.hpp"
#include "ghom/parallel.hpp"

namespace ghom {

/// Parameters defining intrinsic edge lengths: level a, tilt P, optional
/// coercive truncation k (0 = none), and the stencil radius of the path graph.
struct EdgeWeighting {
    double level = 1.0;
    Vec tilt{};
    int truncation = 0;
    int stencil_radius = 2;
};

/// Immutable per-edge weight table over the periodic cell graph.  Edge
/// (cell -> cell + offset) costs level * (sigma-length of the segment between
/// the two cell centers) plus tilt . (-offset * h); +inf marks the edge
/// absent.  With truncation k the integrand is the truncated support at the
/// level directly, which is always finite.
struct WeightTable {
    TorusGrid grid;
    EdgeWeighting weighting;
    std::vector<IVec> stencil;
    std::vector<double> weights;  // cells x stencil entries, row-major
    bool has_negative = false;

    WeightTable(const TorusGrid& g, const EdgeWeighting& w) : grid(g), weighting(w) {}

    double weight(std::int64_t cell, std::size_t offset_index) const {
        return weights[static_cast<std::size_t>(cell) * stencil.size() + offset_index];
    }
    std::int64_t target(std::int64_t cell, std::size_t offset_index) const {
        IVec c = grid.coord(cell);
        for (int a = 0; a < grid.dim(); ++a) c[a] += stencil[offset_index][a];
        return grid.index_wrapped(c);
    }
};

WeightTable build_weights(const VectorFieldSpec& spec, const TorusGrid& grid,
                          const EdgeWeighting& weighting, Exec mode = Exec::Parallel);

/// Same graph with every edge turned around; weights carry over unchanged.
WeightTable reversed(const WeightTable& table);

/// Single-source shortest paths on the periodic graph (Dijkstra).  Requires a
/// nonnegative table; a table with negative weights is the cycle solver's
/// business.  The result references the table's grid.
GridFunction shortest_path_field(const WeightTable& table, std::int64_t source);

/// Shortest paths on an unwrapped block of periods^N fundamental domains with
/// the source placed in the centre copy.  Edges never wrap, so the field is
/// the non-periodic distance restricted to the block.
struct UnwrappedDistanceField {
    TorusGrid block;  // used as a plain array; periodicity plays no role
    int periods = 3;
    std::int64_t source = 0;  // block cell index
    std::vector<double> values;

    explicit UnwrappedDistanceField(const TorusGrid& b) : block(b) {}
};

UnwrappedDistanceField shortest_path_field_unwrapped(const WeightTable& table,
                                                     std::int64_t base_source, int periods = 3);

/// Witness of a negative-weight torus cycle.  cells[i] -> cells[i+1] via
/// stencil offset offsets[i] (cyclically); winding is minus the total
/// displacement in torus units, so the tilt contributes exactly tilt . winding
/// to total_weight.
struct CycleCertificate {
    IVec winding{};
    std::vector<std::int64_t> cells;
    std::vector<std::int32_t> offsets;
    double total_weight = 0.0;
};

/// Re-sum a certificate's edges against the table it was extracted from.
double certificate_weight(const WeightTable& table, const CycleCertificate& cert);

/// Label-correcting relaxation over the torus graph.  Returns a certificate
/// iff some cycle has negative total weight (equivalently, the tilted
/// point-to-self distance dips below zero somewhere).
std::optional<CycleCertificate> bellman_ford_negative_cycle(const WeightTable& table,
                                                            Exec mode = Exec::Parallel);

/// Single-source distances on a table that may carry negative weights.
/// Throws NumericalError when a negative cycle makes the distances unbounded
/// below.  The result references the table's grid.
GridFunction bellman_ford_distances(const WeightTable& table, std::int64_t source,
                                    Exec mode = Exec::Parallel);

/// All-pairs boundedness probe for the level-1 untilted metric: sweeps from
/// every fourth cell per axis and reports the largest distance seen.
struct BoundednessReport {
    bool finite = false;
    double max_value = 0.0;
    std::int64_t sources = 0;
};

BoundednessReport boundedness_check(const WeightTable& table, Exec mode = Exec::Parallel);

}  // namespace ghom

#endif
