#ifndef GHOM_DYNAMICS_HPP
#define GHOM_DYNAMICS_HPP

#include <cstdint>
#include <vector>

#include "ghom/field.hpp"
#include "ghom/grid.hpp"
#include "ghom/parallel.hpp"

namespace ghom {

enum class GraphSide { Inner, Outer };

/// Direction-feasibility digraph of the differential inclusion on a periodic
/// grid. An edge cell -> cell+o means the straight segment along o*h is
/// certified feasible (inner side, control radius 1-eta) or not certified
/// infeasible (outer side, radius 1+eta). Certification samples the gauge
/// at several points along the segment, close enough that the Lipschitz
/// nesting radius eta/L_V covers the gaps between samples.
struct ReachabilityGraph {
    TorusGrid grid;
    VectorFieldSpec spec;
    double eta = 0.0;
    GraphSide side = GraphSide::Inner;
    int radius = 2;
    std::vector<IVec> stencil;
    std::vector<std::uint8_t> adjacency;  // cells x stencil entries, row per cell
    int max_edge_samples = 0;             // diagnostic: largest sample count used

    bool edge(std::int64_t cell, std::size_t offset_index) const {
        return adjacency[static_cast<std::size_t>(cell) * stencil.size() + offset_index] != 0;
    }
    std::int64_t edge_count() const;
};

ReachabilityGraph build_reachability_graph(const VectorFieldSpec& spec, const TorusGrid& grid,
                                           double eta, GraphSide side, int radius = 2,
                                           Exec mode = Exec::Parallel);

/// Partition of the cells into strongly connected components, with the
/// weakly-connected count kept alongside. A proper invariant region exists
/// iff the graph is not strongly connected: the condensation then has a
/// closed piece (no edges out), which traps every walk that enters it.
struct InvariantSetReport {
    explicit InvariantSetReport(const TorusGrid& g) : grid(g) {}

    TorusGrid grid;
    std::int64_t component_count = 0;       // strongly connected components
    std::int64_t weak_component_count = 0;  // undirected closure, for reference
    bool proper_invariant_found = false;
    std::vector<std::int32_t> labels;                     // cell -> component id
    std::vector<std::vector<std::int64_t>> components;    // cells per component
    std::vector<std::uint8_t> closed;                     // 1 if no edges leave
    std::vector<double> volumes;                          // cell count * h^N
    std::vector<std::vector<std::int64_t>> boundary_cells;
    std::int32_t trapped_component = -1;  // largest closed component, -1 if none proper
};

InvariantSetReport detect_invariant_sets(const ReachabilityGraph& graph);

/// Velocity selection for explicit-Euler trajectories of the inclusion.
struct TrajectorySelector {
    enum class Kind { Drift, Steered };
    Kind kind = Kind::Drift;
    Vec target{};

    static TrajectorySelector drift() { return {}; }
    static TrajectorySelector steered(const Vec& target) {
        TrajectorySelector s;
        s.kind = Kind::Steered;
        s.target = target;
        return s;
    }
};

/// Euler path with velocities chosen in F(x); every accepted step's velocity
/// passes the gauge membership test with tol 1e-6. Points are wrapped.
std::vector<Vec> integrate_trajectory(const VectorFieldSpec& spec, const Vec& x0,
                                      const TrajectorySelector& selector, double T, double dt);

/// Outer-normal statistics over the trapped component's boundary cells. The
/// normal comes from a box-smoothed indicator; cells where the smoothed
/// gradient vanishes are skipped and counted.
struct BoundaryNormalStats {
    std::int64_t boundary_cell_count = 0;
    std::int64_t skipped_cells = 0;  // no usable normal
    double tol = 0.25;
    double fraction_inflow = 0.0;  // n.V <= -1 + tol
    double fraction_speed = 0.0;   // |V| >= 1 - tol
    std::vector<double> normal_dot_v;
    std::vector<double> speed;
};

BoundaryNormalStats boundary_normal_check(const InvariantSetReport& report,
                                          const VectorFieldSpec& spec, double tol = 0.25);

}  // namespace ghom

#endif
