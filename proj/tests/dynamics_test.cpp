#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "ghom/dynamics.hpp"
#include "ghom/errors.hpp"
#include "ghom/field.hpp"
#include "ghom/grid.hpp"

using namespace ghom;

namespace {

Vec vec2(double a, double b) {
    Vec v{};
    v[0] = a;
    v[1] = b;
    return v;
}

VectorFieldSpec sink2(double amplitude = 2.0) {
    return VectorFieldSpec::sink(2, amplitude, vec2(0.5, 0.5));
}

int find_offset(const ReachabilityGraph& g, std::int64_t o0, std::int64_t o1) {
    for (std::size_t i = 0; i < g.stencil.size(); ++i)
        if (g.stencil[i][0] == o0 && g.stencil[i][1] == o1) return static_cast<int>(i);
    return -1;
}

}  // namespace

TEST_CASE("stencil enumeration") {
    CHECK(make_stencil(2, 1).size() == 8);
    CHECK(make_stencil(2, 2).size() == 24);
    CHECK(make_stencil(3, 2).size() == 124);

    const auto stencil = make_stencil(2, 2);
    CHECK(stencil.front()[0] == -2);
    CHECK(stencil.front()[1] == -2);
    CHECK(stencil.back()[0] == 2);
    CHECK(stencil.back()[1] == 2);
    // closed under negation
    for (const IVec& o : stencil) {
        bool found = false;
        for (const IVec& p : stencil) found = found || (p[0] == -o[0] && p[1] == -o[1]);
        CHECK(found);
    }
    CHECK_THROWS_AS(make_stencil(2, 0), ConfigError);
}

TEST_CASE("zero field: complete stencil, one component") {
    const VectorFieldSpec spec = VectorFieldSpec::constant(2, vec2(0, 0));
    TorusGrid grid(2, {32, 32});
    for (const GraphSide side : {GraphSide::Inner, GraphSide::Outer}) {
        const ReachabilityGraph g = build_reachability_graph(spec, grid, 0.3, side);
        CHECK(g.edge_count() == grid.cells() * 24);
        const InvariantSetReport report = detect_invariant_sets(g);
        CHECK(report.component_count == 1);
        CHECK(report.weak_component_count == 1);
        CHECK_FALSE(report.proper_invariant_found);
        CHECK(report.trapped_component == -1);
        CHECK_THROWS_AS(boundary_normal_check(report, spec), ConfigError);
    }
}

TEST_CASE("constant advection (2,0): cone edges, still no invariant set") {
    const VectorFieldSpec spec = VectorFieldSpec::constant(2, vec2(2, 0));
    TorusGrid grid(2, {32, 32});
    for (const GraphSide side : {GraphSide::Inner, GraphSide::Outer}) {
        const ReachabilityGraph g = build_reachability_graph(spec, grid, 0.1, side);
        const int back = find_offset(g, -1, 0);
        const int fwd = find_offset(g, 1, 0);
        const int knight = find_offset(g, 2, 1);
        for (std::int64_t cell = 0; cell < grid.cells(); cell += 97) {
            CHECK_FALSE(g.edge(cell, back));
            CHECK(g.edge(cell, fwd));
            CHECK(g.edge(cell, knight));
        }
        const InvariantSetReport report = detect_invariant_sets(g);
        CHECK(report.component_count == 1);
        CHECK_FALSE(report.proper_invariant_found);
    }
}

TEST_CASE("inner edges are a subset of outer edges") {
    TorusGrid grid(2, {48, 48});
    const VectorFieldSpec spec = sink2();
    const ReachabilityGraph inner = build_reachability_graph(spec, grid, 0.1, GraphSide::Inner);
    const ReachabilityGraph outer = build_reachability_graph(spec, grid, 0.1, GraphSide::Outer);
    REQUIRE(inner.adjacency.size() == outer.adjacency.size());
    for (std::size_t i = 0; i < inner.adjacency.size(); ++i) {
        if (inner.adjacency[i]) CHECK(outer.adjacency[i]);
    }
}

TEST_CASE("sink traps a component around its center") {
    TorusGrid grid(2, {64, 64});
    const VectorFieldSpec spec = sink2();
    const ReachabilityGraph inner = build_reachability_graph(spec, grid, 0.1, GraphSide::Inner);
    const ReachabilityGraph outer = build_reachability_graph(spec, grid, 0.1, GraphSide::Outer);
    const InvariantSetReport rin = detect_invariant_sets(inner);
    const InvariantSetReport rout = detect_invariant_sets(outer);

    CHECK(rin.proper_invariant_found);
    CHECK(rout.proper_invariant_found);
    CHECK(rin.component_count >= rout.component_count);
    CHECK(rin.weak_component_count >= rout.weak_component_count);

    // The undirected closure glues the basin to the trap: the split is a
    // directed phenomenon.
    CHECK(rin.weak_component_count == 1);

    REQUIRE(rin.trapped_component >= 0);
    CHECK(rin.closed[rin.trapped_component]);
    const std::int64_t center_cell = grid.index(grid.locate(vec2(0.5, 0.5)));
    CHECK(rin.labels[center_cell] == rin.trapped_component);
    CHECK(rout.labels[center_cell] == rout.trapped_component);

    // components partition the cells; volumes add to the torus volume
    std::int64_t total = 0;
    for (const auto& comp : rin.components) total += static_cast<std::int64_t>(comp.size());
    CHECK(total == grid.cells());
    double vol = 0.0;
    for (const double v : rin.volumes) vol += v;
    CHECK(vol == doctest::Approx(1.0).epsilon(1e-12));

    const BoundaryNormalStats stats = boundary_normal_check(rin, spec);
    CHECK(stats.boundary_cell_count > 0);
    CHECK(stats.skipped_cells == 0);
    std::printf("[regression] sink 64^2 inner: scc=%lld weak=%lld trapped_cells=%zu "
                "boundary=%lld inflow=%.4f speed=%.4f\n",
                static_cast<long long>(rin.component_count),
                static_cast<long long>(rin.weak_component_count),
                rin.components[rin.trapped_component].size(),
                static_cast<long long>(stats.boundary_cell_count), stats.fraction_inflow,
                stats.fraction_speed);
    CHECK(rin.component_count > 3600);
    CHECK(rin.component_count < 3900);
    CHECK(rin.components[rin.trapped_component].size() > 56);
    CHECK(rin.components[rin.trapped_component].size() < 80);
    // 64^2 puts the certified trap boundary around |V| ~ 0.7-0.86, under the
    // 0.75 speed cut for some cells; one refinement clears both checks.
    CHECK(stats.fraction_inflow >= 0.4);
    CHECK(stats.fraction_speed >= 0.4);

    TorusGrid fine(2, {128, 128});
    const InvariantSetReport rfine =
        detect_invariant_sets(build_reachability_graph(spec, fine, 0.1, GraphSide::Inner));
    const BoundaryNormalStats sfine = boundary_normal_check(rfine, spec);
    CHECK(sfine.skipped_cells == 0);
    CHECK(sfine.fraction_inflow >= 0.95);
    CHECK(sfine.fraction_speed >= 0.95);
}

TEST_CASE("shear stays strongly connected at eta = 0.1") {
    TorusGrid grid(2, {64, 64});
    const VectorFieldSpec spec = VectorFieldSpec::shear_sin(2, 0, 2.0);
    for (const GraphSide side : {GraphSide::Inner, GraphSide::Outer}) {
        const ReachabilityGraph g = build_reachability_graph(spec, grid, 0.1, side);
        const InvariantSetReport report = detect_invariant_sets(g);
        CHECK(report.component_count == 1);
        CHECK(report.weak_component_count == 1);
        CHECK_FALSE(report.proper_invariant_found);
    }
}

TEST_CASE("cellular flow: inner and outer graphs differ on a band") {
    TorusGrid grid(2, {64, 64});
    const VectorFieldSpec spec = VectorFieldSpec::cellular(2.0);
    const ReachabilityGraph inner = build_reachability_graph(spec, grid, 0.05, GraphSide::Inner);
    const ReachabilityGraph outer = build_reachability_graph(spec, grid, 0.05, GraphSide::Outer);
    std::int64_t differing_cells = 0;
    for (std::int64_t cell = 0; cell < grid.cells(); ++cell) {
        bool differs = false;
        for (std::size_t oi = 0; oi < inner.stencil.size(); ++oi)
            differs = differs || inner.edge(cell, oi) != outer.edge(cell, oi);
        differing_cells += differs;
    }
    std::printf("[regression] cellular 64^2 eta=0.05: differing_cells=%lld max_samples=%d\n",
                static_cast<long long>(differing_cells), inner.max_edge_samples);
    CHECK(differing_cells > 3000);
    CHECK(differing_cells < 4000);
    CHECK(inner.max_edge_samples == 7);
}

TEST_CASE("margin precondition rejects hopeless eta/grid combinations") {
    TorusGrid grid(2, {64, 64});
    const VectorFieldSpec spec = VectorFieldSpec::cellular(2.0);
    CHECK_THROWS_AS(build_reachability_graph(spec, grid, 5e-4, GraphSide::Inner), ConfigError);
    CHECK_THROWS_AS(build_reachability_graph(spec, grid, 0.0, GraphSide::Inner), ConfigError);
    CHECK_THROWS_AS(build_reachability_graph(spec, grid, 1.0, GraphSide::Inner), ConfigError);

    TorusGrid grid3(3, {8, 8, 8});
    CHECK_THROWS_AS(build_reachability_graph(spec, grid3, 0.1, GraphSide::Inner), ConfigError);
}

TEST_CASE("drift trajectory in a constant field is a straight line") {
    const VectorFieldSpec spec = VectorFieldSpec::constant(2, vec2(2, 0));
    const Vec x0 = vec2(0.1, 0.4);
    const auto path = integrate_trajectory(spec, x0, TrajectorySelector::drift(), 0.1, 1e-3);
    REQUIRE(path.size() == 101);
    const Vec& end = path.back();
    CHECK(end[0] == doctest::Approx(0.4).epsilon(1e-9));  // speed |V| + 1 = 3
    CHECK(end[1] == doctest::Approx(0.4).epsilon(1e-12));

    CHECK_THROWS_AS(integrate_trajectory(spec, x0, TrajectorySelector::drift(), 0.1, 0.0),
                    ConfigError);
    CHECK_THROWS_AS(integrate_trajectory(spec, x0, TrajectorySelector::drift(), 0.01, 0.1),
                    ConfigError);
}

TEST_CASE("Euler drift converges at first order") {
    // Smooth field with |V| bounded away from zero, so the drift velocity
    // V (1 + 1/|V|) is smooth along the whole path.
    std::vector<TrigTerm> terms(3);
    terms[0].comp = 0;
    terms[0].is_sin = false;
    terms[0].coef = 1.5;
    terms[1].comp = 0;
    terms[1].is_sin = true;
    terms[1].k[1] = 1;
    terms[1].coef = 0.5;
    terms[2].comp = 1;
    terms[2].is_sin = false;
    terms[2].coef = 0.3;
    const VectorFieldSpec spec = VectorFieldSpec::trig_poly(2, terms);
    const Vec x0 = vec2(0.3, 0.15);
    const double T = 1.0;
    auto endpoint = [&](double dt) {
        return integrate_trajectory(spec, x0, TrajectorySelector::drift(), T, dt).back();
    };
    const Vec ref = endpoint(T / 4096.0);
    const double e1 = torus_distance(2, endpoint(T / 64.0), ref);
    const double e2 = torus_distance(2, endpoint(T / 128.0), ref);
    const double e3 = torus_distance(2, endpoint(T / 256.0), ref);
    CHECK(e1 / e2 > 1.5);
    CHECK(e1 / e2 < 2.6);
    CHECK(e2 / e3 > 1.5);
    CHECK(e2 / e3 < 2.6);
}

TEST_CASE("steered trajectory reaches a target through V = 0") {
    const VectorFieldSpec spec = VectorFieldSpec::constant(2, vec2(0, 0));
    const Vec x0 = vec2(0.2, 0.2);
    const Vec target = vec2(0.4, 0.1);
    const auto path =
        integrate_trajectory(spec, x0, TrajectorySelector::steered(target), 0.5, 0.01);
    CHECK(torus_distance(2, path.back(), target) <= 1e-9);
    // monotone approach
    for (std::size_t i = 1; i < path.size(); ++i) {
        CHECK(torus_distance(2, path[i], target) <=
              torus_distance(2, path[i - 1], target) + 1e-12);
    }
}

TEST_CASE("no trajectory escapes the detected trap") {
    TorusGrid grid(2, {128, 128});
    const VectorFieldSpec spec = sink2();
    const ReachabilityGraph outer = build_reachability_graph(spec, grid, 0.1, GraphSide::Outer);
    const InvariantSetReport report = detect_invariant_sets(outer);
    REQUIRE(report.proper_invariant_found);
    const std::int32_t trap = report.trapped_component;
    REQUIRE(trap >= 0);

    const Vec start = vec2(0.5, 0.5);
    for (const auto& sel :
         {TrajectorySelector::steered(vec2(0.05, 0.05)), TrajectorySelector::drift()}) {
        const auto path = integrate_trajectory(spec, start, sel, 50.0, 0.01);
        for (const Vec& p : path) {
            REQUIRE(report.labels[grid.index(grid.locate(p))] == trap);
        }
    }
}

TEST_CASE("graph construction is identical serial and parallel") {
    TorusGrid grid(2, {24, 24});
    const VectorFieldSpec spec = sink2();
    const ReachabilityGraph a =
        build_reachability_graph(spec, grid, 0.2, GraphSide::Inner, 2, Exec::Serial);
    const ReachabilityGraph b =
        build_reachability_graph(spec, grid, 0.2, GraphSide::Inner, 2, Exec::Parallel);
    CHECK(a.adjacency == b.adjacency);
}
