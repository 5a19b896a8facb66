#pragma once

#include <cstdint>
#include <vector>

#include "ghom/effective.hpp"
#include "ghom/field.hpp"
#include "ghom/grid.hpp"
#include "ghom/parallel.hpp"

namespace ghom {

/// Bounded, uniformly continuous initial data on the torus of side `period`.
struct InitialData {
    enum class Kind { Cone, Smooth, Plateau };

    Kind kind = Kind::Cone;
    int dim = 2;
    std::vector<Vec> centers;
    double cap = kInf;    // plateau height; cones are uncapped
    double offset = 0.0;  // additive constant, for shift tests

    /// Periodicized distance to a single center.
    static InitialData cone(int dim, const Vec& center);
    /// Fixed trigonometric hill, values in [0, 1].
    static InitialData smooth(int dim);
    /// Minimum of cones, clipped at a common height.
    static InitialData plateau(int dim, const std::vector<Vec>& centers, double cap);

    double eval(const Vec& x, double period = 1.0) const;
};

struct SolverConfig {
    double epsilon = 1.0;          // fast-variable scale in V(x/epsilon)
    double cfl = 0.5;
    double T = 1.0;
    std::int64_t resolution = 64;  // cells per unit length
    int domain_size = 1;           // torus side length
    int audit_cells = 100;         // monotonicity spot checks on the first step
    std::uint64_t audit_seed = 0x2545f4914f6cdd1dull;
};

struct OscillatorySolution {
    int dim = 0;
    std::int64_t side = 0;  // cells per axis = domain_size * resolution
    double h = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> snapshots;  // one layer per requested time
    std::int64_t steps = 0;
};

/// March u_t + |Du| + Du.V(x/eps) = 0 from the sampled initial data and
/// record the layer at each requested time.  The gradient norm uses the
/// Godunov upwind form sqrt(sum max(D-,0)^2 + min(D+,0)^2); the drift term
/// upwinds each axis by the sign of V.  Steps land exactly on the requested
/// times.  The first step is audited for monotonicity by perturbing
/// `audit_cells` random cells.
OscillatorySolution solve_oscillatory(const VectorFieldSpec& spec, const InitialData& u0,
                                      const SolverConfig& config,
                                      const std::vector<double>& times,
                                      Exec mode = Exec::Parallel);

/// Radial description of the convex body W = {v : v.u_d <= value_d for all
/// d}: boundary points (dense fan plus polygon vertices in 2-D), each read as
/// the segment from the origin, which covers W since it is star-shaped.
struct WulffSamples {
    int dim = 0;
    std::vector<Vec> points;
};

WulffSamples wulff_samples(const WulffSet& wulff);

/// min over v in the sampled W of u0(x - t v): the Hopf-Lax solution of
/// u_t + support_W(Du) = 0.  The minimum runs over whole radial segments
/// [0, t v]: exactly (point-to-segment distance) for cone and plateau data,
/// by line search for smooth data.  Segment nesting makes the value
/// nonincreasing in t.
double hopf_lax(const InitialData& u0, const WulffSamples& samples, const Vec& x, double t,
                double period = 1.0);

double solve_homogenized(const InitialData& u0, const WulffSet& wulff, const Vec& x, double t,
                         double period = 1.0);

struct HomogenizationRow {
    double epsilon = 0.0;
    double error = 0.0;  // max over the coarse lattice at T/2 and T
    double ratio = 0.0;  // error / previous error; 0 on the first row
    std::vector<double> time_errors;  // per snapshot time, aligned with table times
};

struct HomogenizationTable {
    std::vector<double> times;  // snapshot times {T/2, T}
    std::vector<HomogenizationRow> rows;
};

/// For each epsilon, solve the fast-field problem on the unit torus and
/// compare with the Hopf-Lax limit on an every-8th-cell lattice at times
/// T/2 and T.  The Wulff body is passed in so its cell problems are solved
/// once and shared across experiments.
HomogenizationTable homogenization_experiment(const VectorFieldSpec& spec, const InitialData& u0,
                                              const std::vector<double>& eps_list, double T,
                                              std::int64_t resolution, const WulffSet& wulff,
                                              double cfl = 0.5, Exec mode = Exec::Parallel);

}  // namespace ghom
