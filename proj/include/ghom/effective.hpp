#ifndef GHOM_EFFECTIVE_HPP
#define GHOM_EFFECTIVE_HPP

#include <string>
#include <utility>
#include <vector>

#include "ghom/field.hpp"
#include "ghom/grid.hpp"
#include "ghom/parallel.hpp"

namespace ghom {

/// One cell-problem evaluation at truncation k.
struct KEvaluation {
    int k = 0;
    double value = 0.0;
    std::string route;  // "cycles" or "pde"
    int iterations = 0;
};

/// Effective Hamiltonian evaluation at a single momentum P.
struct EffectiveResult {
    Vec P{};
    double lower = 0.0;  // min_x H(x, P)
    double upper = 0.0;  // max_x H(x, P)
    std::vector<KEvaluation> sequence;
    double limit = 0.0;
    double route_gap = 0.0;  // |cycles - pde| at the audited truncation
    bool stabilized = false;
};

struct EffectiveOptions {
    double tol = 1e-2;            // stop when consecutive k-values agree this well
    double bisection_tol = 0.0;   // 0 = auto: 1e-3 * (upper - lower + 1)
    int k_max = 32;
    int stencil_radius = 3;
    bool audit_pde = true;        // rerun the final truncation through the PDE route
    double pde_T = 20.0;
    double cfl = 0.5;
};

/// Grid extrema of H(x, P) = |P| + P.V(x); they bracket the effective value.
std::pair<double, double> effective_bounds(const VectorFieldSpec& spec, const Vec& P,
                                           const TorusGrid& grid);

struct KRouteResult {
    double value = 0.0;
    int iterations = 0;
    bool clipped_at_lower = false;  // no negative cycle even at the bracket bottom
    bool inflated_upper = false;    // bracket top had to be pushed up once
};

/// H_k-effective value by bisection on the level: the smallest level at which
/// the tilted truncated metric has no negative cycle.
KRouteResult effective_k_cycles(const VectorFieldSpec& spec, const Vec& P, int k,
                                const TorusGrid& grid, double tol, int stencil_radius = 3,
                                Exec mode = Exec::Parallel);

/// H_k-effective value from the large-time limit of the cell problem
/// w_t + H_k(x, P + Dw) = 0: runs a Lax-Friedrichs march to time T and takes
/// -(w(T) - w(T/2)) / (T/2) averaged over cells.  The dissipation term is
/// first order in the spacing, so when every resolution is even (and at least
/// 8) the march is repeated on the half-resolution grid and the two rates are
/// Richardson-extrapolated.  The per-cell spread of the rate is the
/// convergence indicator; spread > 10 * tol aborts.
KRouteResult effective_k_pde(const VectorFieldSpec& spec, const Vec& P, int k,
                             const TorusGrid& grid, double T, double tol = 1e-2, double cfl = 0.5,
                             Exec mode = Exec::Parallel);

/// Doubling-k schedule driving effective_k_cycles until two consecutive values
/// agree within tol; optional PDE audit at the final truncation.
EffectiveResult effective_hamiltonian(const VectorFieldSpec& spec, const Vec& P,
                                      const TorusGrid& grid, const EffectiveOptions& opts = {},
                                      Exec mode = Exec::Parallel);

/// Half-space representation of {v : v.P <= effective(P)} over a direction fan.
struct WulffSet {
    int dim = 2;
    std::vector<Vec> directions;
    std::vector<double> values;

    bool contains(const Vec& v, double tol = 1e-9) const;
};

WulffSet wulff_set(const VectorFieldSpec& spec, const TorusGrid& grid, int direction_count,
                   const EffectiveOptions& opts = {}, Exec mode = Exec::Parallel);

/// Approximate corrector: the tilted truncated distance field from a base cell
/// picked by a near-critical cycle heuristic.  `level` should be the
/// H_k-effective value at P as produced by the cycles route.
GridFunction corrector_field(const VectorFieldSpec& spec, const TorusGrid& grid, const Vec& P,
                             int k, double level, int stencil_radius = 3,
                             Exec mode = Exec::Parallel);

}  // namespace ghom

#endif
