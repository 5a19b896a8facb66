#ifndef GHOM_GEOMETRY_HPP
#define GHOM_GEOMETRY_HPP

#include "ghom/field.hpp"
#include "ghom/grid.hpp"

namespace ghom {

// Control set F_delta(x) = conv(B(V(x), delta) ∪ {0}); radius must lie in (0, 1].
struct ControlSetQuery {
    int dim = 0;
    Vec center{};     // V(x)
    double radius = 1.0;
};

// Result of a support-function evaluation.  When the value is finite and
// positive, `direction` holds the unit direction of the maximizing momentum.
struct SupportValue {
    double value = 0.0;
    bool has_direction = false;
    Vec direction{};
};

// H(x,p) = |p| + p.V
double hamiltonian(int dim, const Vec& v, const Vec& p);
double hamiltonian(const VectorFieldSpec& spec, const Vec& x, const Vec& p);

// H_k(x,p) = max{H(x,p), -k} + max{|p| - k, 0}, k >= 1
double coercive_hamiltonian(int dim, const Vec& v, const Vec& p, int k);
double coercive_hamiltonian(const VectorFieldSpec& spec, const Vec& x, const Vec& p, int k);

// Smallest s >= 0 with |q - s v| <= s * delta, or +inf when no such s exists.
// This is the Minkowski gauge of conv(B(v, delta) ∪ {0}) at q.
double gauge_radius(int dim, const Vec& v, double delta, const Vec& q);

// Support function of Z(x) = {p : H(x,p) <= 1}.  Equals the gauge of the
// control set at radius 1; +inf exactly when q lies outside the closure of
// the cone spanned by B(v,1).
SupportValue support_sigma(int dim, const Vec& v, const Vec& q);
SupportValue support_sigma(const VectorFieldSpec& spec, const Vec& x, const Vec& q);

// True iff q ∈ (1+tol) F_delta(x), i.e. the gauge of q is at most 1 + tol.
bool gauge_membership(const ControlSetQuery& query, const Vec& q, double tol);

// True iff H(x,p) <= 0, i.e. p lies in the recession cone of Z(x).
bool recession_cone_contains(int dim, const Vec& v, const Vec& p);
bool recession_cone_contains(const VectorFieldSpec& spec, const Vec& x, const Vec& p);

// Largest r >= 0 with H_k(r u) <= a along a ray of direction u, expressed
// through c = 1 + u.V.  Piecewise-linear analysis; always finite for a >= 0.
double truncated_ray_radius(double c, int k, double a);

// Support function of the compact sublevel set {p : H_k(x,p) <= a}, a >= 0.
// Evaluated as max over sampled unit directions u of truncated_ray_radius * (u.q),
// with one local golden-section refinement around the best sample.
double support_sigma_truncated(int dim, const Vec& v, int k, double a, const Vec& q);
double support_sigma_truncated(const VectorFieldSpec& spec, const Vec& x, int k, double a,
                               const Vec& q);

}  // namespace ghom

#endif
