#ifndef GHOM_FIELD_HPP
#define GHOM_FIELD_HPP

#include <string>
#include <vector>

#include "ghom/grid.hpp"

namespace ghom {

/// One Fourier term coef * sin(2 pi k.x) or coef * cos(2 pi k.x) feeding
/// component `comp` of the field.
struct TrigTerm {
    int comp = 0;
    bool is_sin = true;
    IVec k{};
    double coef = 0.0;
};

/// Symbolic periodic Lipschitz vector field with analytic divergence and
/// Jacobian. Custom fields enter only as trigonometric polynomials, so
/// periodicity and smoothness hold by construction.
class VectorFieldSpec {
  public:
    enum class Kind { Constant, Shear, Cellular, Sink, TrigPoly };

    static VectorFieldSpec constant(int dim, const Vec& c);
    /// V = amplitude * profile(x_t) * e_axis with x_t the next axis (mod dim).
    static VectorFieldSpec shear(int dim, int axis, double amplitude,
                                 const std::vector<TrigTerm>& profile);
    /// Convenience: single-mode sine profile.
    static VectorFieldSpec shear_sin(int dim, int axis, double amplitude, int mode = 1);
    static VectorFieldSpec cellular(double amplitude);  // dim 2
    static VectorFieldSpec sink(int dim, double amplitude, const Vec& center);
    static VectorFieldSpec trig_poly(int dim, const std::vector<TrigTerm>& terms);

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    std::string kind_name() const;

    Vec eval(const Vec& x) const;
    double divergence(const Vec& x) const;
    /// J[i][j] = dV_i/dx_j.
    void jacobian(const Vec& x, double J[kMaxDim][kMaxDim]) const;

  private:
    VectorFieldSpec() = default;

    Kind kind_ = Kind::Constant;
    int dim_ = 2;
    Vec param_vec_{};                // constant value or sink center
    double amplitude_ = 0.0;
    int axis_ = 0;                   // shear flow axis (0-based)
    int transverse_ = 1;
    std::vector<TrigTerm> terms_;    // shear profile or trig_poly terms
};

struct AssumptionReport {
    double divergence_norm = 0.0;  // ||div V||_{L^N(T^N)}
    double threshold = 0.0;        // 1/chi
    double lipschitz_bound = 0.0;  // L_V (5% inflated grid estimate)
    double sup_norm = 0.0;         // M_V (5% inflated grid estimate)
    bool passes_A2 = false;
    bool coercive_everywhere = false;  // M_V < 1
};

/// Small-side isoperimetric constant used by default: the larger of the
/// disc/ball and half-torus slab ratios, which for the flat torus is the slab
/// value 2^(1/N - 2). For N=2 this is 1/(2 sqrt 2).
double default_chi(int dim);

/// Midpoint-rule quadrature of |div V|^N over the torus, N-th root taken.
double divergence_norm(const VectorFieldSpec& spec, const TorusGrid& grid);

/// Populate the (A1)-(A2) report: quadrature divergence norm against 1/chi,
/// grid-maximized Jacobian/sup estimates inflated by 1.05.
AssumptionReport check_assumptions(const VectorFieldSpec& spec, double chi, const TorusGrid& grid);

}  // namespace ghom

#endif
