#ifndef GHOM_GRID_HPP
#define GHOM_GRID_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace ghom {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kMaxDim = 4;

using Vec = std::array<double, kMaxDim>;
using IVec = std::array<std::int64_t, kMaxDim>;

/// Uniform cell-centered periodic lattice on [0,1)^N.
class TorusGrid {
  public:
    TorusGrid(int dimension, const std::vector<std::int64_t>& resolution);

    int dim() const { return dim_; }
    std::int64_t res(int axis) const { return res_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    std::int64_t cells() const { return cells_; }

    /// Reduce a point to its representative in [0,1)^N (differs by an integer vector).
    Vec wrap_point(const Vec& x) const;

    /// Component-wise wrap of integer cell coordinates.
    IVec wrap_coord(const IVec& c) const;

    std::int64_t index(const IVec& c) const;       // coordinates already in range
    std::int64_t index_wrapped(const IVec& c) const { return index(wrap_coord(c)); }
    IVec coord(std::int64_t idx) const;
    Vec center(const IVec& c) const;
    Vec center(std::int64_t idx) const { return center(coord(idx)); }

    /// Cell containing x (x wrapped first).
    IVec locate(const Vec& x) const;

    bool same_shape(const TorusGrid& other) const;

  private:
    int dim_;
    IVec res_{};
    Vec h_{};
    IVec stride_{};
    std::int64_t cells_;
};

/// Scalar field over a TorusGrid; values live in R together with +inf,
/// which must survive min/plus algebra without turning into NaN.
class GridFunction {
  public:
    explicit GridFunction(const TorusGrid& grid, double fill = 0.0)
        : grid_(&grid), values_(static_cast<std::size_t>(grid.cells()), fill) {}

    const TorusGrid& grid() const { return *grid_; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

    double& operator[](std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
    double at(const IVec& c) const { return values_[static_cast<std::size_t>(grid_->index_wrapped(c))]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool has_infinite() const;
    double min() const;
    double max() const;

  private:
    const TorusGrid* grid_;
    std::vector<double> values_;
};

/// All nonzero integer offsets with Chebyshev norm <= radius, in lexicographic
/// order. The fixed order makes every stencil loop reproducible.
std::vector<IVec> make_stencil(int dim, int radius);

/// Shortest torus displacement from x to y (per-axis representative in [-1/2, 1/2)).
Vec torus_delta(int dim, const Vec& x, const Vec& y);

/// Euclidean torus distance.
double torus_distance(int dim, const Vec& x, const Vec& y);

inline double vec_dot(int dim, const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}

inline double vec_norm(int dim, const Vec& a) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * a[i];
    return std::sqrt(s);
}

}  // namespace ghom

#endif
