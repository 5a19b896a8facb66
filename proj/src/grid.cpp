#include "ghom/grid.hpp"

#include <cmath>

#include "ghom/errors.hpp"

namespace ghom {

TorusGrid::TorusGrid(int dimension, const std::vector<std::int64_t>& resolution) : dim_(dimension) {
    if (dimension < 1 || dimension > kMaxDim)
        throw ConfigError("grid dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                          std::to_string(dimension));
    if (static_cast<int>(resolution.size()) != dimension)
        throw ConfigError("grid resolution list has " + std::to_string(resolution.size()) +
                          " entries for dimension " + std::to_string(dimension));
    cells_ = 1;
    for (int a = 0; a < dimension; ++a) {
        if (resolution[a] < 4)
            throw ConfigError("grid resolution must be >= 4 per axis, got " +
                              std::to_string(resolution[a]));
        res_[a] = resolution[a];
        h_[a] = 1.0 / static_cast<double>(resolution[a]);
        cells_ *= resolution[a];
    }
    // Row-major, last axis fastest.
    std::int64_t s = 1;
    for (int a = dimension - 1; a >= 0; --a) {
        stride_[a] = s;
        s *= res_[a];
    }
}

Vec TorusGrid::wrap_point(const Vec& x) const {
    Vec y{};
    for (int a = 0; a < dim_; ++a) {
        double v = x[a] - std::floor(x[a]);
        if (v >= 1.0) v = 0.0;  // floor rounding at negative values very close to an integer
        y[a] = v;
    }
    return y;
}

IVec TorusGrid::wrap_coord(const IVec& c) const {
    IVec w{};
    for (int a = 0; a < dim_; ++a) {
        std::int64_t m = c[a] % res_[a];
        if (m < 0) m += res_[a];
        w[a] = m;
    }
    return w;
}

std::int64_t TorusGrid::index(const IVec& c) const {
    std::int64_t idx = 0;
    for (int a = 0; a < dim_; ++a) idx += c[a] * stride_[a];
    return idx;
}

IVec TorusGrid::coord(std::int64_t idx) const {
    IVec c{};
    for (int a = 0; a < dim_; ++a) {
        c[a] = idx / stride_[a];
        idx -= c[a] * stride_[a];
    }
    return c;
}

Vec TorusGrid::center(const IVec& c) const {
    Vec x{};
    for (int a = 0; a < dim_; ++a) x[a] = (static_cast<double>(c[a]) + 0.5) * h_[a];
    return x;
}

IVec TorusGrid::locate(const Vec& x) const {
    const Vec w = wrap_point(x);
    IVec c{};
    for (int a = 0; a < dim_; ++a) {
        auto i = static_cast<std::int64_t>(std::floor(w[a] * static_cast<double>(res_[a])));
        if (i >= res_[a]) i = res_[a] - 1;
        if (i < 0) i = 0;
        c[a] = i;
    }
    return c;
}

bool TorusGrid::same_shape(const TorusGrid& other) const {
    if (dim_ != other.dim_) return false;
    for (int a = 0; a < dim_; ++a)
        if (res_[a] != other.res_[a]) return false;
    return true;
}

bool GridFunction::has_infinite() const {
    for (double v : values_)
        if (v == kInf) return true;
    return false;
}

double GridFunction::min() const {
    double m = kInf;
    for (double v : values_)
        if (v < m) m = v;
    return m;
}

double GridFunction::max() const {
    double m = -kInf;
    for (double v : values_)
        if (v > m) m = v;
    return m;
}

std::vector<IVec> make_stencil(int dim, int radius) {
    if (dim < 1 || dim > kMaxDim) throw ConfigError("stencil dimension out of range");
    if (radius < 1) throw ConfigError("stencil radius must be at least 1");
    const std::int64_t width = 2 * radius + 1;
    std::int64_t combos = 1;
    for (int a = 0; a < dim; ++a) combos *= width;
    std::vector<IVec> out;
    out.reserve(static_cast<std::size_t>(combos - 1));
    for (std::int64_t m = 0; m < combos; ++m) {
        IVec o{};
        std::int64_t t = m;
        for (int a = dim - 1; a >= 0; --a) {
            o[a] = t % width - radius;
            t /= width;
        }
        bool zero = true;
        for (int a = 0; a < dim; ++a) zero = zero && o[a] == 0;
        if (!zero) out.push_back(o);
    }
    return out;
}

Vec torus_delta(int dim, const Vec& x, const Vec& y) {
    Vec d{};
    for (int a = 0; a < dim; ++a) {
        double v = y[a] - x[a];
        v -= std::round(v);
        d[a] = v;
    }
    return d;
}

double torus_distance(int dim, const Vec& x, const Vec& y) {
    const Vec d = torus_delta(dim, x, y);
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += d[a] * d[a];
    return std::sqrt(s);
}

}  // namespace ghom
