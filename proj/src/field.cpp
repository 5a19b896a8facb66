#include "ghom/field.hpp"

#include <cmath>

#include "ghom/errors.hpp"

namespace ghom {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap01(double v) {
    double w = v - std::floor(v);
    if (w >= 1.0) w = 0.0;
    return w;
}
}  // namespace

VectorFieldSpec VectorFieldSpec::constant(int dim, const Vec& c) {
    VectorFieldSpec s;
    s.kind_ = Kind::Constant;
    s.dim_ = dim;
    s.param_vec_ = c;
    return s;
}

VectorFieldSpec VectorFieldSpec::shear(int dim, int axis, double amplitude,
                                       const std::vector<TrigTerm>& profile) {
    if (axis < 0 || axis >= dim) throw ConfigError("shear axis out of range");
    if (profile.empty()) throw ConfigError("shear profile needs at least one term");
    VectorFieldSpec s;
    s.kind_ = Kind::Shear;
    s.dim_ = dim;
    s.axis_ = axis;
    s.transverse_ = (axis + 1) % dim;
    s.amplitude_ = amplitude;
    s.terms_ = profile;
    return s;
}

VectorFieldSpec VectorFieldSpec::shear_sin(int dim, int axis, double amplitude, int mode) {
    TrigTerm t;
    t.comp = axis;
    t.is_sin = true;
    t.k = IVec{};
    t.k[0] = mode;  // mode count along the transverse variable; see eval()
    t.coef = 1.0;
    return shear(dim, axis, amplitude, {t});
}

VectorFieldSpec VectorFieldSpec::cellular(double amplitude) {
    VectorFieldSpec s;
    s.kind_ = Kind::Cellular;
    s.dim_ = 2;
    s.amplitude_ = amplitude;
    return s;
}

VectorFieldSpec VectorFieldSpec::sink(int dim, double amplitude, const Vec& center) {
    VectorFieldSpec s;
    s.kind_ = Kind::Sink;
    s.dim_ = dim;
    s.amplitude_ = amplitude;
    s.param_vec_ = center;
    return s;
}

VectorFieldSpec VectorFieldSpec::trig_poly(int dim, const std::vector<TrigTerm>& terms) {
    for (const auto& t : terms)
        if (t.comp < 0 || t.comp >= dim) throw ConfigError("trig_poly term component out of range");
    VectorFieldSpec s;
    s.kind_ = Kind::TrigPoly;
    s.dim_ = dim;
    s.terms_ = terms;
    return s;
}

std::string VectorFieldSpec::kind_name() const {
    switch (kind_) {
        case Kind::Constant: return "constant";
        case Kind::Shear: return "shear";
        case Kind::Cellular: return "cellular";
        case Kind::Sink: return "sink";
        case Kind::TrigPoly: return "trig_poly";
    }
    return "?";
}

Vec VectorFieldSpec::eval(const Vec& x_in) const {
    Vec x{};
    for (int a = 0; a < dim_; ++a) x[a] = wrap01(x_in[a]);
    Vec v{};
    switch (kind_) {
        case Kind::Constant:
            v = param_vec_;
            break;
        case Kind::Shear: {
            const double t = x[transverse_];
            double p = 0.0;
            for (const auto& term : terms_) {
                const double ph = kTwoPi * static_cast<double>(term.k[0]) * t;
                p += term.coef * (term.is_sin ? std::sin(ph) : std::cos(ph));
            }
            v[axis_] = amplitude_ * p;
            break;
        }
        case Kind::Cellular: {
            const double s1 = std::sin(kTwoPi * x[0]), c1 = std::cos(kTwoPi * x[0]);
            const double s2 = std::sin(kTwoPi * x[1]), c2 = std::cos(kTwoPi * x[1]);
            v[0] = amplitude_ * s1 * c2;
            v[1] = -amplitude_ * c1 * s2;
            break;
        }
        case Kind::Sink:
            for (int a = 0; a < dim_; ++a)
                v[a] = -amplitude_ * std::sin(kTwoPi * (x[a] - param_vec_[a]));
            break;
        case Kind::TrigPoly:
            for (const auto& term : terms_) {
                double ph = 0.0;
                for (int a = 0; a < dim_; ++a) ph += static_cast<double>(term.k[a]) * x[a];
                ph *= kTwoPi;
                v[term.comp] += term.coef * (term.is_sin ? std::sin(ph) : std::cos(ph));
            }
            break;
    }
    return v;
}

double VectorFieldSpec::divergence(const Vec& x_in) const {
    Vec x{};
    for (int a = 0; a < dim_; ++a) x[a] = wrap01(x_in[a]);
    switch (kind_) {
        case Kind::Constant:
        case Kind::Shear:     // flow component depends on the transverse variable only
        case Kind::Cellular:  // the two terms cancel exactly
            return 0.0;
        case Kind::Sink: {
            double d = 0.0;
            for (int a = 0; a < dim_; ++a)
                d += -amplitude_ * kTwoPi * std::cos(kTwoPi * (x[a] - param_vec_[a]));
            return d;
        }
        case Kind::TrigPoly: {
            double d = 0.0;
            for (const auto& term : terms_) {
                double ph = 0.0;
                for (int a = 0; a < dim_; ++a) ph += static_cast<double>(term.k[a]) * x[a];
                ph *= kTwoPi;
                const double kc = kTwoPi * static_cast<double>(term.k[term.comp]);
                d += term.coef * kc * (term.is_sin ? std::cos(ph) : -std::sin(ph));
            }
            return d;
        }
    }
    return 0.0;
}

void VectorFieldSpec::jacobian(const Vec& x_in, double J[kMaxDim][kMaxDim]) const {
    Vec x{};
    for (int a = 0; a < dim_; ++a) x[a] = wrap01(x_in[a]);
    for (int i = 0; i < kMaxDim; ++i)
        for (int j = 0; j < kMaxDim; ++j) J[i][j] = 0.0;
    switch (kind_) {
        case Kind::Constant:
            break;
        case Kind::Shear: {
            const double t = x[transverse_];
            double dp = 0.0;
            for (const auto& term : terms_) {
                const double w = kTwoPi * static_cast<double>(term.k[0]);
                const double ph = w * t;
                dp += term.coef * w * (term.is_sin ? std::cos(ph) : -std::sin(ph));
            }
            J[axis_][transverse_] = amplitude_ * dp;
            break;
        }
        case Kind::Cellular: {
            const double s1 = std::sin(kTwoPi * x[0]), c1 = std::cos(kTwoPi * x[0]);
            const double s2 = std::sin(kTwoPi * x[1]), c2 = std::cos(kTwoPi * x[1]);
            J[0][0] = amplitude_ * kTwoPi * c1 * c2;
            J[0][1] = -amplitude_ * kTwoPi * s1 * s2;
            J[1][0] = amplitude_ * kTwoPi * s1 * s2;
            J[1][1] = -amplitude_ * kTwoPi * c1 * c2;
            break;
        }
        case Kind::Sink:
            for (int a = 0; a < dim_; ++a)
                J[a][a] = -amplitude_ * kTwoPi * std::cos(kTwoPi * (x[a] - param_vec_[a]));
            break;
        case Kind::TrigPoly:
            for (const auto& term : terms_) {
                double ph = 0.0;
                for (int a = 0; a < dim_; ++a) ph += static_cast<double>(term.k[a]) * x[a];
                ph *= kTwoPi;
                const double base = term.coef * (term.is_sin ? std::cos(ph) : -std::sin(ph));
                for (int j = 0; j < dim_; ++j)
                    J[term.comp][j] += base * kTwoPi * static_cast<double>(term.k[j]);
            }
            break;
    }
}

double default_chi(int dim) {
    // Slab of width 1/2: min-side volume (1/2)^((N-1)/N), perimeter 2.
    return std::pow(0.5, (static_cast<double>(dim) - 1.0) / static_cast<double>(dim)) / 2.0;
}

double divergence_norm(const VectorFieldSpec& spec, const TorusGrid& grid) {
    const int N = spec.dim();
    if (grid.dim() != N) throw ConfigError("divergence_norm: grid dimension mismatch");
    double cell_vol = 1.0;
    for (int a = 0; a < N; ++a) cell_vol *= grid.spacing(a);
    double acc = 0.0;
    for (std::int64_t i = 0; i < grid.cells(); ++i) {
        const double d = std::fabs(spec.divergence(grid.center(i)));
        acc += std::pow(d, static_cast<double>(N)) * cell_vol;
    }
    return std::pow(acc, 1.0 / static_cast<double>(N));
}

namespace {

// Largest singular value via power iteration on J^T J; deterministic start.
double operator_norm(const double J[kMaxDim][kMaxDim], int n) {
    double M[kMaxDim][kMaxDim] = {};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += J[k][i] * J[k][j];
            M[i][j] = s;
        }
    double v[kMaxDim];
    for (int i = 0; i < n; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(n));
    double lam = 0.0;
    for (int it = 0; it < 60; ++it) {
        double w[kMaxDim] = {};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[i] += M[i][j] * v[j];
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += w[i] * w[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
        lam = norm;
    }
    return std::sqrt(lam);
}

}  // namespace

AssumptionReport check_assumptions(const VectorFieldSpec& spec, double chi, const TorusGrid& grid) {
    if (!(chi > 0.0)) throw ConfigError("check_assumptions requires chi > 0");
    AssumptionReport r;
    r.threshold = 1.0 / chi;
    r.divergence_norm = divergence_norm(spec, grid);

    double lip = 0.0, sup = 0.0;
    double J[kMaxDim][kMaxDim];
    for (std::int64_t i = 0; i < grid.cells(); ++i) {
        const Vec x = grid.center(i);
        const Vec v = spec.eval(x);
        double nv = 0.0;
        for (int a = 0; a < spec.dim(); ++a) nv += v[a] * v[a];
        nv = std::sqrt(nv);
        if (nv > sup) sup = nv;
        spec.jacobian(x, J);
        const double on = operator_norm(J, spec.dim());
        if (on > lip) lip = on;
    }
    r.lipschitz_bound = 1.05 * lip;
    r.sup_norm = 1.05 * sup;
    r.passes_A2 = r.divergence_norm <= r.threshold;
    r.coercive_everywhere = r.sup_norm < 1.0;
    return r;
}

}  // namespace ghom
