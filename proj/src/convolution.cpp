#include "ghom/convolution.hpp"

#include <cmath>
#include <cstdlib>

#include "ghom/errors.hpp"

namespace ghom {

namespace {

// Lower envelope of the parabolas f[i] + s*(j-i)^2 along one line of m
// samples; writes the envelope into out[] and the minimizing i into arg[].
void envelope_line(const double* f, std::int64_t m, double s, double* out, std::int32_t* arg,
                   std::vector<std::int64_t>& v, std::vector<double>& z) {
    v.resize(static_cast<std::size_t>(m));
    z.resize(static_cast<std::size_t>(m) + 1);
    std::int64_t q = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (std::int64_t i = 1; i < m; ++i) {
        double sx;
        for (;;) {
            const std::int64_t p = v[static_cast<std::size_t>(q)];
            sx = ((f[i] + s * static_cast<double>(i) * static_cast<double>(i)) -
                  (f[p] + s * static_cast<double>(p) * static_cast<double>(p))) /
                 (2.0 * s * static_cast<double>(i - p));
            if (sx <= z[static_cast<std::size_t>(q)] && q > 0) {
                --q;
            } else {
                break;
            }
        }
        ++q;
        v[static_cast<std::size_t>(q)] = i;
        z[static_cast<std::size_t>(q)] = sx;
        z[static_cast<std::size_t>(q) + 1] = kInf;
    }
    std::int64_t k = 0;
    for (std::int64_t j = 0; j < m; ++j) {
        while (z[static_cast<std::size_t>(k) + 1] < static_cast<double>(j)) ++k;
        const std::int64_t i = v[static_cast<std::size_t>(k)];
        const double d = static_cast<double>(j - i);
        out[j] = f[i] + s * d * d;
        arg[j] = static_cast<std::int32_t>(i);
    }
}

struct AxisPass {
    std::vector<double> value;
    std::vector<std::int32_t> shift;  // source minus destination, in cells
    bool window_hit = false;          // an argmin landed a full period away
};

// One separable pass along `axis`, searching sources over `periods` periodic
// copies (odd count, centered copy is read back).
AxisPass axis_pass(const TorusGrid& g, const std::vector<double>& in, int axis, double delta,
                   int periods, Exec mode) {
    const std::int64_t n = g.res(axis);
    const double h = g.spacing(axis);
    const double s = h * h / (2.0 * delta);
    const std::int64_t m = n * periods;
    const std::int64_t base = n * static_cast<std::int64_t>(periods / 2);

    AxisPass result;
    result.value.assign(in.size(), 0.0);
    result.shift.assign(in.size(), 0);

    // Enumerate lines along `axis`: stride between consecutive samples and a
    // start index per line.
    std::int64_t stride = 1;
    for (int a = g.dim() - 1; a > axis; --a) stride *= g.res(a);
    const std::int64_t line_count = g.cells() / n;

    std::vector<std::uint8_t> hit(static_cast<std::size_t>(line_count), 0);

    par_for(mode, line_count, [&](std::int64_t line) {
        // Decompose the line id into the index with `axis` removed.
        std::int64_t inner = line % stride;
        std::int64_t outer = line / stride;
        const std::int64_t start = outer * stride * n + inner;

        std::vector<double> f(static_cast<std::size_t>(m));
        std::vector<double> env(static_cast<std::size_t>(m));
        std::vector<std::int32_t> arg(static_cast<std::size_t>(m));
        std::vector<std::int64_t> vbuf;
        std::vector<double> zbuf;

        for (std::int64_t j = 0; j < m; ++j)
            f[static_cast<std::size_t>(j)] = in[static_cast<std::size_t>(start + (j % n) * stride)];

        envelope_line(f.data(), m, s, env.data(), arg.data(), vbuf, zbuf);

        for (std::int64_t j = 0; j < n; ++j) {
            const std::int64_t je = base + j;
            const std::int64_t i = arg[static_cast<std::size_t>(je)];
            const std::int64_t sh = i - je;
            result.value[static_cast<std::size_t>(start + j * stride)] = env[static_cast<std::size_t>(je)];
            result.shift[static_cast<std::size_t>(start + j * stride)] = static_cast<std::int32_t>(sh);
            // Clipped against the window edge: the true argmin may lie beyond.
            if (i == 0 || i == m - 1) hit[static_cast<std::size_t>(line)] = 1;
        }
    });

    for (std::uint8_t hf : hit) result.window_hit |= (hf != 0);
    return result;
}

}  // namespace

std::pair<IVec, Vec> InfConvolution::optimal_point(std::int64_t cell) const {
    const TorusGrid& g = value.grid();
    IVec c = g.coord(cell);
    Vec disp{};
    // Later axes were transformed last, so unwind their shifts first: the
    // axis-a table is indexed by the cell as it stood before axes > a ran.
    for (int a = g.dim() - 1; a >= 0; --a) {
        const std::int32_t sh = shift[static_cast<std::size_t>(g.index(c))][a];
        disp[a] = static_cast<double>(sh) * g.spacing(a);
        IVec moved = c;
        moved[a] += sh;
        c = g.wrap_coord(moved);
    }
    return {c, disp};
}

InfConvolution inf_convolution(const GridFunction& u, double delta, Exec mode) {
    if (!(delta > 0.0)) throw ConfigError("inf_convolution requires delta > 0");
    if (u.has_infinite()) throw ConfigError("inf_convolution requires finite input values");

    const TorusGrid& g = u.grid();
    InfConvolution out{GridFunction(g), {}};
    out.shift.assign(static_cast<std::size_t>(g.cells()), {});

    std::vector<double> cur = u.values();
    for (int a = 0; a < g.dim(); ++a) {
        AxisPass pass = axis_pass(g, cur, a, delta, 3, mode);
        if (pass.window_hit) pass = axis_pass(g, cur, a, delta, 5, mode);
        if (pass.window_hit)
            throw NumericalError("inf_convolution argmin exceeded the widened search window; "
                                 "delta is too large for the oscillation of u");
        cur = std::move(pass.value);
        for (std::int64_t i = 0; i < g.cells(); ++i)
            out.shift[static_cast<std::size_t>(i)][a] = pass.shift[static_cast<std::size_t>(i)];
    }
    out.value.values() = std::move(cur);
    return out;
}

InfConvolution sup_convolution(const GridFunction& u, double delta, Exec mode) {
    GridFunction neg(u.grid());
    for (std::int64_t i = 0; i < u.size(); ++i) neg[i] = -u[i];
    InfConvolution r = inf_convolution(neg, delta, mode);
    for (std::int64_t i = 0; i < r.value.size(); ++i) r.value[i] = -r.value[i];
    return r;
}

namespace {

template <bool Lower>
GridFunction semilimit(const std::vector<GridFunction>& members) {
    if (members.empty()) throw ConfigError("semilimit of an empty sequence");
    const TorusGrid& g = members.front().grid();
    for (const auto& mfn : members)
        if (!mfn.grid().same_shape(g)) throw ConfigError("semilimit members must share one grid");

    GridFunction pointwise(g, Lower ? kInf : -kInf);
    for (const auto& mfn : members) {
        for (std::int64_t i = 0; i < pointwise.size(); ++i) {
            if (Lower) {
                if (mfn[i] < pointwise[i]) pointwise[i] = mfn[i];
            } else {
                if (mfn[i] > pointwise[i]) pointwise[i] = mfn[i];
            }
        }
    }

    GridFunction out(g);
    const int dim = g.dim();
    std::int64_t neighborhood = 1;
    for (int a = 0; a < dim; ++a) neighborhood *= 3;

    for (std::int64_t i = 0; i < out.size(); ++i) {
        const IVec c = g.coord(i);
        double best = Lower ? kInf : -kInf;
        for (std::int64_t t = 0; t < neighborhood; ++t) {
            IVec nb = c;
            std::int64_t rem = t;
            for (int a = 0; a < dim; ++a) {
                nb[a] += (rem % 3) - 1;
                rem /= 3;
            }
            const double v = pointwise[g.index_wrapped(nb)];
            if (Lower ? (v < best) : (v > best)) best = v;
        }
        out[i] = best;
    }
    return out;
}

}  // namespace

GridFunction discrete_lower_semilimit(const std::vector<GridFunction>& members) {
    return semilimit<true>(members);
}

GridFunction discrete_upper_semilimit(const std::vector<GridFunction>& members) {
    return semilimit<false>(members);
}

}  // namespace ghom
