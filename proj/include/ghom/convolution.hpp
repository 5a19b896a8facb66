#ifndef GHOM_CONVOLUTION_HPP
#define GHOM_CONVOLUTION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ghom/grid.hpp"
#include "ghom/parallel.hpp"

namespace ghom {

/// Moreau envelope u_delta(x) = min_y u(y) + |x-y|^2 / (2 delta) together with
/// the argmin map. Shifts are stored per axis in cells, relative to the cell
/// where the envelope is read, so the optimal pair (x, y_delta) and its
/// displacement can be reconstructed exactly.
struct InfConvolution {
    GridFunction value;
    std::vector<std::array<std::int32_t, kMaxDim>> shift;

    /// Optimal source cell (wrapped) and the real-space displacement y - x.
    std::pair<IVec, Vec> optimal_point(std::int64_t cell) const;
};

/// Quadratic lower envelope, evaluated axis by axis with the linear-time
/// lower-envelope transform. Source points are searched over periodic
/// representatives within one period per axis; if an argmin lands a full
/// period away the search window is widened and the pass redone.
InfConvolution inf_convolution(const GridFunction& u, double delta, Exec mode = Exec::Serial);

/// Dual envelope: negate, inf-convolve, negate.
InfConvolution sup_convolution(const GridFunction& u, double delta, Exec mode = Exec::Serial);

/// Pointwise min over all supplied members followed by a min over the 3^N
/// cell neighborhood. The sequence tail is the supplied window itself.
GridFunction discrete_lower_semilimit(const std::vector<GridFunction>& members);

/// Dual: pointwise max then 3^N neighborhood max.
GridFunction discrete_upper_semilimit(const std::vector<GridFunction>& members);

}  // namespace ghom

#endif
