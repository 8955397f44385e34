#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpch {

inline constexpr double kDefaultPeriod = 24.0 * std::numbers::pi;
inline constexpr double kDealiasFraction = 2.0 / 3.0;

namespace detail {
inline bool is_pow2(int v) { return v >= 2 && (v & (v - 1)) == 0; }
}

/// Periodic box [0, L)^d sampled with extent[axis] points along each axis.
/// Fourier frequencies along an axis are xi_m = (2*pi/L) * m with
/// m in {-M/2, ..., M/2 - 1}; for L = 24*pi the lattice spacing is 1/12.
class TorusGrid {
public:
    TorusGrid(int d, double length, int points_per_axis)
        : TorusGrid(length, std::vector<int>(static_cast<std::size_t>(check_dim(d)), points_per_axis)) {}

    TorusGrid(double length, std::vector<int> extent)
        : length_(length), extent_(std::move(extent)) {
        check_dim(static_cast<int>(extent_.size()));
        if (!(length_ > 0))
            throw std::invalid_argument("TorusGrid: period L must be positive");
        for (int m : extent_)
            if (!detail::is_pow2(m))
                throw std::invalid_argument("TorusGrid: points per axis must be an even power of two >= 2");
        strides_.assign(extent_.size(), 1);
        points_ = 1;
        for (int ax = static_cast<int>(extent_.size()) - 1; ax >= 0; --ax) {
            strides_[static_cast<std::size_t>(ax)] = points_;
            points_ *= static_cast<std::size_t>(extent_[static_cast<std::size_t>(ax)]);
        }
        freq_unit_ = 2.0 * std::numbers::pi / length_;
    }

    int dim() const { return static_cast<int>(extent_.size()); }
    double period() const { return length_; }
    const std::vector<int>& extent() const { return extent_; }
    int extent(int axis) const { return extent_[static_cast<std::size_t>(axis)]; }
    std::size_t points() const { return points_; }
    std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
    double freq_unit() const { return freq_unit_; }
    double spacing() const { return length_ / extent_[0]; }
    /// Grid measure (L/M_0)*(L/M_1)*... used by discrete L^p sums.
    double cell_volume() const {
        double v = 1.0;
        for (int m : extent_) v *= length_ / m;
        return v;
    }
    double volume() const { return std::pow(length_, dim()); }

    /// Signed frequency index from a storage index a in [0, M).
    int freq_index(int axis, int a) const {
        const int m = extent_[static_cast<std::size_t>(axis)];
        return a < m / 2 ? a : a - m;
    }
    /// Storage index for a signed frequency index in [-M/2, M/2 - 1].
    int storage_index(int axis, int f) const {
        const int m = extent_[static_cast<std::size_t>(axis)];
        if (f < -m / 2 || f > m / 2 - 1)
            throw std::invalid_argument("TorusGrid: frequency index outside the lattice");
        return f >= 0 ? f : f + m;
    }
    double xi(int axis, int storage) const { return freq_unit_ * freq_index(axis, storage); }

    /// Largest |m| kept by the standard 2/3-rule band on this axis.
    int dealias_keep(int axis, double fraction = kDealiasFraction) const {
        const int half = extent_[static_cast<std::size_t>(axis)] / 2;
        int keep = static_cast<int>(std::floor(fraction * half));
        return std::min(keep, half - 1);
    }

    bool operator==(const TorusGrid& o) const {
        return length_ == o.length_ && extent_ == o.extent_;
    }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
    static int check_dim(int d) {
        if (d < 1 || d > 3)
            throw std::invalid_argument("TorusGrid: dimension must be 1, 2, or 3");
        return d;
    }

    double length_;
    std::vector<int> extent_;
    std::vector<std::size_t> strides_;
    std::size_t points_ = 0;
    double freq_unit_ = 0;
};

/// Odometer over the full lattice: visits flat indices 0..points-1 while
/// tracking the per-axis storage indices.
class LatticeIter {
public:
    explicit LatticeIter(const TorusGrid& grid)
        : grid_(&grid), idx_(static_cast<std::size_t>(grid.dim()), 0) {}

    bool done() const { return flat_ >= grid_->points(); }
    std::size_t flat() const { return flat_; }
    int axis_index(int axis) const { return idx_[static_cast<std::size_t>(axis)]; }
    const std::vector<int>& indices() const { return idx_; }

    void next() {
        ++flat_;
        for (int ax = grid_->dim() - 1; ax >= 0; --ax) {
            auto& v = idx_[static_cast<std::size_t>(ax)];
            if (++v < grid_->extent(ax)) return;
            v = 0;
        }
    }

private:
    const TorusGrid* grid_;
    std::vector<int> idx_;
    std::size_t flat_ = 0;
};

} // namespace lpch
