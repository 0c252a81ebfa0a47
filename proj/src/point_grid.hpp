// Uniform bucket grid over a point cloud for radius queries. Internal to the
// enumeration; the reference k-NN evaluation in knn.cpp stays a full scan.

#ifndef KNN_MORSE_SRC_POINT_GRID_HPP
#define KNN_MORSE_SRC_POINT_GRID_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "knn_morse/types.hpp"

namespace knn_morse
{

class PointGrid
{
public:
    /// Buckets of side roughly `cell_size`; the total cell count is capped
    /// at a small multiple of the point count.
    PointGrid(const PointCloud& cloud, double cell_size);

    /// Calls fn(index, squared distance) for every point with |p - x| <= radius.
    template <typename Fn>
    void for_each_within(const Point& x, double radius, Fn&& fn) const;

    /// k-th smallest distance from x (k <= size).
    double kth_distance(const Point& x, int k) const;

    double cell_size() const { return cell_; }

private:
    const PointCloud& cloud_;
    int dim_;
    double cell_;
    Point origin_;
    std::array<std::int64_t, kMaxDim> counts_{};
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> items_;
};

template <typename Fn>
void PointGrid::for_each_within(const Point& x, double radius, Fn&& fn) const
{
    std::array<std::int64_t, kMaxDim> lo{}, hi{}, cur{};
    for (int a = 0; a < dim_; ++a)
    {
        const auto ua = static_cast<std::size_t>(a);
        const double l = std::floor((x[a] - radius - origin_[a]) / cell_);
        const double h = std::floor((x[a] + radius - origin_[a]) / cell_);
        lo[ua] = static_cast<std::int64_t>(std::max(0.0, l));
        hi[ua] = static_cast<std::int64_t>(std::min(static_cast<double>(counts_[ua] - 1), h));
        if (lo[ua] > hi[ua])
            return;
        cur[ua] = lo[ua];
    }
    const double r2 = radius * radius;
    while (true)
    {
        std::int64_t flat = 0;
        for (int a = dim_ - 1; a >= 0; --a)
            flat = flat * counts_[static_cast<std::size_t>(a)] + cur[static_cast<std::size_t>(a)];
        const auto f = static_cast<std::size_t>(flat);
        for (std::uint32_t s = start_[f]; s < start_[f + 1]; ++s)
        {
            const std::uint32_t i = items_[s];
            const double d2 = (cloud_.column(i) - x).squaredNorm();
            if (d2 <= r2)
                fn(static_cast<int>(i), d2);
        }
        int a = 0;
        for (; a < dim_; ++a)
        {
            const auto ua = static_cast<std::size_t>(a);
            if (++cur[ua] <= hi[ua])
                break;
            cur[ua] = lo[ua];
        }
        if (a == dim_)
            return;
    }
}

}  // namespace knn_morse

#endif
