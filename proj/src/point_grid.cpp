#include "point_grid.hpp"

#include <algorithm>
#include <limits>

namespace knn_morse
{

PointGrid::PointGrid(const PointCloud& cloud, double cell_size)
    : cloud_(cloud), dim_(cloud.dim()), cell_(cell_size)
{
    const Box box = cloud.bounding_box();
    origin_ = box.lo;
    const double max_cells = 4.0 * static_cast<double>(std::max<std::size_t>(cloud.size(), 16));

    if (!(cell_ > 0.0))
        cell_ = cloud.scale();
    // Grow the cell until the grid is small enough.
    while (true)
    {
        double total = 1.0;
        for (int a = 0; a < dim_; ++a)
            total *= std::floor((box.hi[a] - box.lo[a]) / cell_) + 1.0;
        if (total <= max_cells)
            break;
        cell_ *= 1.5;
    }
    std::size_t total = 1;
    for (int a = 0; a < dim_; ++a)
    {
        counts_[static_cast<std::size_t>(a)] =
            static_cast<std::int64_t>(std::floor((box.hi[a] - box.lo[a]) / cell_)) + 1;
        total *= static_cast<std::size_t>(counts_[static_cast<std::size_t>(a)]);
    }

    std::vector<std::size_t> cell_of(cloud.size());
    start_.assign(total + 1, 0);
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        std::int64_t flat = 0;
        for (int a = dim_ - 1; a >= 0; --a)
        {
            const auto ua = static_cast<std::size_t>(a);
            auto c = static_cast<std::int64_t>(std::floor((cloud.column(i)[a] - origin_[a]) / cell_));
            c = std::clamp<std::int64_t>(c, 0, counts_[ua] - 1);
            flat = flat * counts_[ua] + c;
        }
        cell_of[i] = static_cast<std::size_t>(flat);
        ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < total; ++c)
        start_[c + 1] += start_[c];
    items_.resize(cloud.size());
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        items_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
}

double PointGrid::kth_distance(const Point& x, int k) const
{
    double radius = cell_;
    std::vector<double> found;
    while (true)
    {
        found.clear();
        for_each_within(x, radius, [&](int, double d2) { found.push_back(d2); });
        if (found.size() >= static_cast<std::size_t>(k))
        {
            std::nth_element(found.begin(), found.begin() + (k - 1), found.end());
            return std::sqrt(found[static_cast<std::size_t>(k - 1)]);
        }
        if (found.size() == cloud_.size())
            return std::numeric_limits<double>::infinity();
        radius *= 2.0;
    }
}

}  // namespace knn_morse
