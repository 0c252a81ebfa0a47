#include "knn_morse/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "classify_impl.hpp"
#include "knn_morse/knn.hpp"
#include "knn_morse/parallel.hpp"

namespace knn_morse
{

Point GridField::cell_center(int ix, int iy) const
{
    Point p(2);
    p << x_at(ix), y_at(iy);
    return p;
}

GridField sample_grid(const PointCloud& cloud, int k, const Box& bounds, int resolution)
{
    if (cloud.dim() != 2 || bounds.dim() != 2)
        throw InvalidConfig("the grid oracle is planar (dim == 2)");
    if (resolution < kMinResolution)
        throw ResolutionTooLow("resolution " + std::to_string(resolution) + " is below " +
                               std::to_string(kMinResolution));
    GridField f;
    f.bounds = bounds;
    f.resolution = resolution;
    f.k = k;
    f.values.resize(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
    parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t row) {
        const int iy = static_cast<int>(row);
        for (int ix = 0; ix < resolution; ++ix)
            f.values[row * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(ix)] =
                knn_value(cloud, k, f.cell_center(ix, iy));
    });
    return f;
}

namespace
{

struct UnionFind
{
    std::vector<int> parent;

    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x)
    {
        while (parent[static_cast<std::size_t>(x)] != x)
        {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }

    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (a < b)
            std::swap(a, b);
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

}  // namespace

BettiVector betti_of_mask(int nx, int ny, std::span<const unsigned char> covered)
{
    const auto at = [&](int ix, int iy) {
        return covered[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix)] != 0;
    };
    long long V = 0, E = 0, F = 0, components = 0;
    UnionFind uf(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
        {
            if (!at(ix, iy))
                continue;
            ++V;
            ++components;
            const int id = iy * nx + ix;
            const bool right = ix + 1 < nx && at(ix + 1, iy);
            const bool up = iy + 1 < ny && at(ix, iy + 1);
            if (right)
            {
                ++E;
                if (uf.unite(id, id + 1))
                    --components;
            }
            if (up)
            {
                ++E;
                if (uf.unite(id, id + nx))
                    --components;
            }
            if (right && up && at(ix + 1, iy + 1))
                ++F;
        }
    const long long chi = V - E + F;
    return BettiVector{{static_cast<int>(components), static_cast<int>(components - chi)}};
}

BettiVector betti_sublevel(const GridField& field, double r)
{
    std::vector<unsigned char> mask(field.values.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = field.values[i] <= r;
    return betti_of_mask(field.resolution, field.resolution, mask);
}

Box default_bounds(const PointCloud& cloud, std::span<const CriticalPoint> crits)
{
    const Box bbox = cloud.bounding_box();
    double r_max = 0.0;
    for (const auto& c : crits)
        r_max = std::max(r_max, c.radius);
    const Point mid = 0.5 * (bbox.lo + bbox.hi);
    const double half = 0.5 * (bbox.hi - bbox.lo).maxCoeff() + 1.5 * r_max + 0.05 * cloud.scale();
    return Box{mid.array() - half, mid.array() + half};
}

std::vector<FiltrationRecord> homology_change_report(const PointCloud& cloud, int k,
                                                     std::span<const CriticalPoint> crits,
                                                     const HomologyReportOptions& options)
{
    if (cloud.dim() != 2)
        throw InvalidConfig("homology_change_report is planar (dim == 2)");
    if (crits.empty())
        return {};

    std::vector<CriticalPoint> sorted(crits.begin(), crits.end());
    std::sort(sorted.begin(), sorted.end(), detail::critical_order);

    // Levels: the shared zero level of k = 1 minima, then one level per point.
    struct Level
    {
        double radius;
        std::vector<std::size_t> members;
    };
    std::vector<Level> levels;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        const bool zero_min = sorted[i].radius == 0.0 && sorted[i].boundary.size() == 1;
        if (zero_min && !levels.empty() && levels.back().radius == 0.0)
            levels.back().members.push_back(i);
        else
            levels.push_back({sorted[i].radius, {i}});
    }
    const double band = options.tol.sphere * cloud.scale();
    for (std::size_t l = 1; l < levels.size(); ++l)
        if (levels[l].radius - levels[l - 1].radius <= band)
            throw InvalidConfig("critical values are not distinct; the oracle needs a Morse function");

    const Box bounds = options.bounds ? *options.bounds : default_bounds(cloud, sorted);
    const std::vector<int> resolutions{options.resolution, 2 * options.resolution};
    std::vector<GridField> fields;
    for (int res : resolutions)
        fields.push_back(sample_grid(cloud, k, bounds, res));

    auto evaluate = [&](const GridField& f, double r) {
        return options.refine ? betti_refined(cloud, f, r, sorted) : betti_sublevel(f, r);
    };

    std::vector<FiltrationRecord> out;
    for (std::size_t l = 0; l < levels.size(); ++l)
    {
        const Level& level = levels[l];
        double eps;
        if (options.epsilon)
            eps = *options.epsilon;
        else
        {
            double gap = std::numeric_limits<double>::infinity();
            if (l > 0)
                gap = std::min(gap, level.radius - levels[l - 1].radius);
            else if (level.radius > 0.0)
                gap = std::min(gap, level.radius);
            if (l + 1 < levels.size())
                gap = std::min(gap, levels[l + 1].radius - level.radius);
            if (!std::isfinite(gap))
                gap = level.radius > 0.0 ? level.radius : cloud.scale();
            eps = 0.4 * gap;
        }

        const CriticalPoint& first = sorted[level.members.front()];
        FiltrationRecord rec;
        rec.center = first.center;
        rec.radius = level.radius;
        rec.index = first.index;
        rec.n_boundary = static_cast<int>(first.boundary.size());
        rec.n_interior = static_cast<int>(first.interior.size());
        rec.group_size = level.members.size();
        rec.delta = 0;
        for (std::size_t m : level.members)
            rec.delta += sorted[m].delta;
        rec.epsilon = eps;
        rec.resolutions = resolutions;
        for (const auto& f : fields)
        {
            rec.before_by_resolution.push_back(evaluate(f, level.radius - eps));
            rec.after_by_resolution.push_back(evaluate(f, level.radius + eps));
        }
        rec.betti_before = rec.before_by_resolution.front();
        rec.betti_after = rec.after_by_resolution.front();
        for (std::size_t i = 1; i < fields.size(); ++i)
            if (!(rec.before_by_resolution[i] == rec.betti_before) || !(rec.after_by_resolution[i] == rec.betti_after))
                rec.stable = false;

        const int mu = rec.index;
        rec.delta_plus = rec.betti_after[static_cast<std::size_t>(mu)] - rec.betti_before[static_cast<std::size_t>(mu)];
        rec.delta_minus = mu >= 1 ? rec.betti_before[static_cast<std::size_t>(mu - 1)] -
                                        rec.betti_after[static_cast<std::size_t>(mu - 1)]
                                  : 0;
        bool others_unchanged = true;
        for (int i = 0; i < 2; ++i)
            if (i != mu && i != mu - 1 &&
                rec.betti_before[static_cast<std::size_t>(i)] != rec.betti_after[static_cast<std::size_t>(i)])
                others_unchanged = false;
        rec.pass = rec.stable && others_unchanged && rec.delta_plus >= 0 && rec.delta_minus >= 0 &&
                   rec.delta_plus + rec.delta_minus == rec.delta;
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace knn_morse
