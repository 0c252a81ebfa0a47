// Critical-point enumeration.
//
// Brute force tries every subset of size up to dim+1. The pruned strategy
// bounds the radius of any critical point with center in the region of
// interest G by R = max_G d^(k) (upper-bounded on a cell grid through the
// 1-Lipschitz property), then draws candidates from cliques of the graph
// joining points at distance <= 2R, restricted to points within R of G.

#include <algorithm>
#include <cmath>

#include "classify_impl.hpp"
#include "combinations.hpp"
#include "knn_morse/critical.hpp"
#include "point_grid.hpp"

namespace knn_morse
{

namespace
{

std::optional<Box> intersect(const Box& a, const Box& b)
{
    Box r{a.lo.cwiseMax(b.lo), a.hi.cwiseMin(b.hi)};
    for (int i = 0; i < r.dim(); ++i)
        if (r.lo[i] > r.hi[i])
            return std::nullopt;
    return r;
}

double box_distance(const Box& box, const Point& p)
{
    const Point clamped = p.cwiseMax(box.lo).cwiseMin(box.hi);
    return (p - clamped).norm();
}

bool boxes_overlap(const Box& box, const PointCloud& cloud, std::span<const int> idx)
{
    for (int a = 0; a < cloud.dim(); ++a)
    {
        double lo = cloud.column(static_cast<std::size_t>(idx[0]))[a];
        double hi = lo;
        for (int i : idx)
        {
            lo = std::min(lo, cloud.column(static_cast<std::size_t>(i))[a]);
            hi = std::max(hi, cloud.column(static_cast<std::size_t>(i))[a]);
        }
        if (hi < box.lo[a] || lo > box.hi[a])
            return false;
    }
    return true;
}

/// Upper bound on d^(k) over the region.
double radius_bound(const PointCloud& cloud, int k, const Box& region, const PointGrid& grid)
{
    const int d = cloud.dim();
    const double target = 4.0 * static_cast<double>(std::max<std::size_t>(cloud.size(), 16));
    const double side = std::pow(std::max(region.volume(), 1e-300) / target, 1.0 / d);

    std::array<int, kMaxDim> counts{};
    Point extent(d);
    double total = 1.0;
    for (int a = 0; a < d; ++a)
    {
        const double len = region.hi[a] - region.lo[a];
        int c = side > 0.0 ? static_cast<int>(std::ceil(len / side)) : 1;
        c = std::clamp(c, 1, 4096);
        counts[static_cast<std::size_t>(a)] = c;
        extent[a] = len / c;
        total *= c;
    }
    // Cap the number of cells for degenerate (flat) regions.
    while (total > 4.0 * target)
    {
        total = 1.0;
        for (int a = 0; a < d; ++a)
        {
            auto& c = counts[static_cast<std::size_t>(a)];
            c = std::max(1, c / 2);
            extent[a] = (region.hi[a] - region.lo[a]) / c;
            total *= c;
        }
    }
    const double half_diag = 0.5 * extent.norm();

    double best = 0.0;
    std::array<int, kMaxDim> cur{};
    Point x(d);
    while (true)
    {
        for (int a = 0; a < d; ++a)
            x[a] = region.lo[a] + (cur[static_cast<std::size_t>(a)] + 0.5) * extent[a];
        best = std::max(best, grid.kth_distance(x, k));
        int a = 0;
        for (; a < d; ++a)
        {
            if (++cur[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(a)])
                break;
            cur[static_cast<std::size_t>(a)] = 0;
        }
        if (a == d)
            break;
    }
    return best + half_diag;
}

class Enumerator
{
public:
    Enumerator(const PointCloud& cloud, int k, const EnumerationOptions& opt)
        : cloud_(cloud), k_(k), opt_(opt), rank_tol_(opt.tol.general_position * cloud.scale())
    {
    }

    std::vector<CriticalPoint> brute_force()
    {
        const int n = static_cast<int>(cloud_.size());
        const int max_m = std::min(cloud_.dim() + 1, n);
        auto scan = [&](const Point& c, double, auto&& fn) {
            for (int i = 0; i < n; ++i)
                fn(i, (cloud_.column(static_cast<std::size_t>(i)) - c).squaredNorm());
        };
        for (int m = k_ == 1 ? 1 : 2; m <= max_m; ++m)
            for_each_combination(n, m, [&](std::span<const int> idx) { consider(idx, scan, -1.0); });
        return finish();
    }

    std::vector<CriticalPoint> pruned()
    {
        const Box bbox = cloud_.bounding_box();
        const auto region = opt_.window ? intersect(*opt_.window, bbox) : std::optional<Box>(bbox);
        if (!region)
            return {};

        const int n = static_cast<int>(cloud_.size());
        const int d = cloud_.dim();
        const double spacing = std::pow(std::max(bbox.volume(), 1e-300) / n, 1.0 / d);
        PointGrid grid(cloud_, spacing > 0.0 ? spacing : cloud_.scale());
        const double band = opt_.tol.sphere * cloud_.scale();
        const double R = radius_bound(cloud_, k_, *region, grid) + band;
        region_ = *region;

        std::vector<char> active(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            active[static_cast<std::size_t>(i)] = box_distance(*region, cloud_.point(static_cast<std::size_t>(i))) <= R;

        // Forward adjacency (j > i) in the 2R graph.
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
        {
            if (!active[static_cast<std::size_t>(i)])
                continue;
            auto& nb = adj[static_cast<std::size_t>(i)];
            grid.for_each_within(cloud_.point(static_cast<std::size_t>(i)), 2.0 * R, [&](int j, double) {
                if (j > i && active[static_cast<std::size_t>(j)])
                    nb.push_back(j);
            });
            std::sort(nb.begin(), nb.end());
        }

        auto near = [&](const Point& c, double radius, auto&& fn) { grid.for_each_within(c, radius, fn); };

        if (k_ == 1)
            for (int i = 0; i < n; ++i)
            {
                const int one[1] = {i};
                consider(one, near, R);
            }

        const int max_m = std::min(d + 1, n);
        std::vector<int> clique;
        std::vector<std::vector<int>> pools(static_cast<std::size_t>(max_m + 1));
        for (int i = 0; i < n; ++i)
        {
            if (!active[static_cast<std::size_t>(i)])
                continue;
            clique.assign(1, i);
            pools[1] = adj[static_cast<std::size_t>(i)];
            extend(clique, pools, max_m, adj, near, R);
        }
        return finish();
    }

private:
    template <typename Near>
    void extend(std::vector<int>& clique, std::vector<std::vector<int>>& pools, int max_m,
                const std::vector<std::vector<int>>& adj, Near& near, double R)
    {
        const std::size_t depth = clique.size();
        const auto& pool = pools[depth];
        for (std::size_t t = 0; t < pool.size(); ++t)
        {
            const int j = pool[t];
            clique.push_back(j);
            consider(clique, near, R);
            if (static_cast<int>(clique.size()) < max_m)
            {
                auto& next = pools[depth + 1];
                next.clear();
                const auto& nj = adj[static_cast<std::size_t>(j)];
                std::set_intersection(pool.begin() + static_cast<std::ptrdiff_t>(t) + 1, pool.end(), nj.begin(),
                                      nj.end(), std::back_inserter(next));
                if (!next.empty())
                    extend(clique, pools, max_m, adj, near, R);
            }
            clique.pop_back();
        }
    }

    template <typename Near>
    void consider(std::span<const int> idx, Near& near, double R)
    {
        if (idx.size() == 1 && k_ != 1)
            return;
        if (R >= 0.0 && !boxes_overlap(region_, cloud_, idx))
            return;
        const auto fit = fit_simplex(cloud_, idx, rank_tol_);
        if (!fit)
            return;
        if (R >= 0.0 && fit->radius > R)
            return;
        if (opt_.window && !opt_.window->contains(fit->center))
            return;
        if (auto cp = detail::evaluate_candidate(cloud_, k_, idx, *fit, opt_.tol, near))
            out_.push_back(std::move(*cp));
    }

    std::vector<CriticalPoint> finish()
    {
        std::sort(out_.begin(), out_.end(), detail::critical_order);
        return std::move(out_);
    }

    const PointCloud& cloud_;
    int k_;
    const EnumerationOptions& opt_;
    double rank_tol_;
    Box region_;
    std::vector<CriticalPoint> out_;
};

}  // namespace

std::vector<CriticalPoint> enumerate_critical_points(const PointCloud& cloud, int k, const EnumerationOptions& options)
{
    if (k < 1)
        throw InvalidConfig("k must be positive");
    if (options.window && options.window->dim() != cloud.dim())
        throw InvalidConfig("window dimension does not match the cloud");
    if (cloud.size() < static_cast<std::size_t>(k))
        return {};

    Enumerator e(cloud, k, options);
    switch (options.strategy)
    {
    case EnumerationStrategy::BruteForce: return e.brute_force();
    case EnumerationStrategy::Pruned: return e.pruned();
    case EnumerationStrategy::Auto: break;
    }
    return cloud.size() <= kBruteForceLimit ? e.brute_force() : e.pruned();
}

}  // namespace knn_morse
