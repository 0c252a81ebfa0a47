#include "knn_morse/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "combinations.hpp"

namespace knn_morse
{

void check_k(const PointCloud& cloud, int k)
{
    if (k < 1)
        throw InvalidConfig("k must be positive");
    if (static_cast<std::size_t>(k) > cloud.size())
        throw KTooLarge("k = " + std::to_string(k) + " exceeds the number of points " + std::to_string(cloud.size()));
}

KnnQueryResult knn_distance(const PointCloud& cloud, int k, const Point& x, const Tolerances& tol)
{
    check_k(cloud, k);
    const std::size_t n = cloud.size();
    std::vector<Neighbor> all(n);
    for (std::size_t i = 0; i < n; ++i)
        all[i] = {(cloud.column(i) - x).norm(), cloud.label(i)};

    auto by_distance = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.label < b.label);
    };
    const auto kk = static_cast<std::size_t>(k);
    const std::size_t keep = std::min(n, kk + 1);
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), by_distance);

    KnnQueryResult r;
    r.value = all[kk - 1].distance;
    r.kth_neighbor = all[kk - 1].label;
    r.sorted_prefix.assign(all.begin(), all.begin() + k);

    const double band = tol.sphere * std::max(cloud.scale(), r.value);
    if (kk >= 2 && r.value - all[kk - 2].distance <= band)
        r.tie = true;
    if (kk < n && all[kk].distance - r.value <= band)
        r.tie = true;
    return r;
}

double knn_value(const PointCloud& cloud, int k, const Point& x)
{
    check_k(cloud, k);
    const std::size_t n = cloud.size();
    thread_local std::vector<double> d2;
    d2.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        d2[i] = (cloud.column(i) - x).squaredNorm();
    auto nth = d2.begin() + (k - 1);
    std::nth_element(d2.begin(), nth, d2.end());
    return std::sqrt(*nth);
}

double minmax_eval(const PointCloud& cloud, int k, const Point& x)
{
    check_k(cloud, k);
    const int n = static_cast<int>(cloud.size());
    if (binomial_double(n, k) > kMaxMinmaxSubsets)
        throw TooManySubsets("C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds the subset guard");

    std::vector<double> dist(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        dist[static_cast<std::size_t>(i)] = (cloud.column(static_cast<std::size_t>(i)) - x).norm();

    double best = std::numeric_limits<double>::infinity();
    for_each_combination(n, k, [&](std::span<const int> subset) {
        double worst = 0.0;
        for (int i : subset)
            worst = std::max(worst, dist[static_cast<std::size_t>(i)]);
        best = std::min(best, worst);
    });
    return best;
}

bool order_k_cell_contains(std::span<const int> X, const PointCloud& cloud, const Point& y, const Tolerances& tol)
{
    std::vector<char> member(cloud.size(), 0);
    for (int l : X)
        member[cloud.index_of(l)] = 1;

    double inside_max = 0.0;
    double outside_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const double d = (cloud.column(i) - y).norm();
        if (member[i])
            inside_max = std::max(inside_max, d);
        else
            outside_min = std::min(outside_min, d);
    }
    return inside_max <= outside_min + tol.sphere * cloud.scale();
}

}  // namespace knn_morse
