// Candidate evaluation shared by classify() and the enumeration hot path.

#ifndef KNN_MORSE_SRC_CLASSIFY_IMPL_HPP
#define KNN_MORSE_SRC_CLASSIFY_IMPL_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knn_morse/critical.hpp"

namespace knn_morse::detail
{

inline std::string describe_labels(const PointCloud& cloud, std::span<const int> idx)
{
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i)
    {
        if (i)
            s += ",";
        s += std::to_string(cloud.label(static_cast<std::size_t>(idx[i])));
    }
    return s + "}";
}

/// Evaluates the subset `idx` (cloud indices) with fitted circumsphere `fit`.
/// `within(center, radius, fn)` must call fn(index, squared distance) for
/// every cloud point within `radius` of `center` (a superset is fine).
template <typename Within>
std::optional<CriticalPoint> evaluate_candidate(const PointCloud& cloud, int k, std::span<const int> idx,
                                                const SimplexFit& fit, const Tolerances& tol, Within&& within)
{
    const int m = static_cast<int>(idx.size());
    for (int j = 0; j < m; ++j)
        if (!(fit.weights[j] > tol.barycentric))
            return std::nullopt;

    const double band = tol.sphere * cloud.scale();
    const double rho = fit.radius;
    const double inner = rho - band;
    const double outer = rho + band;
    const double inner2 = inner > 0.0 ? inner * inner : -1.0;
    const double outer2 = outer * outer;

    int interior = 0;
    int on_sphere = -1;
    bool too_many = false;
    thread_local std::vector<int> inside;
    inside.clear();
    within(fit.center, outer, [&](int p, double d2) {
        if (too_many || d2 > outer2)
            return;
        if (std::find(idx.begin(), idx.end(), p) != idx.end())
            return;
        if (d2 < inner2)
        {
            inside.push_back(p);
            if (++interior > k - 1)
                too_many = true;
        }
        else
        {
            on_sphere = p;
        }
    });
    if (too_many)
        return std::nullopt;
    if (on_sphere >= 0)
        throw GeneralPositionViolation("point " + std::to_string(cloud.label(static_cast<std::size_t>(on_sphere))) +
                                       " lies on the circumsphere of " + describe_labels(cloud, idx));

    const int index = m + interior - k;
    if (index < 0 || index > cloud.dim())
        return std::nullopt;

    CriticalPoint cp;
    cp.center = fit.center;
    cp.radius = rho;
    cp.index = index;
    cp.delta = delta(m, index);

    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return cloud.label(static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])) <
               cloud.label(static_cast<std::size_t>(idx[static_cast<std::size_t>(b)]));
    });
    for (int o : order)
    {
        cp.boundary.push_back(cloud.label(static_cast<std::size_t>(idx[static_cast<std::size_t>(o)])));
        cp.weights.push_back(fit.weights[o]);
    }
    for (int p : inside)
        cp.interior.push_back(cloud.label(static_cast<std::size_t>(p)));
    std::sort(cp.interior.begin(), cp.interior.end());
    return cp;
}

inline bool critical_order(const CriticalPoint& a, const CriticalPoint& b)
{
    if (a.radius != b.radius)
        return a.radius < b.radius;
    return a.boundary < b.boundary;
}

}  // namespace knn_morse::detail

#endif
