#include "knn_morse/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "classify_impl.hpp"
#include "knn_morse/knn.hpp"

namespace knn_morse
{

CandidateSubset make_candidate(const PointCloud& cloud, std::span<const int> labels, const Tolerances& tol)
{
    CandidateSubset c;
    c.labels.assign(labels.begin(), labels.end());
    c.sphere = circumsphere(cloud, labels, tol);
    return c;
}

std::optional<CriticalPoint> classify(const CandidateSubset& X, const PointCloud& cloud, int k, const Tolerances& tol)
{
    if (k < 1)
        throw InvalidConfig("k must be positive");
    std::vector<int> idx;
    idx.reserve(X.labels.size());
    for (int l : X.labels)
        idx.push_back(static_cast<int>(cloud.index_of(l)));

    const auto fit = fit_simplex(cloud, idx, tol.general_position * cloud.scale());
    if (!fit)
        throw AffinelyDependent("candidate " + detail::describe_labels(cloud, idx) + " is affinely dependent");

    return detail::evaluate_candidate(cloud, k, idx, *fit, tol, [&](const Point& c, double, auto&& fn) {
        for (std::size_t i = 0; i < cloud.size(); ++i)
            fn(static_cast<int>(i), (cloud.column(i) - c).squaredNorm());
    });
}

bool clarke_check(const CriticalPoint& cp, const PointCloud& cloud, int k, const Tolerances& tol)
{
    const double r = knn_value(cloud, k, cp.center);
    const double band = tol.sphere * std::max(cloud.scale(), r);

    std::vector<int> active;
    std::vector<Point> directions;
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const Point g = cp.center - cloud.point(i);
        if (std::abs(g.norm() - r) <= band)
        {
            active.push_back(cloud.label(i));
            directions.push_back(g);
        }
    }
    std::vector<int> expected = cp.boundary;
    std::sort(expected.begin(), expected.end());
    std::sort(active.begin(), active.end());
    if (active != expected)
        return false;

    // Zero-radius minimum: the single active gradient vanishes.
    if (r <= band)
        return active.size() == 1;

    // Least-squares solve of [G; 1^T] lambda = [0; 1] with G the unit
    // gradient directions. In general position the solution is unique.
    const int d = cloud.dim();
    const auto m = static_cast<Eigen::Index>(directions.size());
    Eigen::MatrixXd system(d + 1, m);
    for (Eigen::Index j = 0; j < m; ++j)
    {
        system.col(j).head(d) = directions[static_cast<std::size_t>(j)] / r;
        system(d, j) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
    rhs[d] = 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd lambda = svd.solve(rhs);
    const double residual = (system * lambda - rhs).norm();
    if (residual > 1e-8)
        return false;
    return (lambda.array() > tol.barycentric).all();
}

long long delta(int n_boundary, int index)
{
    const int n = n_boundary - 1;
    if (n_boundary < 1 || index < 0 || index > n)
        throw InvalidConfig("delta(" + std::to_string(n_boundary) + ", " + std::to_string(index) +
                            ") outside 0 <= index <= n_boundary - 1");
    long long r = 1;
    for (int i = 1; i <= index; ++i)
        r = r * (n - index + i) / i;
    return r;
}

long long euler_sum(std::span<const CriticalPoint> crits)
{
    long long s = 0;
    for (const auto& c : crits)
        s += (c.index % 2 == 0 ? 1 : -1) * c.delta;
    return s;
}

MorseValidation validate_morse(std::span<const CriticalPoint> crits, const PointCloud& cloud, const Tolerances& tol)
{
    MorseValidation v;
    const double band = tol.sphere * cloud.scale();

    std::vector<double> radii;
    for (const auto& c : crits)
    {
        if (c.radius == 0.0 && c.boundary.size() == 1)
            ++v.zero_level_minima;
        else
            radii.push_back(c.radius);
    }
    std::sort(radii.begin(), radii.end());
    v.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < radii.size(); ++i)
        v.min_gap = std::min(v.min_gap, radii[i] - radii[i - 1]);
    v.distinct_values = v.min_gap > band;

    for (const auto& c : crits)
    {
        std::vector<int> idx;
        for (int l : c.boundary)
            idx.push_back(static_cast<int>(cloud.index_of(l)));
        const auto fit = fit_simplex(cloud, idx, tol.general_position * cloud.scale());
        if (!fit)
        {
            v.nondegenerate = false;
            continue;
        }
        for (std::size_t i = 0; i < cloud.size(); ++i)
        {
            if (std::find(c.boundary.begin(), c.boundary.end(), cloud.label(i)) != c.boundary.end())
                continue;
            if (std::abs((cloud.column(i) - c.center).norm() - c.radius) <= band)
                v.nondegenerate = false;
        }
    }
    return v;
}

}  // namespace knn_morse
