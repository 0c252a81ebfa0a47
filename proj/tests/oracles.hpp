// Independent reference implementations used only by the tests. None of
// these call into the library's geometry or enumeration code.

#ifndef KNN_MORSE_TESTS_ORACLES_HPP
#define KNN_MORSE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle
{

using Vec = Eigen::VectorXd;

struct Sphere
{
    Vec center;
    double radius = 0.0;
    Vec lambda;  // barycentric weights of the center
};

// Circumcenter of the simplex from the Gram system
//   [2G 1; 1^T 0] [lambda; mu] = [diag G; 1],   G_ij = <p_i - p_0, p_j - p_0>,
// solved with full-pivot LU. None if the points are affinely dependent.
inline std::optional<Sphere> circumsphere(const std::vector<Vec>& pts)
{
    const int m = static_cast<int>(pts.size());
    if (m == 1)
        return Sphere{pts[0], 0.0, Vec::Ones(1)};
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Vec b = Vec::Zero(m + 1);
    for (int i = 0; i < m; ++i)
    {
        for (int j = 0; j < m; ++j)
            a(i, j) = 2.0 * (pts[static_cast<std::size_t>(i)] - pts[0]).dot(pts[static_cast<std::size_t>(j)] - pts[0]);
        a(i, m) = 1.0;
        a(m, i) = 1.0;
        b[i] = (pts[static_cast<std::size_t>(i)] - pts[0]).squaredNorm();
    }
    b[m] = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() < m + 1)
        return std::nullopt;
    const Vec sol = lu.solve(b);
    Sphere s;
    s.lambda = sol.head(m);
    s.center = Vec::Zero(pts[0].size());
    for (int i = 0; i < m; ++i)
        s.center += s.lambda[i] * pts[static_cast<std::size_t>(i)];
    s.radius = (s.center - pts[0]).norm();
    return s;
}

struct Crit
{
    Vec center;
    double radius = 0.0;
    std::vector<int> boundary;
    int interior = 0;
    int index = 0;
};

inline void for_each_subset(int n, int m, const std::function<void(const std::vector<int>&)>& fn)
{
    std::vector<int> idx(static_cast<std::size_t>(m));
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == m)
        {
            fn(idx);
            return;
        }
        for (int i = start; i <= n - (m - pos); ++i)
        {
            idx[static_cast<std::size_t>(pos)] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

// Every subset X with 1 <= |X| <= d+1 whose circumcenter has positive
// weights and at most k-1 points strictly inside, with 0 <= |X|+j-k <= d.
// Singletons only for k = 1.
inline std::vector<Crit> brute_force(const std::vector<Vec>& pts, int k, double band = 1e-9)
{
    const int n = static_cast<int>(pts.size());
    const int d = static_cast<int>(pts[0].size());
    std::vector<Crit> out;
    for (int m = (k == 1 ? 1 : 2); m <= std::min(d + 1, n); ++m)
        for_each_subset(n, m, [&](const std::vector<int>& idx) {
            std::vector<Vec> x;
            for (int i : idx)
                x.push_back(pts[static_cast<std::size_t>(i)]);
            const auto s = circumsphere(x);
            if (!s || (s->lambda.array() <= 1e-10).any())
                return;
            int j = 0;
            for (int i = 0; i < n; ++i)
                if (std::find(idx.begin(), idx.end(), i) == idx.end() &&
                    (pts[static_cast<std::size_t>(i)] - s->center).norm() < s->radius - band)
                    ++j;
            const int mu = m + j - k;
            if (j > k - 1 || mu < 0 || mu > d)
                return;
            out.push_back({s->center, s->radius, idx, j, mu});
        });
    std::sort(out.begin(), out.end(), [](const Crit& a, const Crit& b) {
        return a.radius < b.radius || (a.radius == b.radius && a.boundary < b.boundary);
    });
    return out;
}

// Classical characterization for the distance function (k = 1): c is
// critical iff it is in the open simplex of its nearest points and the ball
// through them is empty; the index is the number of nearest points minus one.
inline std::vector<Crit> distance_function_critical(const std::vector<Vec>& pts)
{
    const int n = static_cast<int>(pts.size());
    const int d = static_cast<int>(pts[0].size());
    std::vector<Crit> out;
    for (int i = 0; i < n; ++i)
        out.push_back({pts[static_cast<std::size_t>(i)], 0.0, {i}, 0, 0});
    for (int m = 2; m <= std::min(d + 1, n); ++m)
        for_each_subset(n, m, [&](const std::vector<int>& idx) {
            std::vector<Vec> x;
            for (int i : idx)
                x.push_back(pts[static_cast<std::size_t>(i)]);
            const auto s = circumsphere(x);
            if (!s || s->lambda.minCoeff() <= 1e-10)
                return;
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& p : pts)
                nearest = std::min(nearest, (p - s->center).norm());
            if (nearest < s->radius - 1e-9)
                return;
            out.push_back({s->center, s->radius, idx, 0, m - 1});
        });
    std::sort(out.begin(), out.end(), [](const Crit& a, const Crit& b) {
        return a.radius < b.radius || (a.radius == b.radius && a.boundary < b.boundary);
    });
    return out;
}

// d = 1: a pair (a, b) is critical iff the number g of points strictly
// between them satisfies k-2 <= g <= k-1; the index is g + 2 - k. Counts per
// index for centers in [lo, hi].
inline std::vector<long long> line_counts(std::vector<double> xs, int k, double lo, double hi)
{
    std::sort(xs.begin(), xs.end());
    std::vector<long long> counts(2, 0);
    const auto n = static_cast<long long>(xs.size());
    if (k == 1)
        for (double x : xs)
            if (x >= lo && x <= hi)
                ++counts[0];
    for (long long g = std::max(0, k - 2); g <= k - 1; ++g)
        for (long long i = 0; i + g + 1 < n; ++i)
        {
            const double c = 0.5 * (xs[static_cast<std::size_t>(i)] + xs[static_cast<std::size_t>(i + g + 1)]);
            if (c >= lo && c <= hi)
                ++counts[static_cast<std::size_t>(g + 2 - k)];
        }
    return counts;
}

// k-th smallest distance by full sort.
inline double kth_distance(const std::vector<Vec>& pts, int k, const Vec& x)
{
    std::vector<double> d;
    for (const auto& p : pts)
        d.push_back((p - x).norm());
    std::sort(d.begin(), d.end());
    return d[static_cast<std::size_t>(k - 1)];
}

inline std::vector<Vec> uniform_points(std::mt19937_64& rng, int n, int d, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i)
    {
        Vec p(d);
        for (int a = 0; a < d; ++a)
            p[a] = u(rng);
        pts.push_back(p);
    }
    return pts;
}

inline long long binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

}  // namespace oracle

#endif
