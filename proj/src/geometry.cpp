#include "knn_morse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "combinations.hpp"

namespace knn_morse
{

// ---------------------------------------------------------------------------
// Box / PointCloud

bool Box::contains(const Point& p) const
{
    for (int i = 0; i < dim(); ++i)
        if (p[i] < lo[i] || p[i] > hi[i])
            return false;
    return true;
}

double Box::volume() const
{
    double v = 1.0;
    for (int i = 0; i < dim(); ++i)
        v *= std::max(0.0, hi[i] - lo[i]);
    return v;
}

Box Box::dilated(double margin) const
{
    Box b = *this;
    b.lo.array() -= margin;
    b.hi.array() += margin;
    return b;
}

Box Box::unit(int dim)
{
    return Box{Point::Zero(dim), Point::Ones(dim)};
}

PointCloud::PointCloud(int dim, const std::vector<Point>& points, std::vector<int> labels)
    : coords_(dim, static_cast<Eigen::Index>(points.size())), labels_(std::move(labels))
{
    if (dim < 1 || dim > kMaxDim)
        throw InvalidConfig("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        if (points[i].size() != dim)
            throw InvalidConfig("point " + std::to_string(i) + " has " + std::to_string(points[i].size()) +
                                " coordinates, expected " + std::to_string(dim));
        coords_.col(static_cast<Eigen::Index>(i)) = points[i];
    }
    finish();
}

PointCloud::PointCloud(Eigen::MatrixXd coords, std::vector<int> labels)
    : coords_(std::move(coords)), labels_(std::move(labels))
{
    if (coords_.rows() < 1 || coords_.rows() > kMaxDim)
        throw InvalidConfig("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    finish();
}

void PointCloud::finish()
{
    if (labels_.empty())
    {
        labels_.resize(size());
        std::iota(labels_.begin(), labels_.end(), 0);
    }
    if (labels_.size() != size())
        throw InvalidConfig("label count does not match point count");
    std::unordered_set<int> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size())
        throw InvalidConfig("point labels must be unique");
    if (!coords_.allFinite())
        throw InvalidConfig("coordinates must be finite");

    scale_ = 1.0;
    if (size() >= 2)
    {
        const double diag = (coords_.rowwise().maxCoeff() - coords_.rowwise().minCoeff()).norm();
        if (diag > 0.0)
            scale_ = diag;
    }
}

std::size_t PointCloud::index_of(int label) const
{
    if (label >= 0 && static_cast<std::size_t>(label) < size() && labels_[static_cast<std::size_t>(label)] == label)
        return static_cast<std::size_t>(label);
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw IndexOutOfRange("no point with label " + std::to_string(label));
    return static_cast<std::size_t>(it - labels_.begin());
}

Box PointCloud::bounding_box() const
{
    if (empty())
        return Box{Point::Zero(dim()), Point::Zero(dim())};
    return Box{coords_.rowwise().minCoeff(), coords_.rowwise().maxCoeff()};
}

// ---------------------------------------------------------------------------
// Circumspheres

namespace
{

// Shared solver. `get(j)` returns point j of the subset, 0 <= j < m.
//
// The edge matrix A = [x1-x0 ... x_{m-1}-x0] is factored as A P = Q R with
// column pivoting. The first m-1 columns of Q span the affine hull; in that
// basis the equidistance conditions 2 <x_i - x0, u> = |x_i - x0|^2 become
// R^T y = P^T b, and the affine weights follow from R P^T t = y.
template <typename Get>
std::optional<SimplexFit> fit_impl(int m, int dim, Get get, double rank_tol)
{
    SimplexFit fit;
    const Point x0 = get(0);
    if (m == 1)
    {
        fit.center = x0;
        fit.radius = 0.0;
        fit.weights = SmallVector::Ones(1);
        return fit;
    }
    const int q = m - 1;
    if (q > dim)
        return std::nullopt;

    SmallMatrix A(dim, q);
    SmallVector b(q);
    for (int j = 0; j < q; ++j)
    {
        A.col(j) = get(j + 1) - x0;
        b[j] = 0.5 * A.col(j).squaredNorm();
    }

    Eigen::ColPivHouseholderQR<SmallMatrix> qr(A);
    const auto& packed = qr.matrixQR();
    for (int j = 0; j < q; ++j)
        if (!(std::abs(packed(j, j)) > rank_tol))
            return std::nullopt;

    const auto R = packed.topLeftCorner(q, q).template triangularView<Eigen::Upper>();
    SmallVector pb = qr.colsPermutation().transpose() * b;
    SmallVector y = R.transpose().solve(pb);

    SmallVector padded = SmallVector::Zero(dim);
    padded.head(q) = y;
    Point offset = qr.householderQ() * padded;

    SmallVector tp = R.solve(y);
    SmallVector t = qr.colsPermutation() * tp;

    fit.center = x0 + offset;
    fit.radius = offset.norm();
    fit.weights.resize(m);
    fit.weights[0] = 1.0 - t.sum();
    fit.weights.tail(q) = t;
    return fit;
}

}  // namespace

double point_set_scale(std::span<const Point> X)
{
    if (X.size() < 2)
        return 1.0;
    Point lo = X[0], hi = X[0];
    for (const auto& p : X)
    {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double d = (hi - lo).norm();
    return d > 0.0 ? d : 1.0;
}

std::optional<SimplexFit> fit_simplex(std::span<const Point> X, double rank_tol)
{
    if (X.empty())
        return std::nullopt;
    const int dim = static_cast<int>(X[0].size());
    return fit_impl(static_cast<int>(X.size()), dim, [&](int j) -> Point { return X[static_cast<std::size_t>(j)]; },
                    rank_tol);
}

std::optional<SimplexFit> fit_simplex(const PointCloud& cloud, std::span<const int> idx, double rank_tol)
{
    if (idx.empty())
        return std::nullopt;
    return fit_impl(
        static_cast<int>(idx.size()), cloud.dim(),
        [&](int j) -> Point { return cloud.column(static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])); },
        rank_tol);
}

Circumsphere circumsphere(std::span<const Point> X, const Tolerances& tol)
{
    if (X.empty())
        throw AffinelyDependent("circumsphere of an empty set");
    const auto fit = fit_simplex(X, tol.general_position * point_set_scale(X));
    if (!fit)
        throw AffinelyDependent("points are affinely dependent");
    Circumsphere s;
    s.center = fit->center;
    s.radius = fit->radius;
    s.support.resize(X.size());
    std::iota(s.support.begin(), s.support.end(), 0);
    return s;
}

Circumsphere circumsphere(const PointCloud& cloud, std::span<const int> labels, const Tolerances& tol)
{
    std::vector<Point> X;
    X.reserve(labels.size());
    for (int l : labels)
        X.push_back(cloud.point(cloud.index_of(l)));
    Circumsphere s = circumsphere(std::span<const Point>(X), tol);
    s.support.assign(labels.begin(), labels.end());
    return s;
}

// ---------------------------------------------------------------------------
// Barycentric coordinates

std::vector<double> barycentric_coords(const Point& q, std::span<const Point> X, const Tolerances& tol)
{
    if (X.empty())
        throw AffinelyDependent("barycentric coordinates with respect to an empty set");
    const int dim = static_cast<int>(X[0].size());
    const int m = static_cast<int>(X.size());
    const double scale = point_set_scale(X);
    const Point x0 = X[0];
    const Point rel = q - x0;

    if (m == 1)
    {
        if (rel.norm() > tol.sphere * scale)
            throw OutOfAffineHull("point differs from the single support point");
        return {1.0};
    }
    const int qd = m - 1;
    if (qd > dim)
        throw AffinelyDependent("more than dim+1 points");

    SmallMatrix A(dim, qd);
    for (int j = 0; j < qd; ++j)
        A.col(j) = X[static_cast<std::size_t>(j + 1)] - x0;
    Eigen::ColPivHouseholderQR<SmallMatrix> qr(A);
    const auto& packed = qr.matrixQR();
    for (int j = 0; j < qd; ++j)
        if (!(std::abs(packed(j, j)) > tol.general_position * scale))
            throw AffinelyDependent("points are affinely dependent");

    SmallVector qtr = qr.householderQ().transpose() * SmallVector(rel);
    const double residual = qtr.tail(dim - qd).norm();
    if (residual > tol.sphere * std::max(scale, rel.norm()))
        throw OutOfAffineHull("point is off the affine hull (residual " + std::to_string(residual) + ")");

    const auto R = packed.topLeftCorner(qd, qd).triangularView<Eigen::Upper>();
    SmallVector tp = R.solve(qtr.head(qd));
    SmallVector t = qr.colsPermutation() * tp;

    std::vector<double> w(static_cast<std::size_t>(m));
    w[0] = 1.0 - t.sum();
    for (int j = 0; j < qd; ++j)
        w[static_cast<std::size_t>(j + 1)] = t[j];
    return w;
}

bool in_open_simplex(const Point& q, std::span<const Point> X, const Tolerances& tol)
{
    if (X.size() == 1)
        return (q - X[0]).norm() <= tol.sphere * std::max(1.0, X[0].norm());
    const auto w = barycentric_coords(q, X, tol);
    return std::all_of(w.begin(), w.end(), [&](double v) { return v > tol.barycentric; });
}

// ---------------------------------------------------------------------------
// General position

std::string to_string(ViolationKind kind)
{
    switch (kind)
    {
    case ViolationKind::AffineDependence: return "affine-dependence";
    case ViolationKind::Cosphericity: return "cosphericity";
    case ViolationKind::Coincidence: return "coincidence";
    }
    return "unknown";
}

GeneralPositionReport check_general_position(const PointCloud& cloud, const Tolerances& tol)
{
    GeneralPositionReport report;
    const int n = static_cast<int>(cloud.size());
    const int d = cloud.dim();
    const double band = tol.general_position * cloud.scale();

    auto labels_of = [&](std::span<const int> idx) {
        std::vector<int> out;
        out.reserve(idx.size());
        for (int i : idx)
            out.push_back(cloud.label(static_cast<std::size_t>(i)));
        return out;
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((cloud.column(i) - cloud.column(j)).norm() <= band)
            {
                const int pair[2] = {i, j};
                report.violations.push_back({labels_of(pair), ViolationKind::Coincidence});
            }

    report.exhaustive = binomial_double(n, d + 2) <= kExhaustiveSubsetLimit;
    if (report.exhaustive)
    {
        // Affine dependence of subsets of size 3..d+1 (size 2 is coincidence).
        // Also: a further point on the sphere of a non-full subset's minimal
        // circumsphere, or on the circumsphere of a full simplex.
        for (int m = 2; m <= std::min(d + 1, n); ++m)
        {
            for_each_combination(n, m, [&](std::span<const int> idx) {
                const auto fit = fit_simplex(cloud, idx, band);
                if (!fit)
                {
                    if (m >= 3)
                        report.violations.push_back({labels_of(idx), ViolationKind::AffineDependence});
                    return;
                }
                for (int p = 0; p < n; ++p)
                {
                    if (std::find(idx.begin(), idx.end(), p) != idx.end())
                        continue;
                    // For m == d+1 only report each (d+2)-set once, from its
                    // lexicographically first d+1 subset.
                    if (m == d + 1 && p < idx.back())
                        continue;
                    const double dist = (cloud.column(p) - fit->center).norm();
                    if (std::abs(dist - fit->radius) <= band)
                    {
                        std::vector<int> all(idx.begin(), idx.end());
                        all.push_back(p);
                        std::sort(all.begin(), all.end());
                        report.violations.push_back({labels_of(all), ViolationKind::Cosphericity});
                    }
                }
            });
        }
    }
    report.ok = report.violations.empty();
    return report;
}

}  // namespace knn_morse
