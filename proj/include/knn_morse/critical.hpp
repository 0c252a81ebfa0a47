// Critical points of the k-NN distance function.
//
// A point c is critical iff it lies in the open simplex spanned by the data
// points on the sphere of radius d^(k)(c) about c. Its index is the number of
// data points in the closed ball minus k, and its homology budget is
// C(N_boundary - 1, index). Every critical point therefore arises as the
// circumcenter of an affinely independent subset X, with the points strictly
// inside the circumsphere numbering at most k-1.

#ifndef KNN_MORSE_CRITICAL_HPP
#define KNN_MORSE_CRITICAL_HPP

#include <optional>
#include <span>
#include <vector>

#include "knn_morse/geometry.hpp"
#include "knn_morse/types.hpp"

namespace knn_morse
{

struct CriticalPoint
{
    Point center;
    double radius = 0.0;
    std::vector<int> boundary;  // labels on the sphere, ascending
    std::vector<int> interior;  // labels strictly inside, ascending
    int index = 0;
    long long delta = 1;
    std::vector<double> weights;  // barycentric coordinates of center w.r.t. boundary

    bool operator==(const CriticalPoint&) const = default;
};

struct CandidateSubset
{
    std::vector<int> labels;
    Circumsphere sphere;
};

/// Builds a candidate from labels. Throws AffinelyDependent.
CandidateSubset make_candidate(const PointCloud& cloud, std::span<const int> labels, const Tolerances& tol = {});

/// The critical point generated by X, if any. Throws
/// GeneralPositionViolation when c(X) lies in the open simplex, the strict
/// interior count leaves a valid index, and another data point sits on the
/// sphere within the band.
std::optional<CriticalPoint> classify(const CandidateSubset& X, const PointCloud& cloud, int k,
                                      const Tolerances& tol = {});

enum class EnumerationStrategy
{
    Auto,        // brute force up to kBruteForceLimit points, pruned above
    BruteForce,  // every subset of size up to dim+1
    Pruned,      // cliques of the 2R neighbor graph
};

inline constexpr std::size_t kBruteForceLimit = 60;

struct EnumerationOptions
{
    std::optional<Box> window;
    EnumerationStrategy strategy = EnumerationStrategy::Auto;
    Tolerances tol{};
};

/// All critical points (with center in the window, when given), sorted by
/// radius then boundary labels.
std::vector<CriticalPoint> enumerate_critical_points(const PointCloud& cloud, int k,
                                                     const EnumerationOptions& options = {});

/// Independent check through the Clarke subdifferential: recomputes
/// r = d^(k)(center) and the active set (points at distance r), requires it to
/// equal cp.boundary, and solves for a strictly positive convex combination
/// of the gradients {center - p} that vanishes.
bool clarke_check(const CriticalPoint& cp, const PointCloud& cloud, int k, const Tolerances& tol = {});

/// C(n_boundary - 1, index).
long long delta(int n_boundary, int index);

/// Sum over critical points of (-1)^index * delta.
long long euler_sum(std::span<const CriticalPoint> crits);

struct MorseValidation
{
    bool distinct_values = true;
    double min_gap = 0.0;  // infinity when fewer than two positive radii
    bool nondegenerate = true;
    /// Number of zero-radius minima (k = 1). They share the level 0 and are
    /// excluded from the distinctness test.
    std::size_t zero_level_minima = 0;
};

MorseValidation validate_morse(std::span<const CriticalPoint> crits, const PointCloud& cloud,
                               const Tolerances& tol = {});

}  // namespace knn_morse

#endif
