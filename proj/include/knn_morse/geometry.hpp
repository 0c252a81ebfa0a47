// Geometric predicates on small point subsets: minimal circumspheres,
// barycentric coordinates, open-simplex membership and general-position
// validation.

#ifndef KNN_MORSE_GEOMETRY_HPP
#define KNN_MORSE_GEOMETRY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knn_morse/types.hpp"

namespace knn_morse
{

/// Sphere through all points of `support`, centered in their affine hull.
struct Circumsphere
{
    Point center;
    double radius = 0.0;
    std::vector<int> support;
};

/// Result of fitting the minimal circumsphere of m affinely independent
/// points: center, radius and the barycentric coordinates of the center.
struct SimplexFit
{
    Point center;
    double radius = 0.0;
    SmallVector weights;
};

/// Fits the circumsphere of X (1 <= |X| <= dim+1). Returns nullopt when X is
/// affinely dependent at absolute tolerance `rank_tol` (smallest pivot of the
/// column-pivoted QR of the edge matrix).
std::optional<SimplexFit> fit_simplex(std::span<const Point> X, double rank_tol);

/// Same, for the columns `idx` of a cloud. No allocation beyond the result.
std::optional<SimplexFit> fit_simplex(const PointCloud& cloud, std::span<const int> idx, double rank_tol);

/// Minimal circumsphere of 2 <= |X| <= dim+1 points. Singletons are accepted
/// and give a zero-radius sphere. Support holds positions 0..m-1.
/// Throws AffinelyDependent.
Circumsphere circumsphere(std::span<const Point> X, const Tolerances& tol = {});

/// Circumsphere of cloud points by label; support holds the labels.
Circumsphere circumsphere(const PointCloud& cloud, std::span<const int> labels, const Tolerances& tol = {});

/// Affine weights of q with respect to X, summing to one. Throws
/// OutOfAffineHull when q is farther than the tolerance from aff(X), and
/// AffinelyDependent when X is degenerate.
std::vector<double> barycentric_coords(const Point& q, std::span<const Point> X, const Tolerances& tol = {});

/// True iff q lies in the open simplex spanned by X: every barycentric
/// coordinate exceeds the strict-positivity tolerance. For a single point,
/// true iff q coincides with it.
bool in_open_simplex(const Point& q, std::span<const Point> X, const Tolerances& tol = {});

enum class ViolationKind
{
    AffineDependence,
    Cosphericity,
    Coincidence,
};

std::string to_string(ViolationKind kind);

struct Violation
{
    std::vector<int> labels;
    ViolationKind kind;
};

struct GeneralPositionReport
{
    bool ok = true;
    /// False when the cloud was above the exhaustive cutoff and only
    /// pairwise coincidence was tested here; candidate supports are then
    /// checked during enumeration.
    bool exhaustive = true;
    std::vector<Violation> violations;
};

/// Largest number of (dim+2)-subsets tested exhaustively.
inline constexpr double kExhaustiveSubsetLimit = 2e6;

GeneralPositionReport check_general_position(const PointCloud& cloud, const Tolerances& tol = {});

/// Diagonal of the bounding box of a set of points (1 if degenerate).
double point_set_scale(std::span<const Point> X);

}  // namespace knn_morse

#endif
