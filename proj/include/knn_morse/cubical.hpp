// Grid oracle for the homology of planar k-fold covers.
//
// The sub-level set {d^(k) <= r} is rasterized by sampling d^(k) on grid
// nodes. Covered nodes, edges between 4-adjacent covered nodes, and fully
// covered 2x2 blocks form a planar cubical complex; beta_0 comes from
// union-find and beta_1 = beta_0 - (V - E + F).
//
// Near a critical level the features of the cover shrink to the size of
// |r - r_c|. betti_refined subdivides the base cells that the boundary of the
// cover crosses in a complicated way (quadtree, hanging nodes kept on the
// coarse sides) and discards components and holes shallower than half the
// distance from r to the nearest critical level.

#ifndef KNN_MORSE_CUBICAL_HPP
#define KNN_MORSE_CUBICAL_HPP

#include <optional>
#include <span>
#include <vector>

#include "knn_morse/critical.hpp"
#include "knn_morse/homology.hpp"
#include "knn_morse/types.hpp"

namespace knn_morse
{

inline constexpr int kMinResolution = 64;

/// d^(k) sampled at the cell centers of a resolution x resolution grid.
struct GridField
{
    Box bounds;
    int resolution = 0;
    int k = 1;
    std::vector<double> values;  // row-major, values[iy * resolution + ix]

    double cell_width() const { return (bounds.hi[0] - bounds.lo[0]) / resolution; }
    double cell_height() const { return (bounds.hi[1] - bounds.lo[1]) / resolution; }
    double x_at(int ix) const { return bounds.lo[0] + (ix + 0.5) * cell_width(); }
    double y_at(int iy) const { return bounds.lo[1] + (iy + 0.5) * cell_height(); }
    Point cell_center(int ix, int iy) const;
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * resolution + ix]; }
};

/// Throws ResolutionTooLow below kMinResolution; InvalidConfig unless dim == 2.
GridField sample_grid(const PointCloud& cloud, int k, const Box& bounds, int resolution);

/// Betti numbers (beta_0, beta_1) of the covered cells {value <= r}.
BettiVector betti_sublevel(const GridField& field, double r);

/// Same for an arbitrary node mask (row-major, nx * ny).
BettiVector betti_of_mask(int nx, int ny, std::span<const unsigned char> covered);

struct FiltrationRecord
{
    Point center;
    double radius = 0.0;
    int index = 0;
    long long delta = 1;
    int n_boundary = 0;
    int n_interior = 0;
    /// Zero-radius minima for k = 1 share one level and are reported as one
    /// record with their budgets summed.
    std::size_t group_size = 1;
    double epsilon = 0.0;
    BettiVector betti_before;  // at radius - epsilon, base resolution
    BettiVector betti_after;   // at radius + epsilon, base resolution
    int delta_plus = 0;
    int delta_minus = 0;
    std::vector<int> resolutions;
    std::vector<BettiVector> before_by_resolution;
    std::vector<BettiVector> after_by_resolution;
    bool stable = true;  // all resolutions agree
    bool pass = false;
};

struct HomologyReportOptions
{
    std::optional<double> epsilon;  // default: 0.4 x gap to the adjacent levels
    int resolution = 512;           // evaluated at resolution and 2 x resolution
    std::optional<Box> bounds;      // default: default_bounds()
    bool refine = true;
    Tolerances tol{};
};

/// Square box around the cloud padded so that every sub-level set evaluated
/// by the report lies strictly inside it.
Box default_bounds(const PointCloud& cloud, std::span<const CriticalPoint> crits);

/// Betti numbers of {d^(k) <= r} on the base grid of `field`, adaptively
/// refined; `crits` are all critical points of d^(k).
BettiVector betti_refined(const PointCloud& cloud, const GridField& field, double r,
                          std::span<const CriticalPoint> crits);

struct RefinedBetti
{
    BettiVector betti;  // depth-filtered
    BettiVector raw;    // every component and hole of the cell complex
    long long euler = 0;
    std::size_t refined_cells = 0;
    std::size_t leaves = 0;
    double tau = 0.0;  // depth threshold
};

RefinedBetti betti_refined_detail(const PointCloud& cloud, const GridField& field, double r,
                                  std::span<const CriticalPoint> crits);

/// One record per critical level. Requires dim == 2 and distinct positive
/// critical radii (InvalidConfig otherwise).
std::vector<FiltrationRecord> homology_change_report(const PointCloud& cloud, int k,
                                                     std::span<const CriticalPoint> crits,
                                                     const HomologyReportOptions& options = {});

}  // namespace knn_morse

#endif
