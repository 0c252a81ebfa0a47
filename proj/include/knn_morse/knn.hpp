// The k-nearest-neighbor distance function, its min-max representation over
// k-subsets, and order-k Voronoi cell membership. Everything here is a plain
// full scan and serves as the reference the other modules are checked
// against.

#ifndef KNN_MORSE_KNN_HPP
#define KNN_MORSE_KNN_HPP

#include <span>
#include <utility>
#include <vector>

#include "knn_morse/types.hpp"

namespace knn_morse
{

struct Neighbor
{
    double distance;
    int label;
};

struct KnnQueryResult
{
    double value = 0.0;
    int kth_neighbor = -1;
    /// The k smallest distances, ascending, with labels.
    std::vector<Neighbor> sorted_prefix;
    /// The k-th distance ties with the (k-1)-th or (k+1)-th within the
    /// on-sphere band; a general-position warning, not resolved.
    bool tie = false;
};

/// Throws InvalidConfig for k < 1 and KTooLarge for k > |P|.
void check_k(const PointCloud& cloud, int k);

/// k-th smallest distance from x to the cloud. Throws KTooLarge.
KnnQueryResult knn_distance(const PointCloud& cloud, int k, const Point& x, const Tolerances& tol = {});

/// Value only. Same selection, without building the prefix.
double knn_value(const PointCloud& cloud, int k, const Point& x);

/// Upper limit on C(n, k) accepted by minmax_eval.
inline constexpr double kMaxMinmaxSubsets = 1e6;

/// min over all k-subsets S of max_{p in S} |x - p|. Throws TooManySubsets.
double minmax_eval(const PointCloud& cloud, int k, const Point& x);

/// True iff y lies in the order-k Voronoi cell of the labels X:
/// max_{x in X} |x - y| <= min_{x' not in X} |x' - y| + band.
bool order_k_cell_contains(std::span<const int> X, const PointCloud& cloud, const Point& y,
                           const Tolerances& tol = {});

}  // namespace knn_morse

#endif
