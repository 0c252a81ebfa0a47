// Small simplicial complexes with Betti numbers over GF(2), and the
// auxiliary complex attached to a critical point.

#ifndef KNN_MORSE_HOMOLOGY_HPP
#define KNN_MORSE_HOMOLOGY_HPP

#include <cstddef>
#include <set>
#include <vector>

#include "knn_morse/critical.hpp"
#include "knn_morse/types.hpp"

namespace knn_morse
{

/// Betti numbers beta_0, beta_1, ...
struct BettiVector
{
    std::vector<int> betti;

    int operator[](std::size_t i) const { return i < betti.size() ? betti[i] : 0; }
    std::size_t size() const { return betti.size(); }
    /// Alternating sum.
    long long euler() const;
    bool operator==(const BettiVector& o) const;
};

using Simplex = std::vector<int>;

/// Face-closed set of simplices on vertices 0..vertex_count-1. Simplices are
/// sorted vertex lists.
class SimplicialComplex
{
public:
    explicit SimplicialComplex(int vertex_count = 0) : vertex_count_(vertex_count) {}

    /// Inserts the simplex and all of its faces.
    void add_with_faces(Simplex s);

    int vertex_count() const { return vertex_count_; }
    /// -1 for the empty complex.
    int dimension() const;
    std::size_t size() const { return simplices_.size(); }
    const std::set<Simplex>& simplices() const { return simplices_; }
    /// Simplices of the given dimension, in lexicographic order.
    std::vector<Simplex> of_dimension(int dim) const;
    /// V - E + F - ...
    long long euler_characteristic() const;

    bool operator==(const SimplicialComplex& o) const { return simplices_ == o.simplices_; }

private:
    int vertex_count_;
    std::set<Simplex> simplices_;
};

/// All subsets of {0..n_vertices-1} of size <= skeleton_dim + 1.
SimplicialComplex skeleton_complex(int n_vertices, int skeleton_dim);

inline constexpr std::size_t kMaxComplexSize = 100000;

/// Betti numbers over GF(2) from boundary-matrix ranks. Throws TooLarge.
BettiVector betti_gf2(const SimplicialComplex& K);

/// Auxiliary complex built from order-k Voronoi data at a critical point.
struct AuxiliaryComplex
{
    std::vector<int> boundary;  // vertex i of the complex is boundary[i]
    /// Each qualifying k-subset P_j (labels) with c in its order-k cell.
    std::vector<std::vector<int>> active_subsets;
    /// N_j: boundary positions in P_j; complements: boundary positions not in P_j.
    std::vector<std::vector<int>> active_boundary;
    std::vector<std::vector<int>> complements;
    SimplicialComplex complex;
};

AuxiliaryComplex auxiliary_complex_from_data(const CriticalPoint& cp, const PointCloud& cloud, int k,
                                             const Tolerances& tol = {});

}  // namespace knn_morse

#endif
