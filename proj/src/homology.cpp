#include "knn_morse/homology.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>

#include "combinations.hpp"
#include "knn_morse/knn.hpp"

namespace knn_morse
{

long long BettiVector::euler() const
{
    long long s = 0;
    for (std::size_t i = 0; i < betti.size(); ++i)
        s += (i % 2 == 0 ? 1 : -1) * betti[i];
    return s;
}

bool BettiVector::operator==(const BettiVector& o) const
{
    const std::size_t n = std::max(size(), o.size());
    for (std::size_t i = 0; i < n; ++i)
        if ((*this)[i] != o[i])
            return false;
    return true;
}

void SimplicialComplex::add_with_faces(Simplex s)
{
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty() || simplices_.count(s))
        return;
    for (int v : s)
        vertex_count_ = std::max(vertex_count_, v + 1);
    const int m = static_cast<int>(s.size());
    // Every nonempty subset.
    for (int size = 1; size <= m; ++size)
        for_each_combination(m, size, [&](std::span<const int> pick) {
            Simplex face;
            face.reserve(pick.size());
            for (int i : pick)
                face.push_back(s[static_cast<std::size_t>(i)]);
            simplices_.insert(std::move(face));
        });
}

int SimplicialComplex::dimension() const
{
    int d = -1;
    for (const auto& s : simplices_)
        d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
}

std::vector<Simplex> SimplicialComplex::of_dimension(int dim) const
{
    std::vector<Simplex> out;
    for (const auto& s : simplices_)
        if (static_cast<int>(s.size()) == dim + 1)
            out.push_back(s);
    return out;
}

long long SimplicialComplex::euler_characteristic() const
{
    long long chi = 0;
    for (const auto& s : simplices_)
        chi += (s.size() % 2 == 1) ? 1 : -1;
    return chi;
}

SimplicialComplex skeleton_complex(int n_vertices, int skeleton_dim)
{
    if (n_vertices < 0 || skeleton_dim < 0 || skeleton_dim > n_vertices - 1)
        throw InvalidConfig("skeleton_complex requires 0 <= skeleton_dim <= n_vertices - 1");
    SimplicialComplex K(n_vertices);
    for_each_combination(n_vertices, skeleton_dim + 1,
                         [&](std::span<const int> s) { K.add_with_faces(Simplex(s.begin(), s.end())); });
    return K;
}

namespace
{

// Rank over GF(2) of a matrix given as bit-packed columns.
int gf2_rank(std::vector<std::vector<std::uint64_t>> cols)
{
    int rank = 0;
    // pivot row -> reduced column having that lowest set bit
    std::map<std::size_t, std::size_t> pivots;
    for (std::size_t c = 0; c < cols.size(); ++c)
    {
        auto& col = cols[c];
        while (true)
        {
            // highest set bit
            std::size_t w = col.size();
            while (w > 0 && col[w - 1] == 0)
                --w;
            if (w == 0)
                break;
            const std::size_t bit = (w - 1) * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(col[w - 1])));
            auto it = pivots.find(bit);
            if (it == pivots.end())
            {
                pivots.emplace(bit, c);
                ++rank;
                break;
            }
            const auto& other = cols[it->second];
            for (std::size_t i = 0; i < col.size(); ++i)
                col[i] ^= other[i];
        }
    }
    return rank;
}

}  // namespace

BettiVector betti_gf2(const SimplicialComplex& K)
{
    if (K.size() > kMaxComplexSize)
        throw TooLarge("complex has " + std::to_string(K.size()) + " simplices");
    const int top = K.dimension();
    if (top < 0)
        return {};

    std::vector<std::vector<Simplex>> by_dim(static_cast<std::size_t>(top + 1));
    for (int p = 0; p <= top; ++p)
        by_dim[static_cast<std::size_t>(p)] = K.of_dimension(p);

    // rank of boundary map from p-simplices to (p-1)-simplices
    std::vector<int> rank(static_cast<std::size_t>(top + 2), 0);
    for (int p = 1; p <= top; ++p)
    {
        const auto& faces = by_dim[static_cast<std::size_t>(p - 1)];
        std::map<Simplex, std::size_t> row;
        for (std::size_t i = 0; i < faces.size(); ++i)
            row.emplace(faces[i], i);
        const std::size_t words = (faces.size() + 63) / 64;
        std::vector<std::vector<std::uint64_t>> cols;
        for (const auto& s : by_dim[static_cast<std::size_t>(p)])
        {
            std::vector<std::uint64_t> col(words, 0);
            for (std::size_t drop = 0; drop < s.size(); ++drop)
            {
                Simplex f;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop)
                        f.push_back(s[i]);
                const std::size_t r = row.at(f);
                col[r / 64] |= std::uint64_t{1} << (r % 64);
            }
            cols.push_back(std::move(col));
        }
        rank[static_cast<std::size_t>(p)] = gf2_rank(std::move(cols));
    }

    BettiVector b;
    for (int p = 0; p <= top; ++p)
    {
        const auto up = static_cast<std::size_t>(p);
        b.betti.push_back(static_cast<int>(by_dim[up].size()) - rank[up] - rank[up + 1]);
    }
    return b;
}

AuxiliaryComplex auxiliary_complex_from_data(const CriticalPoint& cp, const PointCloud& cloud, int k,
                                             const Tolerances& tol)
{
    AuxiliaryComplex aux;
    aux.boundary = cp.boundary;
    aux.complex = SimplicialComplex(static_cast<int>(cp.boundary.size()));

    const int n_boundary = static_cast<int>(cp.boundary.size());
    const int take = k - static_cast<int>(cp.interior.size());
    if (take < 1 || take > n_boundary)
        throw InvalidConfig("critical point is inconsistent with k");
    if (binomial_double(n_boundary, take) > 1e6)
        throw TooLarge("too many boundary subsets");

    for_each_combination(n_boundary, take, [&](std::span<const int> pick) {
        std::vector<int> subset = cp.interior;
        for (int i : pick)
            subset.push_back(cp.boundary[static_cast<std::size_t>(i)]);
        std::sort(subset.begin(), subset.end());
        if (!order_k_cell_contains(subset, cloud, cp.center, tol))
            return;

        std::vector<int> in(pick.begin(), pick.end());
        std::vector<int> out;
        for (int i = 0; i < n_boundary; ++i)
            if (std::find(in.begin(), in.end(), i) == in.end())
                out.push_back(i);
        aux.active_subsets.push_back(subset);
        aux.active_boundary.push_back(in);
        aux.complements.push_back(out);
        aux.complex.add_with_faces(out);
    });
    return aux;
}

}  // namespace knn_morse
