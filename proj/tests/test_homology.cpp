#include <doctest.h>

#include <random>

#include "knn_morse/critical.hpp"
#include "knn_morse/homology.hpp"
#include "support.hpp"

using namespace knn_morse;

namespace
{

SimplicialComplex from_facets(int n, const std::vector<Simplex>& facets)
{
    SimplicialComplex K(n);
    for (const auto& f : facets)
        K.add_with_faces(f);
    return K;
}

}  // namespace

TEST_SUITE("simplicial_homology")
{
TEST_CASE("skeleton sizes")
{
    const auto K = skeleton_complex(5, 1);
    CHECK(K.size() == 5 + 10);
    CHECK(K.dimension() == 1);
    CHECK(skeleton_complex(4, 3).size() == 15);
    CHECK_THROWS_AS(skeleton_complex(3, 3), InvalidConfig);
    CHECK_THROWS_AS(skeleton_complex(3, -1), InvalidConfig);
}

TEST_CASE("Betti numbers of standard complexes")
{
    CHECK(betti_gf2(from_facets(3, {{0, 1}, {1, 2}, {0, 2}})) == BettiVector{{1, 1}});
    CHECK(betti_gf2(from_facets(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}})) == BettiVector{{1, 0, 1}});
    CHECK(betti_gf2(from_facets(4, {{0, 1}, {2, 3}})) == BettiVector{{2}});
    // 7-vertex torus
    std::vector<Simplex> torus;
    for (int i = 0; i < 7; ++i)
    {
        torus.push_back({i, (i + 1) % 7, (i + 3) % 7});
        torus.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    const auto T = from_facets(7, torus);
    CHECK(T.euler_characteristic() == 0);
    CHECK(betti_gf2(T) == BettiVector{{1, 2, 1}});
    // 6-vertex real projective plane: nontrivial over GF(2) in every degree.
    const auto RP2 = from_facets(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                                     {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5}, {1, 3, 5}});
    CHECK(RP2.euler_characteristic() == 1);
    CHECK(betti_gf2(RP2) == BettiVector{{1, 1, 1}});
}

TEST_CASE("skeleton Betti numbers follow the closed form")
{
    for (int n = 2; n <= 6; ++n)
        for (int mu = 1; mu <= n - 1; ++mu)
        {
            const BettiVector b = betti_gf2(skeleton_complex(n, mu - 1));
            const long long top = mu == 1 ? oracle::binomial(n - 1, 1) + 1 : oracle::binomial(n - 1, mu);
            CHECK(b[static_cast<std::size_t>(mu - 1)] == top);
            for (int q = 1; q < mu - 1; ++q)
                CHECK(b[static_cast<std::size_t>(q)] == 0);
            if (mu > 1)
                CHECK(b[0] == 1);
        }
}

TEST_CASE("auxiliary complex of the four basic configurations")
{
    const double s = std::sqrt(3.0) / 2;
    struct Case
    {
        PointCloud cloud;
        std::vector<int> boundary;
        int mu;
    };
    const std::vector<Case> cases{
        {cloud2({{0, -1}, {0, 1}}), {0, 1}, 0},
        {cloud2({{0, -1}, {0, 1}, {0.1, 0}}), {0, 1}, 1},
        {cloud2({{1, 0}, {-0.5, s}, {-0.5, -s}}), {0, 1, 2}, 1},
        {cloud2({{1, 0}, {-0.5, s}, {-0.5, -s}, {0.1, 0}}), {0, 1, 2}, 2},
    };
    for (const auto& c : cases)
    {
        const auto cp = classify(make_candidate(c.cloud, c.boundary), c.cloud, 2);
        REQUIRE(cp);
        REQUIRE(cp->index == c.mu);
        const auto aux = auxiliary_complex_from_data(*cp, c.cloud, 2);
        const int nb = static_cast<int>(cp->boundary.size());
        if (c.mu == 0)
            CHECK(aux.complex.size() == 0);
        else
            CHECK(aux.complex == skeleton_complex(nb, c.mu - 1));
        // Every subset of the boundary with k - N^I elements is active.
        CHECK(static_cast<long long>(aux.active_subsets.size()) ==
              oracle::binomial(nb, 2 - static_cast<int>(cp->interior.size())));
    }
}

TEST_CASE("auxiliary complex equals the skeleton on random clouds")
{
    std::mt19937_64 rng(77);
    for (int k = 1; k <= 3; ++k)
    {
        const PointCloud c = to_cloud(oracle::uniform_points(rng, 20, 2));
        for (const auto& cp : enumerate_critical_points(c, k))
        {
            if (cp.index == 0)
                continue;
            const auto aux = auxiliary_complex_from_data(cp, c, k);
            CHECK(aux.complex == skeleton_complex(static_cast<int>(cp.boundary.size()), cp.index - 1));
        }
    }
}
}
