#include <doctest.h>

#include <random>

#include "knn_morse/cubical.hpp"
#include "support.hpp"

using namespace knn_morse;

TEST_SUITE("cubical_oracle")
{
TEST_CASE("Betti numbers of masks")
{
    // 5x5 ring
    std::vector<unsigned char> ring(25, 1);
    ring[12] = 0;
    CHECK(betti_of_mask(5, 5, ring) == BettiVector{{1, 1}});
    std::vector<unsigned char> blobs(25, 0);
    blobs[0] = blobs[1] = blobs[24] = 1;
    CHECK(betti_of_mask(5, 5, blobs) == BettiVector{{2}});
    // Diagonal neighbors are not connected.
    std::vector<unsigned char> diag(4, 0);
    diag[0] = diag[3] = 1;
    CHECK(betti_of_mask(2, 2, diag) == BettiVector{{2}});
    std::vector<unsigned char> none(9, 0);
    CHECK(betti_of_mask(3, 3, none) == BettiVector{});
}

TEST_CASE("grid sampling")
{
    const PointCloud c = cloud2({{0, 0}, {1, 0}});
    const Box b{pt({-1, -1}), pt({2, 2})};
    CHECK_THROWS_AS(sample_grid(c, 1, b, 32), ResolutionTooLow);
    const auto f = sample_grid(c, 1, b, 64);
    CHECK(f.values.size() == 64 * 64);
    CHECK(betti_sublevel(f, 0.3) == BettiVector{{2}});
    CHECK(betti_sublevel(f, 0.7) == BettiVector{{1}});
    CHECK(betti_sublevel(f, 0.0) == BettiVector{});
}

TEST_CASE("two points: components merge at the midpoint")
{
    const PointCloud c = cloud2({{0, 0}, {1, 0.3}});
    const auto crits = enumerate_critical_points(c, 1);
    HomologyReportOptions opt;
    opt.resolution = 128;
    const auto rec = homology_change_report(c, 1, crits, opt);
    REQUIRE(rec.size() == 2);
    CHECK(rec[0].group_size == 2);
    CHECK(rec[0].delta == 2);
    CHECK(rec[0].betti_after == BettiVector{{2}});
    CHECK(rec[1].betti_before == BettiVector{{2}});
    CHECK(rec[1].betti_after == BettiVector{{1}});
    CHECK(rec[1].delta_minus == 1);
    CHECK(rec[1].pass);
}

TEST_CASE("acute triangle opens and fills a hole")
{
    const double s = std::sqrt(3.0) / 2;
    const PointCloud c = cloud2({{1, 0}, {-0.5, s}, {-0.45, -s}});
    const auto crits = enumerate_critical_points(c, 1);
    HomologyReportOptions opt;
    opt.resolution = 128;
    for (const auto& r : homology_change_report(c, 1, crits, opt))
    {
        CHECK(r.pass);
        CHECK(r.stable);
        CHECK(r.delta_plus + r.delta_minus == r.delta);
    }
}

TEST_CASE("equal levels are rejected")
{
    const PointCloud twins = cloud2({{0, 0}, {1, 0}, {10, 0.5}, {11, 0.5}});
    const auto crits = enumerate_critical_points(twins, 1);
    CHECK_THROWS_AS(homology_change_report(twins, 1, crits), InvalidConfig);
}

TEST_CASE("adaptive complex: Euler relation and agreement with a fine uniform grid")
{
    std::mt19937_64 rng(31);
    for (int k = 1; k <= 2; ++k)
    {
        const PointCloud c = to_cloud(oracle::uniform_points(rng, 12, 2));
        const auto crits = enumerate_critical_points(c, k);
        const Box bounds = default_bounds(c, crits);
        const GridField coarse = sample_grid(c, k, bounds, 64);
        const GridField fine = sample_grid(c, k, bounds, 1024);
        for (std::size_t i = 1; i < crits.size(); ++i)
        {
            // Midway between consecutive levels every feature is wide enough
            // for the fine uniform grid to resolve it.
            const double r = 0.5 * (crits[i - 1].radius + crits[i].radius);
            if (crits[i].radius - crits[i - 1].radius < 0.02)
                continue;
            const RefinedBetti got = betti_refined_detail(c, coarse, r, crits);
            CHECK(got.raw[1] == got.raw[0] - got.euler);
            CHECK(got.betti == betti_sublevel(fine, r));
        }
    }
}
}
