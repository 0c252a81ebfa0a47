#include <doctest.h>

#include <random>

#include "knn_morse/knn.hpp"
#include "support.hpp"

using namespace knn_morse;

TEST_SUITE("knn_distance")
{
TEST_CASE("k-th distance matches a full sort")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto pts = oracle::uniform_points(rng, 15, 3);
        const PointCloud c = to_cloud(pts);
        const oracle::Vec x = oracle::uniform_points(rng, 1, 3)[0];
        for (int k = 1; k <= 15; k += 3)
        {
            const double ref = oracle::kth_distance(pts, k, x);
            CHECK(knn_distance(c, k, x).value == doctest::Approx(ref).epsilon(1e-14));
            CHECK(knn_value(c, k, x) == doctest::Approx(ref).epsilon(1e-14));
        }
    }
}

TEST_CASE("min-max over k-subsets equals the k-th distance")
{
    std::mt19937_64 rng(5);
    const auto pts = oracle::uniform_points(rng, 8, 2);
    const PointCloud c = to_cloud(pts);
    for (int k = 1; k <= 8; ++k)
        CHECK(std::abs(minmax_eval(c, k, pt({0.3, 0.6})) - knn_distance(c, k, pt({0.3, 0.6})).value) < 1e-12);
}

TEST_CASE("ties and errors")
{
    const PointCloud c = cloud2({{-1, 0}, {1, 0}, {0, 5}});
    const auto q = knn_distance(c, 1, pt({0, 0}));
    CHECK(q.tie);
    CHECK(q.value == doctest::Approx(1.0));
    CHECK_FALSE(knn_distance(c, 3, pt({0, 0})).tie);
    CHECK_THROWS_AS(knn_distance(c, 4, pt({0, 0})), KTooLarge);
    CHECK_THROWS_AS(knn_distance(c, 0, pt({0, 0})), InvalidConfig);
}

TEST_CASE("order-k cell membership")
{
    const PointCloud c = cloud2({{0, 0}, {1, 0}, {5, 0}});
    const std::vector<int> near{0, 1};
    const std::vector<int> far{0, 2};
    CHECK(order_k_cell_contains(near, c, pt({0.5, 0}), {}));
    CHECK_FALSE(order_k_cell_contains(far, c, pt({0.5, 0}), {}));
}
}
