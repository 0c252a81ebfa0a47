#include <doctest.h>

#include <random>

#include "knn_morse/critical.hpp"
#include "knn_morse/knn.hpp"
#include "support.hpp"

using namespace knn_morse;

namespace
{

std::optional<CriticalPoint> classify_labels(const PointCloud& c, std::vector<int> labels, int k)
{
    return classify(make_candidate(c, labels), c, k);
}

void check_matches_oracle(const std::vector<CriticalPoint>& got, const std::vector<oracle::Crit>& want)
{
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
    {
        CHECK(got[i].boundary == want[i].boundary);
        CHECK(got[i].index == want[i].index);
        CHECK(static_cast<int>(got[i].interior.size()) == want[i].interior);
        CHECK(std::abs(got[i].radius - want[i].radius) < 1e-9);
        CHECK((got[i].center - want[i].center).norm() < 1e-9);
    }
}

}  // namespace

TEST_SUITE("critical_points")
{
TEST_CASE("classify: the four basic configurations")
{
    const PointCloud pair = cloud2({{0, -1}, {0, 1}});
    auto cp = classify_labels(pair, {0, 1}, 2);
    REQUIRE(cp);
    CHECK(cp->index == 0);
    CHECK(cp->delta == 1);
    CHECK(cp->radius == doctest::Approx(1.0));
    CHECK(cp->center.norm() < 1e-12);

    const PointCloud pair_in = cloud2({{0, -1}, {0, 1}, {0.1, 0}});
    cp = classify_labels(pair_in, {0, 1}, 2);
    REQUIRE(cp);
    CHECK(cp->index == 1);
    CHECK(cp->interior == std::vector<int>{2});

    const PointCloud obtuse = cloud2({{0, 0}, {4, 0}, {2, 0.5}});
    CHECK_FALSE(classify_labels(obtuse, {0, 1, 2}, 1));

    const double s = std::sqrt(3.0) / 2;
    const PointCloud tri_in = cloud2({{1, 0}, {-0.5, s}, {-0.5, -s}, {0.1, 0}});
    cp = classify_labels(tri_in, {0, 1, 2}, 2);
    REQUIRE(cp);
    CHECK(cp->index == 2);
    CHECK(cp->delta == 1);
}

TEST_CASE("two points")
{
    const PointCloud c = cloud2({{0, 0}, {1, 0.2}});
    const auto k1 = enumerate_critical_points(c, 1);
    REQUIRE(k1.size() == 3);
    CHECK(k1[0].radius == 0.0);
    CHECK(k1[1].radius == 0.0);
    CHECK(k1[2].index == 1);
    CHECK(euler_sum(k1) == 1);
    const auto k2 = enumerate_critical_points(c, 2);
    REQUIRE(k2.size() == 1);
    CHECK(k2[0].index == 0);
    CHECK(euler_sum(k2) == 1);
}

TEST_CASE("random clouds match the brute-force subset oracle")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 6; ++trial)
        for (int k = 1; k <= 3; ++k)
        {
            const auto pts = oracle::uniform_points(rng, 30, 2);
            const PointCloud c = to_cloud(pts);
            const auto crits = enumerate_critical_points(c, k);
            check_matches_oracle(crits, oracle::brute_force(pts, k));
            for (const auto& cp : crits)
            {
                CHECK(std::abs(knn_distance(c, k, cp.center).value - cp.radius) < 1e-9);
                CHECK(clarke_check(cp, c, k));
            }
            CHECK(euler_sum(crits) == 1);
        }
}

TEST_CASE("three-dimensional clouds match the oracle")
{
    std::mt19937_64 rng(99);
    for (int k = 1; k <= 3; ++k)
    {
        const auto pts = oracle::uniform_points(rng, 14, 3);
        const auto crits = enumerate_critical_points(to_cloud(pts), k);
        check_matches_oracle(crits, oracle::brute_force(pts, k));
        CHECK(euler_sum(crits) == 1);
    }
}

TEST_CASE("pruned enumeration equals brute force")
{
    std::mt19937_64 rng(17);
    for (int d = 1; d <= 3; ++d)
        for (int k = 1; k <= 3; ++k)
        {
            const PointCloud c = to_cloud(oracle::uniform_points(rng, d == 3 ? 40 : 90, d));
            EnumerationOptions brute, pruned;
            brute.strategy = EnumerationStrategy::BruteForce;
            pruned.strategy = EnumerationStrategy::Pruned;
            CHECK(enumerate_critical_points(c, k, pruned) == enumerate_critical_points(c, k, brute));

            Box w{pt({}), pt({})};
            w.lo = Point::Constant(d, 0.2);
            w.hi = Point::Constant(d, 0.7);
            brute.window = w;
            pruned.window = w;
            const auto in_window = enumerate_critical_points(c, k, pruned);
            CHECK(in_window == enumerate_critical_points(c, k, brute));
            for (const auto& cp : in_window)
                CHECK(w.contains(cp.center));
        }
}

TEST_CASE("index-0 critical points are local minima")
{
    std::mt19937_64 rng(8);
    const PointCloud c = to_cloud(oracle::uniform_points(rng, 25, 2));
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u;
    for (int k = 2; k <= 3; ++k)
        for (const auto& cp : enumerate_critical_points(c, k))
        {
            if (cp.index != 0)
                continue;
            // The minimum is strict only until another point reaches the sphere.
            double gap = cp.radius / 100;
            for (std::size_t i = 0; i < c.size(); ++i)
                if (std::find(cp.boundary.begin(), cp.boundary.end(), c.label(i)) == cp.boundary.end())
                    gap = std::min(gap, std::abs((c.column(i) - cp.center).norm() - cp.radius) / 2);
            for (int probe = 0; probe < 1000; ++probe)
            {
                Point dir = pt({g(rng), g(rng)});
                dir *= std::sqrt(u(rng)) * gap / dir.norm();
                CHECK(knn_value(c, k, cp.center + dir) >= cp.radius - 1e-12);
            }
        }
}

TEST_CASE("boundary size bounds")
{
    std::mt19937_64 rng(41);
    const PointCloud c = to_cloud(oracle::uniform_points(rng, 30, 2));
    for (int k = 1; k <= 4; ++k)
        for (const auto& cp : enumerate_critical_points(c, k))
        {
            const int nb = static_cast<int>(cp.boundary.size());
            const int lo = cp.radius == 0.0 ? 1 : std::max(2, cp.index + 1);
            CHECK(nb >= lo);
            CHECK(nb <= std::min(2 + 1, cp.index + k));
        }
}

TEST_CASE("clarke check")
{
    const PointCloud pair = cloud2({{0, -1}, {0, 1}});
    const auto cp = classify_labels(pair, {0, 1}, 2);
    REQUIRE(cp);
    CHECK(clarke_check(*cp, pair, 2));
    CHECK(cp->weights[0] == doctest::Approx(0.5));

    const PointCloud obtuse = cloud2({{0, 0}, {4, 0}, {2, 0.5}});
    CriticalPoint fake;
    fake.center = pt({2, -3.75});
    fake.radius = 4.25;
    fake.boundary = {0, 1, 2};
    CHECK_FALSE(clarke_check(fake, obtuse, 1));
}

TEST_CASE("budgets")
{
    CHECK(delta(3, 1) == 2);
    CHECK(delta(3, 2) == 1);
    CHECK(delta(4, 3) == 1);
    CHECK(delta(2, 0) == 1);
}

TEST_CASE("Morse validation")
{
    const PointCloud twins = cloud2({{0, 0}, {1, 0}, {10, 0}, {11, 0}});
    const auto crits = enumerate_critical_points(twins, 1);
    const auto mv = validate_morse(crits, twins);
    CHECK_FALSE(mv.distinct_values);
    CHECK(mv.zero_level_minima == 4);

    std::mt19937_64 rng(1);
    const PointCloud c = to_cloud(oracle::uniform_points(rng, 20, 2));
    const auto v = validate_morse(enumerate_critical_points(c, 2), c);
    CHECK(v.distinct_values);
    CHECK(v.nondegenerate);

    const PointCloud square = cloud2({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK_THROWS_AS(enumerate_critical_points(square, 1), GeneralPositionViolation);
}
}
