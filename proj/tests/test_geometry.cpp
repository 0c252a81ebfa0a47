#include <doctest.h>

#include <random>

#include "knn_morse/geometry.hpp"
#include "support.hpp"

using namespace knn_morse;

TEST_SUITE("geometry_core")
{
TEST_CASE("circumsphere of a pair is the midpoint")
{
    const std::vector<Point> x{pt({0, -1}), pt({0, 1})};
    const auto s = circumsphere(x);
    CHECK(s.center.norm() < 1e-15);
    CHECK(s.radius == doctest::Approx(1.0));
}

TEST_CASE("circumsphere agrees with the Gram-system oracle")
{
    std::mt19937_64 rng(7);
    for (int d = 2; d <= 4; ++d)
        for (int m = 2; m <= d + 1; ++m)
            for (int trial = 0; trial < 50; ++trial)
            {
                const auto pts = oracle::uniform_points(rng, m, d, -1, 1);
                const auto ref = oracle::circumsphere(pts);
                REQUIRE(ref);
                const std::vector<Point> x(pts.begin(), pts.end());
                const auto s = circumsphere(x);
                CHECK((s.center - ref->center).norm() < 1e-8 * (1 + ref->radius));
                CHECK(std::abs(s.radius - ref->radius) < 1e-8 * (1 + ref->radius));
                const auto w = barycentric_coords(s.center, x);
                for (int i = 0; i < m; ++i)
                    CHECK(std::abs(w[static_cast<std::size_t>(i)] - ref->lambda[i]) < 1e-7 * (1 + ref->lambda.cwiseAbs().maxCoeff()));
            }
}

TEST_CASE("collinear triple is affinely dependent")
{
    const std::vector<Point> x{pt({0, 0}), pt({1, 1}), pt({2, 2})};
    CHECK_THROWS_AS(circumsphere(x), AffinelyDependent);
}

TEST_CASE("obtuse triangle circumcenter lies outside the open simplex")
{
    const std::vector<Point> x{pt({0, 0}), pt({4, 0}), pt({2, 0.5})};
    const auto s = circumsphere(x);
    CHECK(s.center[0] == doctest::Approx(2.0));
    CHECK(s.center[1] == doctest::Approx(-3.75));
    CHECK_FALSE(in_open_simplex(s.center, x));
    const std::vector<Point> acute{pt({0, 0}), pt({2, 0}), pt({1, 1.5})};
    CHECK(in_open_simplex(circumsphere(acute).center, acute));
}

TEST_CASE("barycentric coordinates outside the affine hull")
{
    const std::vector<Point> x{pt({0, 0}), pt({1, 0})};
    CHECK_THROWS_AS(barycentric_coords(pt({0.5, 1}), x), OutOfAffineHull);
    const auto w = barycentric_coords(pt({0.25, 0}), x);
    CHECK(w[0] == doctest::Approx(0.75));
    CHECK(w[1] == doctest::Approx(0.25));
}

TEST_CASE("general position violations are detected")
{
    auto kinds = [](const PointCloud& c) {
        std::vector<std::string> out;
        for (const auto& v : check_general_position(c).violations)
            out.push_back(to_string(v.kind));
        return out;
    };
    auto has = [](const std::vector<std::string>& v, const char* s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    CHECK(has(kinds(cloud2({{0, 0}, {1, 0}, {0, 1}, {1, 1}})), "cosphericity"));
    CHECK(has(kinds(cloud2({{0, 0}, {1, 1}, {2, 2}})), "affine-dependence"));
    CHECK(has(kinds(cloud2({{0, 0}, {0, 0}, {1, 0.3}})), "coincidence"));
    std::mt19937_64 rng(3);
    CHECK(check_general_position(to_cloud(oracle::uniform_points(rng, 20, 2))).ok);
}

TEST_CASE("point cloud basics")
{
    const PointCloud c = cloud2({{0, 0}, {3, 4}});
    CHECK(c.size() == 2);
    CHECK(c.dim() == 2);
    CHECK(c.scale() == doctest::Approx(5.0));
    CHECK(c.index_of(1) == 1);
    const Box b = Box::unit(2).dilated(0.5);
    CHECK(b.volume() == doctest::Approx(4.0));
    CHECK(b.contains(pt({-0.4, 1.4})));
}
}
