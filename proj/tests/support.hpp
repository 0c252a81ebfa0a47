// Conversions between oracle vectors and library point clouds.

#ifndef KNN_MORSE_TESTS_SUPPORT_HPP
#define KNN_MORSE_TESTS_SUPPORT_HPP

#include <initializer_list>
#include <vector>

#include "knn_morse/types.hpp"
#include "oracles.hpp"

inline knn_morse::Point pt(std::initializer_list<double> xs)
{
    knn_morse::Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        p[i++] = x;
    return p;
}

inline knn_morse::PointCloud to_cloud(const std::vector<oracle::Vec>& pts)
{
    std::vector<knn_morse::Point> ps(pts.begin(), pts.end());
    return knn_morse::PointCloud(static_cast<int>(pts[0].size()), ps);
}

inline knn_morse::PointCloud cloud2(std::initializer_list<std::pair<double, double>> xy)
{
    std::vector<knn_morse::Point> ps;
    for (auto [x, y] : xy)
        ps.push_back(pt({x, y}));
    return knn_morse::PointCloud(2, ps);
}

inline std::vector<oracle::Vec> to_vecs(const knn_morse::PointCloud& c)
{
    std::vector<oracle::Vec> v;
    for (std::size_t i = 0; i < c.size(); ++i)
        v.push_back(c.column(i));
    return v;
}

#endif
