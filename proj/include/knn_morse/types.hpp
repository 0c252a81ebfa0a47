// Core value types shared by every module: points, clouds, boxes, tolerances
// and the exception hierarchy.

#ifndef KNN_MORSE_TYPES_HPP
#define KNN_MORSE_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace knn_morse
{

/// Largest ambient dimension supported. Points and the small dense systems
/// built from them live on the stack up to this size.
inline constexpr int kMaxDim = 8;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim + 1, kMaxDim + 1>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim + 1, 1>;

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class AffinelyDependent : public Error { public: using Error::Error; };
class OutOfAffineHull : public Error { public: using Error::Error; };
class GeneralPositionViolation : public Error { public: using Error::Error; };
class KTooLarge : public Error { public: using Error::Error; };
class TooManySubsets : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };
class ResolutionTooLow : public Error { public: using Error::Error; };
class TooIntense : public Error { public: using Error::Error; };
class InvalidConfig : public Error { public: using Error::Error; };
class IndexOutOfRange : public Error { public: using Error::Error; };

/// Numerical tolerances. Length-valued bands are multiplied by the scale of
/// the input (bounding-box diameter of the cloud); the barycentric threshold
/// is dimensionless.
struct Tolerances
{
    double sphere = 1e-9;            // on-sphere band, relative
    double barycentric = 1e-10;      // strict positivity of weights
    double general_position = 1e-7;  // affine-dependence / cosphericity, relative

    bool operator==(const Tolerances&) const = default;
};

/// Axis-aligned box [lo, hi].
struct Box
{
    Point lo;
    Point hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Point& p) const;
    double volume() const;
    Box dilated(double margin) const;
    static Box unit(int dim);
};

/// A finite labeled point set in R^dim. Coordinates are stored column-wise.
class PointCloud
{
public:
    PointCloud() = default;
    PointCloud(int dim, const std::vector<Point>& points, std::vector<int> labels = {});
    PointCloud(Eigen::MatrixXd coords, std::vector<int> labels = {});

    int dim() const { return static_cast<int>(coords_.rows()); }
    std::size_t size() const { return static_cast<std::size_t>(coords_.cols()); }
    bool empty() const { return coords_.cols() == 0; }

    Point point(std::size_t i) const { return coords_.col(static_cast<Eigen::Index>(i)); }
    auto column(std::size_t i) const { return coords_.col(static_cast<Eigen::Index>(i)); }
    const Eigen::MatrixXd& coords() const { return coords_; }

    int label(std::size_t i) const { return labels_[i]; }
    const std::vector<int>& labels() const { return labels_; }
    /// Position of a label; throws IndexOutOfRange if absent.
    std::size_t index_of(int label) const;

    /// Diagonal of the bounding box; 1 for clouds with fewer than two points.
    double scale() const { return scale_; }
    Box bounding_box() const;

private:
    void finish();

    Eigen::MatrixXd coords_;
    std::vector<int> labels_;
    double scale_ = 1.0;
};

}  // namespace knn_morse

#endif
