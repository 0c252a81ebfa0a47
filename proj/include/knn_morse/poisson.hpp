// Monte-Carlo estimation of the expected number of critical points of each
// index for homogeneous Poisson processes, and the linear fit in intensity.

#ifndef KNN_MORSE_POISSON_HPP
#define KNN_MORSE_POISSON_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "knn_morse/types.hpp"

namespace knn_morse
{

struct PoissonRunConfig
{
    int dim = 2;
    int k = 2;
    std::vector<double> intensities;
    Box window;
    /// Margin added around the window when sampling; nullopt selects
    /// default_buffer() per intensity.
    std::optional<double> buffer;
    int trials = 30;
    std::uint64_t seed = 0;
};

/// Throws InvalidConfig.
void validate(const PoissonRunConfig& config);

/// Three times the typical k-th nearest-neighbor radius, (k / (omega_d nu))^(1/d).
double default_buffer(int dim, int k, double nu);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int dim);

inline constexpr double kMaxExpectedPoints = 1e7;

/// N ~ Poisson(nu |box|) uniform points in the box. Throws TooIntense.
PointCloud sample_poisson(double nu, const Box& box, std::uint64_t seed);

/// Per-index critical point counts with center in the window, plus counts
/// per (boundary size, interior count) configuration.
struct IndexCounts
{
    std::vector<long long> by_index;  // size dim + 1
    std::map<std::pair<int, int>, long long> by_config;
};

IndexCounts count_by_index(const PointCloud& cloud, int k, const Box& window);

/// Seed of trial t at intensity nu.
std::uint64_t trial_seed(std::uint64_t base, double nu, int trial);

struct IndexMean
{
    double nu = 0.0;
    int index = 0;
    double mean = 0.0;
    double stderr_ = 0.0;  // sample std / sqrt(trials)
};

struct ConfigMean
{
    double nu = 0.0;
    int boundary = 0;
    int interior = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct Regression
{
    int index = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;      // propagated from the per-intensity standard errors
    double intercept_stderr = 0.0;  // same
    double r_squared = 0.0;
};

struct PoissonEstimate
{
    PoissonRunConfig config;
    std::vector<double> buffers;  // per intensity
    /// Per intensity: samples discarded for a general-position violation and
    /// redrawn.
    std::vector<long long> redrawn;
    std::vector<IndexMean> means;
    std::vector<ConfigMean> config_means;
    /// Absent with a single intensity.
    std::vector<Regression> regressions;
};

inline constexpr int kMaxRedraws = 100;

PoissonEstimate run_trials(const PoissonRunConfig& config);

/// Ordinary least squares of y on x with standard errors propagated from
/// per-point standard errors.
Regression fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& y_stderr);

}  // namespace knn_morse

#endif
