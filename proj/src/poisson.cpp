#include "knn_morse/poisson.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "knn_morse/critical.hpp"
#include "knn_morse/parallel.hpp"

namespace knn_morse
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void validate(const PoissonRunConfig& c)
{
    if (c.dim < 1 || c.dim > kMaxDim)
        throw InvalidConfig("dimension out of range");
    if (c.k < 1)
        throw InvalidConfig("k must be positive");
    if (c.window.dim() != c.dim || c.window.hi.size() != c.dim)
        throw InvalidConfig("window dimension does not match");
    if (!(c.window.volume() > 0.0))
        throw InvalidConfig("window must have positive volume");
    if (c.trials < 30)
        throw InvalidConfig("at least 30 trials per intensity are required");
    if (c.intensities.empty())
        throw InvalidConfig("no intensities given");
    for (std::size_t i = 0; i < c.intensities.size(); ++i)
    {
        if (!(c.intensities[i] > 0.0))
            throw InvalidConfig("intensities must be positive");
        if (i > 0 && !(c.intensities[i] > c.intensities[i - 1]))
            throw InvalidConfig("intensities must be strictly increasing");
    }
    if (c.buffer && !(*c.buffer >= 0.0))
        throw InvalidConfig("buffer must be nonnegative");
}

double unit_ball_volume(int dim)
{
    return std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0);
}

double default_buffer(int dim, int k, double nu)
{
    return 3.0 * std::pow(k / (unit_ball_volume(dim) * nu), 1.0 / dim);
}

PointCloud sample_poisson(double nu, const Box& box, std::uint64_t seed)
{
    const double mean = nu * box.volume();
    if (!(mean <= kMaxExpectedPoints))
        throw TooIntense("expected point count " + std::to_string(mean) + " exceeds the limit");
    std::mt19937_64 rng(seed);
    std::poisson_distribution<long long> count(mean);
    const long long n = mean > 0.0 ? count(rng) : 0;

    const int d = box.dim();
    Eigen::MatrixXd coords(d, n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (long long i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a)
            coords(a, i) = box.lo[a] + unit(rng) * (box.hi[a] - box.lo[a]);
    return PointCloud(std::move(coords));
}

IndexCounts count_by_index(const PointCloud& cloud, int k, const Box& window)
{
    IndexCounts c;
    c.by_index.assign(static_cast<std::size_t>(window.dim() + 1), 0);
    if (cloud.size() < static_cast<std::size_t>(k))
        return c;
    EnumerationOptions opt;
    opt.window = window;
    for (const auto& cp : enumerate_critical_points(cloud, k, opt))
    {
        ++c.by_index[static_cast<std::size_t>(cp.index)];
        ++c.by_config[{static_cast<int>(cp.boundary.size()), static_cast<int>(cp.interior.size())}];
    }
    return c;
}

std::uint64_t trial_seed(std::uint64_t base, double nu, int trial)
{
    const std::uint64_t h = splitmix64(splitmix64(std::bit_cast<std::uint64_t>(nu)) ^ static_cast<std::uint64_t>(trial));
    return base + h;
}

Regression fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& se)
{
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Regression r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss_res = 0;
    double var_slope = 0, var_icept = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double e = y[i] - (r.intercept + r.slope * x[i]);
        ss_res += e * e;
        const double a_slope = (x[i] - mx) / sxx;
        const double a_icept = 1.0 / n - mx * a_slope;
        var_slope += a_slope * a_slope * se[i] * se[i];
        var_icept += a_icept * a_icept * se[i] * se[i];
    }
    r.slope_stderr = std::sqrt(var_slope);
    r.intercept_stderr = std::sqrt(var_icept);
    r.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
    return r;
}

PoissonEstimate run_trials(const PoissonRunConfig& config)
{
    validate(config);
    PoissonEstimate est;
    est.config = config;

    const auto n_nu = config.intensities.size();
    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<IndexCounts> results(n_nu * trials);
    std::vector<Box> boxes;
    for (double nu : config.intensities)
    {
        const double b = config.buffer ? *config.buffer : default_buffer(config.dim, config.k, nu);
        est.buffers.push_back(b);
        boxes.push_back(config.window.dilated(b));
    }

    // A sample with a near-tie (a point within the on-sphere band of a
    // candidate's sphere) is a probability-zero event of the process that
    // finite precision turns into a rare one; such a trial is redrawn from a
    // derived seed and counted.
    std::vector<int> redraws(results.size(), 0);
    parallel_for(results.size(), [&](std::size_t job) {
        const std::size_t v = job / trials;
        const int t = static_cast<int>(job % trials);
        const double nu = config.intensities[v];
        const std::uint64_t seed = trial_seed(config.seed, nu, t);
        for (int attempt = 0;; ++attempt)
        {
            const std::uint64_t s = attempt == 0 ? seed : splitmix64(seed ^ static_cast<std::uint64_t>(attempt));
            try
            {
                results[job] = count_by_index(sample_poisson(nu, boxes[v], s), config.k, config.window);
                redraws[job] = attempt;
                return;
            }
            catch (const GeneralPositionViolation&)
            {
                if (attempt + 1 == kMaxRedraws)
                    throw;
            }
        }
    });

    const int d = config.dim;
    std::vector<std::vector<double>> mean_by_index(static_cast<std::size_t>(d + 1));
    std::vector<std::vector<double>> se_by_index(static_cast<std::size_t>(d + 1));
    for (std::size_t v = 0; v < n_nu; ++v)
    {
        const double nu = config.intensities[v];
        const auto first = results.begin() + static_cast<std::ptrdiff_t>(v * trials);
        const auto last = first + static_cast<std::ptrdiff_t>(trials);
        long long redrawn = 0;
        for (std::size_t t = 0; t < trials; ++t)
            redrawn += redraws[v * trials + t];
        est.redrawn.push_back(redrawn);

        auto summarize = [&](auto value_of) {
            double sum = 0.0;
            for (auto it = first; it != last; ++it)
                sum += static_cast<double>(value_of(*it));
            const double mean = sum / static_cast<double>(trials);
            double ss = 0.0;
            for (auto it = first; it != last; ++it)
            {
                const double e = static_cast<double>(value_of(*it)) - mean;
                ss += e * e;
            }
            const double sd = std::sqrt(ss / static_cast<double>(trials - 1));
            return std::pair{mean, sd / std::sqrt(static_cast<double>(trials))};
        };

        for (int i = 0; i <= d; ++i)
        {
            const auto [mean, se] = summarize([i](const IndexCounts& c) { return c.by_index[static_cast<std::size_t>(i)]; });
            est.means.push_back({nu, i, mean, se});
            mean_by_index[static_cast<std::size_t>(i)].push_back(mean);
            se_by_index[static_cast<std::size_t>(i)].push_back(se);
        }

        std::map<std::pair<int, int>, bool> keys;
        for (auto it = first; it != last; ++it)
            for (const auto& [key, count] : it->by_config)
                keys[key] = true;
        for (const auto& [key, unused] : keys)
        {
            const auto [mean, se] = summarize([key = key](const IndexCounts& c) {
                const auto f = c.by_config.find(key);
                return f == c.by_config.end() ? 0LL : f->second;
            });
            est.config_means.push_back({nu, key.first, key.second, mean, se});
        }
    }

    if (n_nu >= 2)
        for (int i = 0; i <= d; ++i)
        {
            Regression r = fit_line(config.intensities, mean_by_index[static_cast<std::size_t>(i)],
                                    se_by_index[static_cast<std::size_t>(i)]);
            r.index = i;
            est.regressions.push_back(r);
        }
    return est;
}

}  // namespace knn_morse
