// knn-morse: critical points and homology changes of the k-NN distance.
//
// Exit codes: 0 ok, 1 I/O / parse / config error, 2 general-position
// violation, 3 Morse warning, 4 unstable grid, 5 verification failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "knn_morse/critical.hpp"
#include "knn_morse/cubical.hpp"
#include "knn_morse/homology.hpp"
#include "knn_morse/knn.hpp"
#include "knn_morse/poisson.hpp"
#include "knn_morse/report.hpp"

using namespace knn_morse;

namespace
{

// For k = 1 the data points themselves are index-0 critical points (r = 0).
// They are counted, which differs from sums that start at boundary size 2.
void flag_singletons(json& payload, int k)
{
    if (k == 1)
        payload["singleton_minima_counted"] = true;
}

enum Exit
{
    kOk = 0,
    kIoError = 1,
    kGeneralPosition = 2,
    kMorseWarning = 3,
    kUnstableGrid = 4,
    kVerifyFailed = 5,
};

struct Common
{
    std::string output = "-";
    std::string format = "json";
    Tolerances tol{};
    bool record_timing = false;
};

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size())
            throw InvalidConfig("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

// "x0,y0,x1,y1" in 2-d; in general the d lower corner coordinates then the d upper ones.
Box parse_window(const std::string& s, int dim)
{
    const auto v = parse_list(s);
    if (static_cast<int>(v.size()) != 2 * dim)
        throw InvalidConfig("window needs " + std::to_string(2 * dim) + " numbers");
    Box b{Point(dim), Point(dim)};
    for (int a = 0; a < dim; ++a)
    {
        b.lo[a] = v[static_cast<std::size_t>(a)];
        b.hi[a] = v[static_cast<std::size_t>(a + dim)];
        if (!(b.hi[a] > b.lo[a]))
            throw InvalidConfig("window must have hi > lo in every coordinate");
    }
    return b;
}

void emit(const Common& c, const std::string& text)
{
    if (c.output == "-")
    {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(c.output);
    if (!out)
        throw Error("cannot write " + c.output);
    out << text;
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

RunManifest manifest_for(const Common& c, const std::string& sub, std::vector<std::string> inputs, int k, int dim)
{
    RunManifest m;
    m.subcommand = sub;
    m.inputs = std::move(inputs);
    m.k = k;
    m.dim = dim;
    m.tolerances = c.tol;
    m.output = c.output;
    return m;
}

class Timer
{
public:
    explicit Timer(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
    void stamp(RunManifest& m) const
    {
        if (on_)
            m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point start_;
};

int cmd_crit(const Common& c, const std::string& input, int k, const std::string& window)
{
    Timer timer(c.record_timing);
    const PointCloud cloud = read_csv_file(input);
    check_k(cloud, k);
    EnumerationOptions opt;
    opt.tol = c.tol;
    if (!window.empty())
        opt.window = parse_window(window, cloud.dim());
    const auto crits = enumerate_critical_points(cloud, k, opt);
    const MorseValidation mv = validate_morse(crits, cloud, c.tol);

    RunManifest m = manifest_for(c, "crit", {input}, k, cloud.dim());
    timer.stamp(m);
    if (c.format == "csv")
        emit(c, [&] {
            std::ostringstream os;
            write_critical_csv(os, crits);
            return os.str();
        }());
    else
    {
        json payload = {{"points", crits},
                        {"validation",
                         {{"distinct_values", mv.distinct_values},
                          {"min_gap", std::isfinite(mv.min_gap) ? json(mv.min_gap) : json(nullptr)},
                          {"nondegenerate", mv.nondegenerate},
                          {"zero_level_minima", mv.zero_level_minima}}},
                        {"euler_sum", opt.window ? json(nullptr) : json(euler_sum(crits))}};
        flag_singletons(payload, k);
        emit(c, dump(make_report(m, "critical_points", std::move(payload))));
    }
    if (!mv.distinct_values || !mv.nondegenerate)
    {
        std::cerr << "warning: critical values are not distinct or a critical point is degenerate\n";
        return kMorseWarning;
    }
    return kOk;
}

int cmd_verify(const Common& c, const std::string& input, int k, int resolution, const std::string& epsilon)
{
    Timer timer(c.record_timing);
    const PointCloud cloud = read_csv_file(input);
    check_k(cloud, k);
    if (cloud.dim() != 2)
        throw InvalidConfig("verify requires planar input");
    EnumerationOptions eopt;
    eopt.tol = c.tol;
    const auto crits = enumerate_critical_points(cloud, k, eopt);
    HomologyReportOptions opt;
    opt.resolution = resolution;
    opt.tol = c.tol;
    if (epsilon != "auto")
        opt.epsilon = std::stod(epsilon);
    const auto records = homology_change_report(cloud, k, crits, opt);

    bool all_pass = true, all_stable = true;
    for (const auto& r : records)
    {
        all_pass = all_pass && r.pass;
        all_stable = all_stable && r.stable;
    }
    RunManifest m = manifest_for(c, "verify", {input}, k, 2);
    timer.stamp(m);
    emit(c, dump(make_report(m, "filtration", {{"records", records}, {"all_pass", all_pass}})));
    if (!all_stable)
    {
        std::cerr << "error: grid results differ between resolutions\n";
        return kUnstableGrid;
    }
    return all_pass ? kOk : kVerifyFailed;
}

int cmd_aux(const Common& c, const std::string& input, int k, int rank)
{
    Timer timer(c.record_timing);
    const PointCloud cloud = read_csv_file(input);
    check_k(cloud, k);
    EnumerationOptions eopt;
    eopt.tol = c.tol;
    const auto crits = enumerate_critical_points(cloud, k, eopt);
    if (rank < 0 || static_cast<std::size_t>(rank) >= crits.size())
        throw IndexOutOfRange("critical rank " + std::to_string(rank) + " out of range (have " +
                              std::to_string(crits.size()) + ")");
    const CriticalPoint& cp = crits[static_cast<std::size_t>(rank)];
    const AuxiliaryComplex aux = auxiliary_complex_from_data(cp, cloud, k, c.tol);
    const int n_b = static_cast<int>(cp.boundary.size());
    const BettiVector betti = betti_gf2(aux.complex);
    // The (-1)-skeleton of an index-0 point is the empty complex.
    const bool equal = cp.index == 0 ? aux.complex.size() == 0
                                     : aux.complex == skeleton_complex(n_b, cp.index - 1);

    RunManifest m = manifest_for(c, "aux", {input}, k, cloud.dim());
    timer.stamp(m);
    json payload = {{"rank", rank},     {"critical_point", cp}, {"auxiliary", aux},
                    {"betti", betti},   {"equals_skeleton", equal}};
    emit(c, dump(make_report(m, "auxiliary_complex", std::move(payload))));
    return kOk;
}

int cmd_euler(const Common& c, const std::string& input, int k)
{
    Timer timer(c.record_timing);
    const PointCloud cloud = read_csv_file(input);
    check_k(cloud, k);
    EnumerationOptions eopt;
    eopt.tol = c.tol;
    const auto crits = enumerate_critical_points(cloud, k, eopt);
    const long long sum = euler_sum(crits);
    RunManifest m = manifest_for(c, "euler", {input}, k, cloud.dim());
    timer.stamp(m);
    json payload = {{"sum", sum}, {"ok", sum == 1}, {"critical_points", crits.size()}};
    flag_singletons(payload, k);
    emit(c, dump(make_report(m, "euler", std::move(payload))));
    return sum == 1 ? kOk : kVerifyFailed;
}

int cmd_poisson(const Common& c, int d, int k, const std::string& nus, int trials, const std::string& window,
                const std::string& buffer, std::uint64_t seed)
{
    Timer timer(c.record_timing);
    PoissonRunConfig cfg;
    cfg.dim = d;
    cfg.k = k;
    cfg.intensities = parse_list(nus);
    cfg.window = window.empty() ? Box::unit(d) : parse_window(window, d);
    if (buffer != "auto")
        cfg.buffer = std::stod(buffer);
    cfg.trials = trials;
    cfg.seed = seed;
    const PoissonEstimate est = run_trials(cfg);

    RunManifest m = manifest_for(c, "poisson", {}, k, d);
    m.seed = seed;
    timer.stamp(m);
    if (c.format == "csv")
    {
        std::ostringstream os;
        write_poisson_csv(os, est);
        emit(c, os.str());
    }
    else
    {
        std::ostringstream table;
        write_poisson_csv(table, est);
        json payload = est;
        payload["csv"] = table.str();
        flag_singletons(payload, k);
        emit(c, dump(make_report(m, "poisson", std::move(payload))));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Critical points of the k-nearest-neighbor distance function"};
    app.require_subcommand(1);
    Common common;
    app.add_option("-o,--output", common.output, "Output file ('-' for standard output)");
    app.add_option("--sphere-tol", common.tol.sphere, "Relative on-sphere band");
    app.add_option("--barycentric-tol", common.tol.barycentric, "Minimum barycentric weight");
    app.add_option("--gp-tol", common.tol.general_position, "Relative general-position band");
    app.add_flag("--record-timing", common.record_timing, "Embed wall-clock time in the manifest");

    std::string input;
    int k = 1;
    std::string window;

    auto* crit = app.add_subcommand("crit", "Enumerate critical points");
    crit->add_option("input", input, "Headerless CSV, one point per row")->required();
    crit->add_option("-k,--k", k, "Neighbor order")->required();
    crit->add_option("--window", window, "x0,y0,x1,y1 (lower corner, then upper corner)");
    crit->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));

    int resolution = 512;
    std::string epsilon = "auto";
    auto* verify = app.add_subcommand("verify", "Check homology changes on a grid");
    verify->add_option("input", input)->required();
    verify->add_option("-k,--k", k)->required();
    verify->add_option("--resolution", resolution, "Base grid resolution (also run at twice this)");
    verify->add_option("--epsilon", epsilon, "Level offset, or 'auto'");

    int rank = 0;
    auto* aux = app.add_subcommand("aux", "Auxiliary complex of one critical point");
    aux->add_option("input", input)->required();
    aux->add_option("-k,--k", k)->required();
    aux->add_option("--critical-rank", rank, "Position in radius order, from 0")->required();

    auto* euler = app.add_subcommand("euler", "Alternating budget sum");
    euler->add_option("input", input)->required();
    euler->add_option("-k,--k", k)->required();

    int d = 2;
    std::string nus;
    int trials = 30;
    std::string buffer = "auto";
    std::uint64_t seed = 0;
    auto* poisson = app.add_subcommand("poisson", "Monte-Carlo critical point counts");
    poisson->add_option("--d", d)->required();
    poisson->add_option("-k,--k", k)->required();
    poisson->add_option("--nu", nus, "Comma-separated increasing intensities")->required();
    poisson->add_option("--trials", trials);
    poisson->add_option("--window", window, "Defaults to the unit cube");
    poisson->add_option("--buffer", buffer, "Sampling margin, or 'auto'");
    poisson->add_option("--seed", seed);
    poisson->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kIoError;
    }

    try
    {
        if (*crit)
            return cmd_crit(common, input, k, window);
        if (*verify)
            return cmd_verify(common, input, k, resolution, epsilon);
        if (*aux)
            return cmd_aux(common, input, k, rank);
        if (*euler)
            return cmd_euler(common, input, k);
        if (*poisson)
            return cmd_poisson(common, d, k, nus, trials, window, buffer, seed);
    }
    catch (const GeneralPositionViolation& e)
    {
        std::cerr << "general position violation: " << e.what() << "\n";
        return kGeneralPosition;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kIoError;
}
