#include "knn_morse/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace knn_morse
{

namespace
{

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

json point_json(const Point& p)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i)
        a.push_back(p[i]);
    return a;
}

Point point_from(const json& j)
{
    if (!j.is_array() || j.size() > static_cast<std::size_t>(kMaxDim))
        throw Error("malformed point");
    Point p(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return p;
}

}  // namespace

PointCloud read_csv(std::istream& in)
{
    std::vector<Point> points;
    int dim = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty())
            continue;
        std::vector<double> values;
        std::size_t start = 0;
        while (true)
        {
            const std::size_t comma = row.find(',', start);
            const std::string_view field =
                trim(row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
                throw Error("line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "'");
            values.push_back(v);
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        const int cols = static_cast<int>(values.size());
        if (dim < 0)
        {
            if (cols > kMaxDim)
                throw Error("line " + std::to_string(line_no) + ": dimension " + std::to_string(cols) + " exceeds " +
                            std::to_string(kMaxDim));
            dim = cols;
        }
        else if (cols != dim)
            throw Error("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) + " columns, got " +
                        std::to_string(cols));
        points.push_back(Eigen::Map<const Eigen::VectorXd>(values.data(), cols));
    }
    if (points.empty())
        throw Error("no points in input");
    return PointCloud(dim, points);
}

PointCloud read_csv_file(const std::string& path)
{
    if (path == "-")
        return read_csv(std::cin);
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    return read_csv(in);
}

void to_json(json& j, const Tolerances& t)
{
    j = json{{"sphere", t.sphere}, {"barycentric", t.barycentric}, {"general_position", t.general_position}};
}

void from_json(const json& j, Tolerances& t)
{
    j.at("sphere").get_to(t.sphere);
    j.at("barycentric").get_to(t.barycentric);
    j.at("general_position").get_to(t.general_position);
}

void to_json(json& j, const Box& b)
{
    j = json{{"lo", point_json(b.lo)}, {"hi", point_json(b.hi)}};
}

void from_json(const json& j, Box& b)
{
    b.lo = point_from(j.at("lo"));
    b.hi = point_from(j.at("hi"));
}

void to_json(json& j, const RunManifest& m)
{
    j = json{{"subcommand", m.subcommand}, {"inputs", m.inputs},     {"k", m.k},
             {"dimension", m.dim},         {"tolerances", m.tolerances}, {"output", m.output},
             {"tool_version", m.tool_version}};
    j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
    if (m.wall_clock_seconds)
        j["wall_clock_seconds"] = *m.wall_clock_seconds;
}

void from_json(const json& j, RunManifest& m)
{
    j.at("subcommand").get_to(m.subcommand);
    j.at("inputs").get_to(m.inputs);
    j.at("k").get_to(m.k);
    j.at("dimension").get_to(m.dim);
    j.at("tolerances").get_to(m.tolerances);
    j.at("output").get_to(m.output);
    j.at("tool_version").get_to(m.tool_version);
    m.seed.reset();
    if (!j.at("seed").is_null())
        m.seed = j.at("seed").get<std::uint64_t>();
    m.wall_clock_seconds.reset();
    if (j.contains("wall_clock_seconds"))
        m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
}

void to_json(json& j, const CriticalPoint& cp)
{
    j = json{{"center", point_json(cp.center)}, {"radius", cp.radius},   {"boundary", cp.boundary},
             {"interior", cp.interior},         {"index", cp.index},     {"delta", cp.delta},
             {"weights", cp.weights}};
}

void from_json(const json& j, CriticalPoint& cp)
{
    cp.center = point_from(j.at("center"));
    j.at("radius").get_to(cp.radius);
    j.at("boundary").get_to(cp.boundary);
    j.at("interior").get_to(cp.interior);
    j.at("index").get_to(cp.index);
    j.at("delta").get_to(cp.delta);
    j.at("weights").get_to(cp.weights);
}

void to_json(json& j, const BettiVector& b)
{
    j = b.betti;
}

void from_json(const json& j, BettiVector& b)
{
    j.get_to(b.betti);
}

void to_json(json& j, const FiltrationRecord& r)
{
    j = json{{"center", point_json(r.center)},
             {"radius", r.radius},
             {"index", r.index},
             {"delta", r.delta},
             {"n_boundary", r.n_boundary},
             {"n_interior", r.n_interior},
             {"group_size", r.group_size},
             {"epsilon", r.epsilon},
             {"betti_before", r.betti_before},
             {"betti_after", r.betti_after},
             {"delta_plus", r.delta_plus},
             {"delta_minus", r.delta_minus},
             {"resolutions", r.resolutions},
             {"before_by_resolution", r.before_by_resolution},
             {"after_by_resolution", r.after_by_resolution},
             {"stable", r.stable},
             {"pass", r.pass}};
}

void from_json(const json& j, FiltrationRecord& r)
{
    r.center = point_from(j.at("center"));
    j.at("radius").get_to(r.radius);
    j.at("index").get_to(r.index);
    j.at("delta").get_to(r.delta);
    j.at("n_boundary").get_to(r.n_boundary);
    j.at("n_interior").get_to(r.n_interior);
    j.at("group_size").get_to(r.group_size);
    j.at("epsilon").get_to(r.epsilon);
    j.at("betti_before").get_to(r.betti_before);
    j.at("betti_after").get_to(r.betti_after);
    j.at("delta_plus").get_to(r.delta_plus);
    j.at("delta_minus").get_to(r.delta_minus);
    j.at("resolutions").get_to(r.resolutions);
    j.at("before_by_resolution").get_to(r.before_by_resolution);
    j.at("after_by_resolution").get_to(r.after_by_resolution);
    j.at("stable").get_to(r.stable);
    j.at("pass").get_to(r.pass);
}

void to_json(json& j, const SimplicialComplex& c)
{
    j = json{{"vertex_count", c.vertex_count()}, {"simplices", json::array()}};
    for (const auto& s : c.simplices())
        j["simplices"].push_back(s);
}

void from_json(const json& j, SimplicialComplex& c)
{
    c = SimplicialComplex(j.at("vertex_count").get<int>());
    for (const auto& s : j.at("simplices"))
        c.add_with_faces(s.get<Simplex>());
}

void to_json(json& j, const AuxiliaryComplex& a)
{
    j = json{{"boundary", a.boundary},
             {"active_subsets", a.active_subsets},
             {"active_boundary", a.active_boundary},
             {"complements", a.complements},
             {"complex", a.complex}};
}

void from_json(const json& j, AuxiliaryComplex& a)
{
    j.at("boundary").get_to(a.boundary);
    j.at("active_subsets").get_to(a.active_subsets);
    j.at("active_boundary").get_to(a.active_boundary);
    j.at("complements").get_to(a.complements);
    j.at("complex").get_to(a.complex);
}

void to_json(json& j, const PoissonRunConfig& c)
{
    j = json{{"dim", c.dim},         {"k", c.k},       {"intensities", c.intensities}, {"window", c.window},
             {"trials", c.trials},   {"seed", c.seed}};
    j["buffer"] = c.buffer ? json(*c.buffer) : json("auto");
}

void from_json(const json& j, PoissonRunConfig& c)
{
    j.at("dim").get_to(c.dim);
    j.at("k").get_to(c.k);
    j.at("intensities").get_to(c.intensities);
    j.at("window").get_to(c.window);
    j.at("trials").get_to(c.trials);
    j.at("seed").get_to(c.seed);
    c.buffer.reset();
    if (j.at("buffer").is_number())
        c.buffer = j.at("buffer").get<double>();
}

void to_json(json& j, const PoissonEstimate& e)
{
    j = json{{"config", e.config}, {"buffers", e.buffers}, {"redrawn", e.redrawn}};
    json means = json::array();
    for (const auto& m : e.means)
        means.push_back({{"nu", m.nu}, {"index", m.index}, {"mean", m.mean}, {"stderr", m.stderr_}});
    json configs = json::array();
    for (const auto& m : e.config_means)
        configs.push_back({{"nu", m.nu},
                           {"boundary", m.boundary},
                           {"interior", m.interior},
                           {"mean", m.mean},
                           {"stderr", m.stderr_}});
    json regs = json::array();
    for (const auto& r : e.regressions)
        regs.push_back({{"index", r.index},
                        {"slope", r.slope},
                        {"intercept", r.intercept},
                        {"slope_stderr", r.slope_stderr},
                        {"intercept_stderr", r.intercept_stderr},
                        {"r_squared", r.r_squared}});
    j["means"] = std::move(means);
    j["config_means"] = std::move(configs);
    j["regressions"] = std::move(regs);
}

void from_json(const json& j, PoissonEstimate& e)
{
    j.at("config").get_to(e.config);
    j.at("buffers").get_to(e.buffers);
    j.at("redrawn").get_to(e.redrawn);
    e.means.clear();
    for (const auto& m : j.at("means"))
        e.means.push_back({m.at("nu").get<double>(), m.at("index").get<int>(), m.at("mean").get<double>(),
                           m.at("stderr").get<double>()});
    e.config_means.clear();
    for (const auto& m : j.at("config_means"))
        e.config_means.push_back({m.at("nu").get<double>(), m.at("boundary").get<int>(),
                                  m.at("interior").get<int>(), m.at("mean").get<double>(),
                                  m.at("stderr").get<double>()});
    e.regressions.clear();
    for (const auto& r : j.at("regressions"))
        e.regressions.push_back({r.at("index").get<int>(), r.at("slope").get<double>(),
                                 r.at("intercept").get<double>(), r.at("slope_stderr").get<double>(),
                                 r.at("intercept_stderr").get<double>(), r.at("r_squared").get<double>()});
}

json make_report(const RunManifest& manifest, const char* key, json payload)
{
    json j;
    j["schema_version"] = kSchemaVersion;
    j["manifest"] = manifest;
    j[key] = std::move(payload);
    return j;
}

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace
{

std::string join_labels(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i)
            s += ' ';
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace

void write_critical_csv(std::ostream& out, const std::vector<CriticalPoint>& crits)
{
    const int d = crits.empty() ? 0 : static_cast<int>(crits.front().center.size());
    for (int a = 0; a < d; ++a)
        out << 'c' << a << ',';
    out << "radius,index,delta,boundary,interior,weights\n";
    for (const auto& cp : crits)
    {
        for (int a = 0; a < d; ++a)
            out << format_double(cp.center[a]) << ',';
        out << format_double(cp.radius) << ',' << cp.index << ',' << cp.delta << ',' << join_labels(cp.boundary)
            << ',' << join_labels(cp.interior) << ',';
        for (std::size_t i = 0; i < cp.weights.size(); ++i)
            out << (i ? " " : "") << format_double(cp.weights[i]);
        out << '\n';
    }
}

void write_poisson_csv(std::ostream& out, const PoissonEstimate& est)
{
    out << "nu,index,mean,stderr\n";
    for (const auto& m : est.means)
        out << format_double(m.nu) << ',' << m.index << ',' << format_double(m.mean) << ','
            << format_double(m.stderr_) << '\n';
    if (est.regressions.empty())
        return;
    out << "\nindex,slope,intercept,slope_stderr,intercept_stderr,r_squared\n";
    for (const auto& r : est.regressions)
        out << r.index << ',' << format_double(r.slope) << ',' << format_double(r.intercept) << ','
            << format_double(r.slope_stderr) << ',' << format_double(r.intercept_stderr) << ','
            << format_double(r.r_squared) << '\n';
}

}  // namespace knn_morse
