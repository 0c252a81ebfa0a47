// File formats and report serialization.
//
// Input: headerless CSV, one point per row; dimension = column count.
// Reports are JSON objects carrying `schema_version` and the run manifest.

#ifndef KNN_MORSE_REPORT_HPP
#define KNN_MORSE_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "knn_morse/critical.hpp"
#include "knn_morse/cubical.hpp"
#include "knn_morse/homology.hpp"
#include "knn_morse/poisson.hpp"
#include "knn_morse/types.hpp"

namespace knn_morse
{

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using nlohmann::json;

/// Throws Error with the offending line number.
PointCloud read_csv(std::istream& in);
/// "-" reads standard input.
PointCloud read_csv_file(const std::string& path);

struct RunManifest
{
    std::string subcommand;
    std::vector<std::string> inputs;
    int k = 0;
    int dim = 0;
    std::optional<std::uint64_t> seed;
    Tolerances tolerances{};
    std::string output = "-";
    std::string tool_version = kToolVersion;
    /// Only recorded on request; a timed report is not reproducible.
    std::optional<double> wall_clock_seconds;

    bool operator==(const RunManifest&) const = default;
};

void to_json(json& j, const Tolerances& t);
void from_json(const json& j, Tolerances& t);
void to_json(json& j, const Box& b);
void from_json(const json& j, Box& b);
void to_json(json& j, const RunManifest& m);
void from_json(const json& j, RunManifest& m);
void to_json(json& j, const CriticalPoint& cp);
void from_json(const json& j, CriticalPoint& cp);
void to_json(json& j, const BettiVector& b);
void from_json(const json& j, BettiVector& b);
void to_json(json& j, const FiltrationRecord& r);
void from_json(const json& j, FiltrationRecord& r);
void to_json(json& j, const SimplicialComplex& c);
void from_json(const json& j, SimplicialComplex& c);
void to_json(json& j, const AuxiliaryComplex& a);
void from_json(const json& j, AuxiliaryComplex& a);
void to_json(json& j, const PoissonRunConfig& c);
void from_json(const json& j, PoissonRunConfig& c);
void to_json(json& j, const PoissonEstimate& e);
void from_json(const json& j, PoissonEstimate& e);

/// {schema_version, manifest, <key>: payload}
json make_report(const RunManifest& manifest, const char* key, json payload);

/// Round-trippable decimal rendering with 17 significant digits.
std::string format_double(double x);

void write_critical_csv(std::ostream& out, const std::vector<CriticalPoint>& crits);
/// nu,index,mean,stderr rows, then a blank line and the regression block.
void write_poisson_csv(std::ostream& out, const PoissonEstimate& est);

}  // namespace knn_morse

#endif
