#ifndef FORMCOUNT_IO_HPP
#define FORMCOUNT_IO_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "formcount/census.hpp"
#include "formcount/count.hpp"
#include "formcount/slice.hpp"

namespace formcount {

inline constexpr const char* kProgramName = "formcount";
inline constexpr const char* kProgramVersion = "1.0.0";

// Everything needed to reproduce a run; embedded verbatim in every output
// artifact. Identical configs must produce byte-identical bodies.
struct RunConfig {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::uint64_t seed = 0;
    int workers = 0;  // 0: library default

    void add(const std::string& key, const std::string& value);
    std::vector<std::string> metadata_lines() const;  // "# key=value" block
};

std::string fmt_double(double v);
std::string csv_field(const std::string& raw);  // quotes fields containing , " or newline

// Parsers shared by the CLI and tests.
std::vector<std::int64_t> parse_i64_list(const std::string& s);   // "8,4,2,1"
std::vector<std::int64_t> parse_x_grid(const std::string& s);     // "a:b:step", inclusive

void write_audit_csv(std::ostream& os, const RunConfig& config,
                     const std::vector<CountReport>& rows);
void write_census_csv(std::ostream& os, const RunConfig& config,
                      const std::vector<CensusReport>& rows);

// Rendered with exact integer fields as JSON strings. The surface measure is
// exact when rational; otherwise the dyadic expansion of its double value is
// emitted and flagged.
nlohmann::json geometry_report_json(const GeometryReport& report);
nlohmann::json fit_report_json(const FitReport& fit, const RunConfig& config);

// gnuplot commands for a census CSV written by write_census_csv.
std::string census_plot_script(const std::string& csv_path);

}  // namespace formcount

#endif
