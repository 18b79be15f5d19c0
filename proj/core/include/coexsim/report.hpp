#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace coexsim {

/// Persisted experiment output. Round-trips losslessly through JSON; a run
/// repeated from the embedded config and seed reproduces the payload.
struct RunReport {
    std::string experiment;
    std::string tool_version;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    std::string config_echo;            ///< resolved key=value scenario text
    std::vector<std::string> outputs;   ///< files written alongside the report
    nlohmann::json payload;             ///< experiment-specific numbers

    nlohmann::json to_json() const;
    static RunReport from_json(const nlohmann::json& j);
};

/// Writes <out_dir>/report.json and returns its path.
std::string write_report(const RunReport& report, const std::string& out_dir);

std::uint64_t fnv1a64(const std::string& text);

/// CSV file with a deterministic numeric format and a header comment carrying
/// tool version, config hash, and seed, so identical runs are byte-identical.
class CsvWriter {
public:
    CsvWriter(std::string config_echo, std::uint64_t seed);

    void set_columns(const std::vector<std::string>& names);
    void add_row(const std::vector<double>& values);
    void add_row_text(const std::vector<std::string>& cells);
    /// Returns the full file path written.
    std::string write(const std::string& out_dir, const std::string& filename) const;
    std::string content() const;

private:
    std::string header_comment_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Fixed-format numeric cell used everywhere CSVs are emitted.
std::string format_number(double v);

}  // namespace coexsim
