#include "coexsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "coexsim/version.hpp"

namespace coexsim {

nlohmann::json RunReport::to_json() const {
    return nlohmann::json{{"experiment", experiment}, {"tool_version", tool_version},
                          {"seed", seed},            {"duration_s", duration_s},
                          {"config", config_echo},   {"outputs", outputs},
                          {"payload", payload}};
}

RunReport RunReport::from_json(const nlohmann::json& j) {
    RunReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.duration_s = j.at("duration_s").get<double>();
    r.config_echo = j.at("config").get<std::string>();
    r.outputs = j.at("outputs").get<std::vector<std::string>>();
    r.payload = j.at("payload");
    return r;
}

std::string write_report(const RunReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / "report.json").string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << report.to_json().dump(2) << "\n";
    return path;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string format_number(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

CsvWriter::CsvWriter(std::string config_echo, std::uint64_t seed) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "# coexsim %s config_hash=%016llx seed=%llu", kVersion,
                  static_cast<unsigned long long>(fnv1a64(config_echo)),
                  static_cast<unsigned long long>(seed));
    header_comment_ = buf;
}

void CsvWriter::set_columns(const std::vector<std::string>& names) { columns_ = names; }

void CsvWriter::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row_text(cells);
}

void CsvWriter::add_row_text(const std::vector<std::string>& cells) {
    if (!columns_.empty() && cells.size() != columns_.size())
        throw std::invalid_argument("CsvWriter: row width does not match columns");
    rows_.push_back(cells);
}

std::string CsvWriter::content() const {
    std::string out = header_comment_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out += columns_[i];
        out += (i + 1 < columns_.size()) ? ',' : '\n';
    }
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    return out;
}

std::string CsvWriter::write(const std::string& out_dir, const std::string& filename) const {
    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / filename).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content();
    return path;
}

}  // namespace coexsim
