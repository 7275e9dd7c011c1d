#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlcnoma/mc.hpp"

namespace vlcnoma {

/// One row of the curve CSV schema.
struct CsvRow {
    double snr_db = 0.0;
    int user = 0; // 0 = average over users
    double ber = 0.0;
    double stderr_ = 0.0;
    std::string provenance;
};

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Serialize rows sorted by (snr_db, user) with full round-trip precision.
inline std::string curve_csv_body(std::vector<CsvRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
        if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
        return a.user < b.user;
    });
    std::string out = "snr_db,user,ber,stderr,provenance\n";
    for (const auto& r : rows) {
        out += format_g17(r.snr_db);
        out += ',';
        out += std::to_string(r.user);
        out += ',';
        out += format_g17(r.ber);
        out += ',';
        out += format_g17(r.stderr_);
        out += ',';
        out += r.provenance;
        out += '\n';
    }
    return out;
}

inline std::vector<CsvRow> rows_from_curve(const BerCurve& c, bool with_average = false) {
    std::vector<CsvRow> rows;
    for (int p = 0; p < c.points(); ++p) {
        double sum = 0.0;
        for (int u = 0; u < c.users(); ++u) {
            rows.push_back({c.snr_db[p], u + 1, c.ber[p][u], c.stderr_[p][u], c.provenance});
            sum += c.ber[p][u];
        }
        if (with_average)
            rows.push_back({c.snr_db[p], 0, sum / c.users(), 0.0, c.provenance});
    }
    return rows;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << body;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::vector<CsvRow> parse_curve_csv(const std::string& body) {
    std::vector<CsvRow> rows;
    std::istringstream in(body);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    if (line.rfind("snr_db,user,ber,stderr", 0) != 0)
        throw std::runtime_error("unexpected CSV header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CsvRow r;
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');
        r.snr_db = std::stod(field);
        std::getline(ls, field, ',');
        r.user = std::stoi(field);
        std::getline(ls, field, ',');
        r.ber = std::stod(field);
        std::getline(ls, field, ',');
        r.stderr_ = std::stod(field);
        std::getline(ls, r.provenance);
        rows.push_back(r);
    }
    return rows;
}

} // namespace vlcnoma
