// SPDX-License-Identifier: Apache-2.0
#include "pfs/report.hpp"

#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pfs {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_cell(const std::optional<double>& v, const char* missing) {
    return v.has_value() ? fmt(*v) : missing;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::optional<double> parse_cell(const std::string& s) {
    if (s == "ERROR" || s == "NA" || s.empty()) return std::nullopt;
    return std::stod(s);
}

}  // namespace

void write_report_csv(const ThroughputReport& report, std::ostream& out) {
    out << "id,x,y,mean_sinr_db";
    for (const auto& m : report.model_names) out << ",rate_" << m;
    if (report.has_simulation) {
        out << ",sim_rate";
        for (const auto& m : report.model_names) out << ",err_" << m;
    }
    out << "\n";
    for (const auto& row : report.rows) {
        out << row.id << ',' << fmt(row.x) << ',' << fmt(row.y) << ','
            << fmt(row.mean_sinr_db);
        for (const auto& r : row.model_rate_bps) out << ',' << fmt_cell(r, "ERROR");
        if (report.has_simulation) {
            out << ',' << fmt_cell(row.sim_rate_bps, "NA");
            for (const auto& e : row.model_error_pct) out << ',' << fmt_cell(e, "NA");
        }
        out << "\n";
    }
}

ThroughputReport read_report_csv(std::istream& in) {
    ThroughputReport report;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("report CSV: empty input");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "id") {
        throw std::runtime_error("report CSV: unexpected header");
    }
    std::size_t i = 4;
    for (; i < header.size() && header[i].rfind("rate_", 0) == 0; ++i) {
        report.model_names.push_back(header[i].substr(5));
    }
    if (i < header.size() && header[i] == "sim_rate") {
        report.has_simulation = true;
    }

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        const std::size_t expected =
            4 + report.model_names.size() +
            (report.has_simulation ? 1 + report.model_names.size() : 0);
        if (cells.size() != expected) {
            throw std::runtime_error("report CSV: wrong cell count in row");
        }
        TerminalRow row;
        row.id = cells[0];
        row.x = std::stod(cells[1]);
        row.y = std::stod(cells[2]);
        row.mean_sinr_db = std::stod(cells[3]);
        std::size_t c = 4;
        for (std::size_t m = 0; m < report.model_names.size(); ++m) {
            row.model_rate_bps.push_back(parse_cell(cells[c++]));
        }
        if (report.has_simulation) {
            row.sim_rate_bps = parse_cell(cells[c++]);
            for (std::size_t m = 0; m < report.model_names.size(); ++m) {
                row.model_error_pct.push_back(parse_cell(cells[c++]));
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string format_report_pretty(const ThroughputReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "id" << std::setw(10) << "x" << std::setw(10) << "y"
        << std::setw(14) << "mean_sinr_db";
    for (const auto& m : report.model_names) out << std::setw(16) << ("rate_" + m);
    if (report.has_simulation) {
        out << std::setw(16) << "sim_rate";
        for (const auto& m : report.model_names) out << std::setw(12) << ("err_" + m);
    }
    out << "\n";
    auto num = [&out](double v, int w) { out << std::setw(w) << std::setprecision(6) << v; };
    for (const auto& row : report.rows) {
        out << std::setw(8) << row.id;
        num(row.x, 10);
        num(row.y, 10);
        num(row.mean_sinr_db, 14);
        for (const auto& r : row.model_rate_bps) {
            if (r.has_value()) {
                num(*r, 16);
            } else {
                out << std::setw(16) << "ERROR";
            }
        }
        if (report.has_simulation) {
            if (row.sim_rate_bps.has_value()) {
                num(*row.sim_rate_bps, 16);
            } else {
                out << std::setw(16) << "NA";
            }
            for (const auto& e : row.model_error_pct) {
                if (e.has_value()) {
                    num(*e, 12);
                } else {
                    out << std::setw(12) << "NA";
                }
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace pfs
