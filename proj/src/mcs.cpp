// SPDX-License-Identifier: Apache-2.0
#include "pfs/mcs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pfs {

McsTable::McsTable(std::vector<McsEntry> entries, int symbols, int subcarriers)
    : entries_(std::move(entries)), symbols_(symbols), subcarriers_(subcarriers) {
    if (entries_.size() < 2) {
        throw McsFormatError("MCS table needs at least 2 entries, got " +
                             std::to_string(entries_.size()));
    }
    if (symbols_ < 1 || subcarriers_ < 1) {
        throw McsFormatError("MCS table dimensions must be positive");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!(entries_[i].threshold > 0.0) || !std::isfinite(entries_[i].threshold)) {
            throw McsFormatError("row " + std::to_string(i + 1) +
                                 ": linear threshold must be positive and finite");
        }
        if (!(entries_[i].efficiency > 0.0) || !std::isfinite(entries_[i].efficiency)) {
            throw McsFormatError("row " + std::to_string(i + 1) +
                                 ": efficiency must be positive and finite");
        }
        if (i > 0) {
            if (!(entries_[i].threshold > entries_[i - 1].threshold)) {
                throw McsFormatError("row " + std::to_string(i + 1) +
                                     ": thresholds must be strictly increasing");
            }
            if (!(entries_[i].efficiency > entries_[i - 1].efficiency)) {
                throw McsFormatError("row " + std::to_string(i + 1) +
                                     ": efficiencies must be strictly increasing");
            }
        }
    }
}

double McsTable::efficiency(double z) const {
    if (std::isnan(z) || z < 0.0) {
        throw std::domain_error("McsTable::efficiency: SINR must be >= 0");
    }
    // First entry with threshold > z; the scheme in use is the one before it.
    auto it = std::upper_bound(entries_.begin(), entries_.end(), z,
                               [](double v, const McsEntry& e) { return v < e.threshold; });
    if (it == entries_.begin()) return 0.0;
    return std::prev(it)->efficiency;
}

void McsTable::set_dimensions(int symbols, int subcarriers) {
    if (symbols < 1 || subcarriers < 1) {
        throw McsFormatError("MCS table dimensions must be positive");
    }
    symbols_ = symbols;
    subcarriers_ = subcarriers;
}

McsTable load_mcs_table(std::istream& source, int symbols, int subcarriers) {
    std::vector<McsEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double threshold_db, efficiency;
        if (!(row >> threshold_db)) continue;  // blank / comment-only line
        if (!(row >> efficiency)) {
            throw McsFormatError("line " + std::to_string(line_no) +
                                 ": expected 'threshold_db efficiency'");
        }
        std::string extra;
        if (row >> extra) {
            throw McsFormatError("line " + std::to_string(line_no) + ": trailing token '" +
                                 extra + "'");
        }
        entries.push_back({std::pow(10.0, threshold_db / 10.0), efficiency});
    }
    return McsTable(std::move(entries), symbols, subcarriers);
}

McsTable load_mcs_table_file(const std::string& path, int symbols, int subcarriers) {
    std::ifstream in(path);
    if (!in) {
        throw McsFormatError("cannot open MCS table file: " + path);
    }
    return load_mcs_table(in, symbols, subcarriers);
}

McsTable default_cqi_table(int symbols, int subcarriers) {
    static const double efficiencies[15] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                            1.1758, 1.4766, 1.9141, 2.4063, 2.7305,
                                            3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
    std::vector<McsEntry> entries;
    entries.reserve(15);
    for (int m = 0; m < 15; ++m) {
        const double threshold_db = -6.0 + 2.0 * m;
        entries.push_back({std::pow(10.0, threshold_db / 10.0), efficiencies[m]});
    }
    return McsTable(std::move(entries), symbols, subcarriers);
}

}  // namespace pfs
