// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pfs {

/// One evaluated terminal: requested model rates (empty optional = the
/// model failed on this terminal), optional simulated rate, and relative
/// errors in percent (empty = undefined).
struct TerminalRow {
    std::string id;
    double x = 0.0;
    double y = 0.0;
    double mean_sinr_db = 0.0;
    std::vector<std::optional<double>> model_rate_bps;
    std::optional<double> sim_rate_bps;
    std::vector<std::optional<double>> model_error_pct;
};

struct ThroughputReport {
    std::vector<std::string> model_names;
    bool has_simulation = false;
    std::vector<TerminalRow> rows;
};

/// CSV with a header row, comma separators, '.' decimals, LF endings and
/// 17-significant-digit floats; failed cells carry "ERROR", undefined
/// errors carry "NA".
void write_report_csv(const ThroughputReport& report, std::ostream& out);
ThroughputReport read_report_csv(std::istream& in);

std::string format_report_pretty(const ThroughputReport& report);

}  // namespace pfs
