// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfs {

/// Raised by load_mcs_table on malformed input; names the offending row.
class McsFormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct McsEntry {
    double threshold;   ///< linear SINR at which the scheme becomes decodable
    double efficiency;  ///< spectral efficiency [bit/symbol]
};

/// Discrete SINR-to-spectral-efficiency map C(z): a left-closed step
/// function over intervals [z_m, z_{m+1}), zero below the first threshold.
/// Also carries the resource-block dimensions N_S x N_C that scale a
/// spectral efficiency into payload bits per resource block.
class McsTable {
  public:
    /// Thresholds in linear SINR, strictly increasing, as are efficiencies.
    McsTable(std::vector<McsEntry> entries, int symbols = 14, int subcarriers = 12);

    /// c_m for the interval containing z; 0 below the first threshold.
    double efficiency(double z) const;

    /// N_S * N_C * efficiency(z) [bit per resource block].
    double payload_bits(double z) const { return payload_scale() * efficiency(z); }

    double payload_scale() const { return static_cast<double>(symbols_) * subcarriers_; }
    int symbols() const { return symbols_; }
    int subcarriers() const { return subcarriers_; }
    void set_dimensions(int symbols, int subcarriers);

    const std::vector<McsEntry>& entries() const { return entries_; }
    std::size_t levels() const { return entries_.size(); }
    double max_efficiency() const { return entries_.back().efficiency; }

  private:
    std::vector<McsEntry> entries_;
    int symbols_;
    int subcarriers_;
};

/// Parses rows of "threshold_db efficiency" ('#' comments, blank lines ok),
/// converts thresholds to linear scale and validates monotonicity.
McsTable load_mcs_table(std::istream& source, int symbols = 14, int subcarriers = 12);
McsTable load_mcs_table_file(const std::string& path, int symbols = 14, int subcarriers = 12);

/// 15-level CQI-style default: efficiencies 0.1523 .. 5.5547 with uniform
/// 2 dB threshold spacing starting at -6 dB. The thresholds are a fixture,
/// not calibrated link-level values.
McsTable default_cqi_table(int symbols = 14, int subcarriers = 12);

}  // namespace pfs
