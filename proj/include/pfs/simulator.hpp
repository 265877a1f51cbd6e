// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pfs/frame.hpp"
#include "pfs/mcs.hpp"
#include "pfs/sinr.hpp"

namespace pfs {

/// Slot-level PFS simulation parameters. A given config (seed included)
/// reproduces bit-identical results.
struct SimConfig {
    long long slots = 10000;
    int window = 1000;       ///< W, sliding-window length of the PFS average
    std::uint64_t seed = 1;

    enum class Fading { iid, gauss_markov };
    Fading fading = Fading::iid;
    /// gauss_markov only: normalized Doppler in [0, 1). 0 freezes the
    /// channel for the whole run, values near 1 approach i.i.d. fading.
    /// The AR(1) coefficient is rho = 1 - doppler_norm.
    double doppler_norm = 0.5;

    enum class Metric { sinr_based, rate_based };
    Metric metric = Metric::sinr_based;

    enum class McsRule { relaxed, unique };
    McsRule mcs_rule = McsRule::relaxed;

    long long warmup = -1;  ///< slots excluded from averages; defaults to window

    /// Stress toggle: one fading draw shared by all resource blocks of a
    /// link, breaking the per-RB independence the analysis assumes.
    bool shared_fading_across_rbs = false;

    /// Record post-warmup unconditional SINR samples per (terminal, RB),
    /// e.g. for goodness-of-fit testing.
    bool record_sinr_samples = false;
};

/// Fixed-bin histogram over a dB range, linear-SINR input.
struct SinrHistogram {
    double lo_db = -40.0;
    double hi_db = 40.0;
    std::vector<std::uint64_t> bins = std::vector<std::uint64_t>(160, 0);
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;

    void add(double z_linear);
};

struct SimResult {
    std::vector<double> throughput_bps;                    ///< per terminal
    std::vector<std::vector<double>> scheduling_frequency; ///< [j][rb]
    std::vector<std::optional<double>> sinr_gain;          ///< empty if never scheduled

    // Accumulators behind the gain (post-warmup).
    std::vector<double> scheduled_sinr_sum;
    std::vector<std::uint64_t> scheduled_count;
    std::vector<double> unconditional_sinr_sum;
    std::vector<std::uint64_t> unconditional_count;

    std::vector<SinrHistogram> scheduled_hist;
    std::vector<SinrHistogram> unconditional_hist;

    /// [j][rb][sample] when SimConfig::record_sinr_samples is set.
    std::vector<std::vector<std::vector<double>>> sinr_samples;

    long long counted_slots = 0;
};

/// Runs the windowed PFS loop over the given link matrix ([terminal][rb]).
SimResult run_pfs(const std::vector<std::vector<LinkProfile>>& links, const McsTable& table,
                  const FrameConfig& frame, const SimConfig& cfg);

/// Mean scheduled SINR over mean unconditional SINR, per terminal;
/// empty optional marks a terminal that was never scheduled.
std::vector<std::optional<double>> empirical_sinr_gain(const SimResult& result);

/// |model - sim| / sim * 100; empty when the simulated rate is zero.
std::optional<double> relative_error(double model_rate_bps, double sim_rate_bps);

/// Per-terminal CSV rows: id, throughput, gain, per-RB scheduling frequency.
void write_sim_csv(const SimResult& result, std::ostream& out);

}  // namespace pfs
