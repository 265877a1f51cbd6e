// SPDX-License-Identifier: Apache-2.0
#include "pfs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace pfs {

namespace {

// Deterministic draws on top of mt19937_64: hand-rolled transforms so the
// stream does not depend on the standard library's distribution choices.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double exponential() { return -std::log1p(-uniform()); }

    std::complex<double> complex_normal() {
        // Box-Muller; unit total variance (E|h|^2 = 1).
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        const double theta = 2.0 * std::numbers::pi_v<double> * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

  private:
    std::mt19937_64 eng_;
};

// Sliding-window mean over the last W values; before W values exist the
// mean runs over the available history.
class SlidingMean {
  public:
    void reset(int window) {
        buf_.assign(static_cast<std::size_t>(window), 0.0);
        count_ = 0;
        head_ = 0;
        sum_ = 0.0;
    }

    bool empty() const { return count_ == 0; }

    double mean() const { return sum_ / static_cast<double>(count_); }

    void push(double v) {
        if (count_ < buf_.size()) {
            buf_[head_] = v;
            sum_ += v;
            ++count_;
        } else {
            sum_ += v - buf_[head_];
            buf_[head_] = v;
        }
        head_ = (head_ + 1) % buf_.size();
    }

  private:
    std::vector<double> buf_;
    std::size_t count_ = 0;
    std::size_t head_ = 0;
    double sum_ = 0.0;
};

}  // namespace

void SinrHistogram::add(double z_linear) {
    const double db = 10.0 * std::log10(std::max(z_linear, 1e-300));
    if (db < lo_db) {
        ++underflow;
        return;
    }
    if (db >= hi_db) {
        ++overflow;
        return;
    }
    const auto idx = static_cast<std::size_t>((db - lo_db) / (hi_db - lo_db) *
                                              static_cast<double>(bins.size()));
    ++bins[std::min(idx, bins.size() - 1)];
}

SimResult run_pfs(const std::vector<std::vector<LinkProfile>>& links, const McsTable& table,
                  const FrameConfig& frame, const SimConfig& cfg) {
    const std::size_t j_count = links.size();
    if (j_count == 0 || links.front().empty()) {
        throw std::invalid_argument("run_pfs: empty link matrix");
    }
    const std::size_t n_count = links.front().size();
    for (const auto& row : links) {
        if (row.size() != n_count) {
            throw std::invalid_argument("run_pfs: all terminals must share the RB count");
        }
        for (const auto& link : row) {
            if (!(link.signal_power > 0.0) || link.noise_power < 0.0) {
                throw std::invalid_argument("run_pfs: invalid link powers");
            }
        }
    }
    if (cfg.window < 1 || cfg.slots <= cfg.window) {
        throw std::invalid_argument("run_pfs: require slots > window >= 1");
    }
    const long long warmup = cfg.warmup < 0 ? cfg.window : cfg.warmup;
    if (warmup >= cfg.slots) {
        throw std::invalid_argument("run_pfs: warmup must be below the slot count");
    }
    if (cfg.fading == SimConfig::Fading::gauss_markov &&
        !(cfg.doppler_norm >= 0.0 && cfg.doppler_norm < 1.0)) {
        throw std::invalid_argument("run_pfs: doppler_norm must be in [0, 1)");
    }
    if (!(frame.tti_s > 0.0)) {
        throw std::invalid_argument("run_pfs: tti_s must be positive");
    }
    if (cfg.shared_fading_across_rbs) {
        for (const auto& row : links) {
            for (const auto& link : row) {
                if (link.interferer_powers.size() != row.front().interferer_powers.size()) {
                    throw std::invalid_argument(
                        "run_pfs: shared fading requires one interferer count per terminal");
                }
            }
        }
    }

    double min_efficiency = table.entries().front().efficiency;
    const double rate_metric_floor = min_efficiency * 1e-6;

    Rng rng(cfg.seed);
    const double rho = 1.0 - cfg.doppler_norm;
    const double innovation = std::sqrt(std::max(1.0 - rho * rho, 0.0));

    // Gauss-Markov state per (j, rb, source); source 0 is the serving link.
    std::vector<std::vector<std::vector<std::complex<double>>>> gm_state;
    const bool gm = cfg.fading == SimConfig::Fading::gauss_markov;
    const std::size_t fading_cols = cfg.shared_fading_across_rbs ? 1 : n_count;
    if (gm) {
        gm_state.resize(j_count);
        for (std::size_t j = 0; j < j_count; ++j) {
            gm_state[j].resize(fading_cols);
            for (std::size_t n = 0; n < fading_cols; ++n) {
                const std::size_t sources = links[j][n].interferer_powers.size() + 1;
                gm_state[j][n].resize(sources);
                for (auto& h : gm_state[j][n]) h = rng.complex_normal();
            }
        }
    }

    std::vector<std::vector<SlidingMean>> window(j_count, std::vector<SlidingMean>(n_count));
    for (auto& row : window) {
        for (auto& w : row) w.reset(cfg.window);
    }

    SimResult result;
    result.throughput_bps.assign(j_count, 0.0);
    result.scheduling_frequency.assign(j_count, std::vector<double>(n_count, 0.0));
    result.scheduled_sinr_sum.assign(j_count, 0.0);
    result.scheduled_count.assign(j_count, 0);
    result.unconditional_sinr_sum.assign(j_count, 0.0);
    result.unconditional_count.assign(j_count, 0);
    result.scheduled_hist.assign(j_count, SinrHistogram{});
    result.unconditional_hist.assign(j_count, SinrHistogram{});
    if (cfg.record_sinr_samples) {
        result.sinr_samples.assign(
            j_count, std::vector<std::vector<double>>(n_count, std::vector<double>()));
    }

    std::vector<std::vector<double>> iid_gain(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        std::size_t max_sources = 0;
        for (const auto& link : links[j]) {
            max_sources = std::max(max_sources, link.interferer_powers.size() + 1);
        }
        iid_gain[j].resize(max_sources);
    }

    std::vector<std::vector<double>> sinr(j_count, std::vector<double>(n_count, 0.0));
    std::vector<std::vector<double>> metric(j_count, std::vector<double>(n_count, 0.0));
    std::vector<std::vector<std::uint64_t>> sched_count(
        j_count, std::vector<std::uint64_t>(n_count, 0));
    std::vector<double> total_bits(j_count, 0.0);
    std::vector<std::size_t> winner(n_count, 0);
    std::vector<double> min_sched_sinr(j_count, 0.0);
    std::vector<int> sched_blocks(j_count, 0);

    long long counted = 0;
    for (long long t = 0; t < cfg.slots; ++t) {
        const bool counting = t >= warmup;

        // Fading and SINR. Draw order is fixed: terminal-major, then RB,
        // serving link before interferers.
        for (std::size_t j = 0; j < j_count; ++j) {
            for (std::size_t n = 0; n < n_count; ++n) {
                const LinkProfile& link = links[j][n];
                const std::size_t col = cfg.shared_fading_across_rbs ? 0 : n;
                const bool fresh_draw = !cfg.shared_fading_across_rbs || n == 0;
                double own_gain;
                double interference = 0.0;
                if (gm) {
                    auto& state = gm_state[j][col];
                    if (fresh_draw && t > 0) {
                        for (auto& h : state) {
                            h = rho * h + innovation * rng.complex_normal();
                        }
                    }
                    own_gain = std::norm(state[0]);
                    for (std::size_t i = 0; i < link.interferer_powers.size(); ++i) {
                        interference += link.interferer_powers[i] * std::norm(state[i + 1]);
                    }
                } else {
                    auto& gains = iid_gain[j];
                    if (fresh_draw) {
                        const std::size_t sources = link.interferer_powers.size() + 1;
                        for (std::size_t i = 0; i < sources; ++i) gains[i] = rng.exponential();
                    }
                    own_gain = gains[0];
                    for (std::size_t i = 0; i < link.interferer_powers.size(); ++i) {
                        interference += link.interferer_powers[i] * gains[i + 1];
                    }
                }
                const double z =
                    link.signal_power * own_gain / (interference + link.noise_power);
                if (std::isnan(z)) {
                    throw std::runtime_error("run_pfs: NaN SINR in fading recursion");
                }
                sinr[j][n] = z;
                metric[j][n] =
                    cfg.metric == SimConfig::Metric::sinr_based ? z : table.efficiency(z);
            }
        }

        // PFS decision per resource block: best windowed-normalized metric,
        // ties to the lowest terminal index. The first slot normalizes by
        // the current value (empty history).
        for (std::size_t n = 0; n < n_count; ++n) {
            std::size_t best = 0;
            double best_priority = -1.0;
            for (std::size_t j = 0; j < j_count; ++j) {
                double zbar = window[j][n].empty() ? metric[j][n] : window[j][n].mean();
                if (cfg.metric == SimConfig::Metric::rate_based && zbar <= 0.0) {
                    zbar = rate_metric_floor;
                }
                if (zbar <= 0.0) zbar = std::numeric_limits<double>::min();
                const double priority = metric[j][n] / zbar;
                if (priority > best_priority) {
                    best_priority = priority;
                    best = j;
                }
            }
            winner[n] = best;
        }

        // Payload per terminal under the chosen MCS rule.
        std::fill(sched_blocks.begin(), sched_blocks.end(), 0);
        for (std::size_t n = 0; n < n_count; ++n) {
            const std::size_t j = winner[n];
            if (sched_blocks[j] == 0 || sinr[j][n] < min_sched_sinr[j]) {
                min_sched_sinr[j] = sched_blocks[j] == 0
                                        ? sinr[j][n]
                                        : std::min(min_sched_sinr[j], sinr[j][n]);
            }
            ++sched_blocks[j];
            if (counting && cfg.mcs_rule == SimConfig::McsRule::relaxed) {
                total_bits[j] += table.payload_bits(sinr[j][n]);
            }
        }
        if (counting && cfg.mcs_rule == SimConfig::McsRule::unique) {
            for (std::size_t j = 0; j < j_count; ++j) {
                if (sched_blocks[j] > 0) {
                    total_bits[j] += sched_blocks[j] * table.payload_bits(min_sched_sinr[j]);
                }
            }
        }

        if (counting) {
            ++counted;
            for (std::size_t n = 0; n < n_count; ++n) ++sched_count[winner[n]][n];
            for (std::size_t j = 0; j < j_count; ++j) {
                for (std::size_t n = 0; n < n_count; ++n) {
                    const double z = sinr[j][n];
                    result.unconditional_sinr_sum[j] += z;
                    ++result.unconditional_count[j];
                    result.unconditional_hist[j].add(z);
                    if (winner[n] == j) {
                        result.scheduled_sinr_sum[j] += z;
                        ++result.scheduled_count[j];
                        result.scheduled_hist[j].add(z);
                    }
                    if (cfg.record_sinr_samples) {
                        result.sinr_samples[j][n].push_back(z);
                    }
                }
            }
        }

        // Window update strictly after the decision: the average covers
        // slots t-W .. t-1 at the next step.
        for (std::size_t j = 0; j < j_count; ++j) {
            for (std::size_t n = 0; n < n_count; ++n) {
                window[j][n].push(metric[j][n]);
            }
        }
    }

    result.counted_slots = counted;
    for (std::size_t j = 0; j < j_count; ++j) {
        result.throughput_bps[j] =
            total_bits[j] / (static_cast<double>(counted) * frame.tti_s);
        for (std::size_t n = 0; n < n_count; ++n) {
            result.scheduling_frequency[j][n] =
                static_cast<double>(sched_count[j][n]) / static_cast<double>(counted);
        }
    }
    result.sinr_gain = empirical_sinr_gain(result);
    return result;
}

std::vector<std::optional<double>> empirical_sinr_gain(const SimResult& result) {
    std::vector<std::optional<double>> gains(result.scheduled_sinr_sum.size());
    for (std::size_t j = 0; j < gains.size(); ++j) {
        if (result.scheduled_count[j] == 0 || result.unconditional_count[j] == 0) {
            continue;  // undefined-gain marker
        }
        const double sched =
            result.scheduled_sinr_sum[j] / static_cast<double>(result.scheduled_count[j]);
        const double uncond = result.unconditional_sinr_sum[j] /
                              static_cast<double>(result.unconditional_count[j]);
        gains[j] = sched / uncond;
    }
    return gains;
}

std::optional<double> relative_error(double model_rate_bps, double sim_rate_bps) {
    if (!(sim_rate_bps > 0.0)) return std::nullopt;
    return std::abs(model_rate_bps - sim_rate_bps) / sim_rate_bps * 100.0;
}

void write_sim_csv(const SimResult& result, std::ostream& out) {
    const std::size_t n_count =
        result.scheduling_frequency.empty() ? 0 : result.scheduling_frequency.front().size();
    out << "terminal,throughput_bps,sinr_gain";
    for (std::size_t n = 0; n < n_count; ++n) out << ",sched_freq_rb" << n;
    out << "\n";
    char buf[64];
    for (std::size_t j = 0; j < result.throughput_bps.size(); ++j) {
        out << j;
        std::snprintf(buf, sizeof buf, "%.17g", result.throughput_bps[j]);
        out << ',' << buf;
        if (result.sinr_gain[j].has_value()) {
            std::snprintf(buf, sizeof buf, "%.17g", *result.sinr_gain[j]);
            out << ',' << buf;
        } else {
            out << ",NA";
        }
        for (std::size_t n = 0; n < n_count; ++n) {
            std::snprintf(buf, sizeof buf, "%.17g", result.scheduling_frequency[j][n]);
            out << ',' << buf;
        }
        out << "\n";
    }
}

}  // namespace pfs
