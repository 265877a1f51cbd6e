// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "pfs/analytic.hpp"
#include "pfs/mcs.hpp"
#include "pfs/sinr.hpp"

namespace pfs {

/// Interference-as-noise SINR: the ratio of average received powers,
/// fading averaged out. Z_tilde = p0 / (Σ p_i + N0).
struct IanSinr {
    double tilde_z = 0.0;
};

/// One IanSinr per terminal per resource block.
std::vector<std::vector<IanSinr>> ian_sinr_matrix(
    const std::vector<std::vector<LinkProfile>>& links);

/// Gaussian-approximation moments of the per-block rate, in spectral
/// efficiency units: mu = ∫ C(Z_tilde z) e^{-z} dz and the matching sigma.
struct GaussianRateParams {
    double mu = 0.0;
    double sigma = 0.0;
};
GaussianRateParams gaussian_rate_params(IanSinr z, const McsTable& table);

/// No scheduler, no fading: each terminal gets 1/J of every block at the
/// efficiency of its average SINR.
std::vector<double> simple_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                      int terminal_count, const McsTable& table, double tti_s);

/// Exponential SINR with mean Z_tilde pushed through the PFS rate integral.
/// Closed form per MCS interval; every result is cross-checked against
/// per-interval quadrature of the integrand.
std::vector<double> ian_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                   const McsTable& table, double tti_s,
                                   const AnalyticConfig& cfg = {});

/// Gaussian rate surrogate: normal per-block rates, scheduling by the
/// normalized-rate comparison, evaluated by quadrature.
std::vector<double> gaussian_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                        const McsTable& table, double tti_s,
                                        const AnalyticConfig& cfg = {});

/// i.i.d. priority approximation: the terminal's own exact law for both
/// F and f, so each interval mass is (F^J(hi) - F^J(lo))/J exactly.
std::vector<double> iid_priority_throughput(const CellPopulation& pop, const McsTable& table,
                                            const AnalyticConfig& cfg = {});

/// Unique-MCS machinery run on the interference-as-noise laws.
RateResult unique_mcs_ian_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                     const McsTable& table, double tti_s,
                                     const AnalyticConfig& cfg = {});

}  // namespace pfs
