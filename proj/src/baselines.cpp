// SPDX-License-Identifier: Apache-2.0
#include "pfs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pfs/numerics.hpp"

namespace pfs {

namespace {

void check_matrix(const std::vector<std::vector<IanSinr>>& m) {
    if (m.empty() || m.front().empty()) {
        throw std::invalid_argument("baseline: empty SINR matrix");
    }
    const std::size_t cols = m.front().size();
    for (const auto& row : m) {
        if (row.size() != cols) {
            throw std::invalid_argument("baseline: ragged SINR matrix");
        }
        for (const auto& z : row) {
            if (!(z.tilde_z > 0.0) || !std::isfinite(z.tilde_z)) {
                throw std::invalid_argument("baseline: tilde_z must be positive and finite");
            }
        }
    }
}

double phi_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2_v<double> / 2.0); }

}  // namespace

std::vector<std::vector<IanSinr>> ian_sinr_matrix(
    const std::vector<std::vector<LinkProfile>>& links) {
    std::vector<std::vector<IanSinr>> out;
    out.reserve(links.size());
    for (const auto& row : links) {
        std::vector<IanSinr> r;
        r.reserve(row.size());
        for (const auto& link : row) {
            double acc = link.noise_power;
            for (double p : link.interferer_powers) acc += p;
            r.push_back({link.signal_power / acc});
        }
        out.push_back(std::move(r));
    }
    return out;
}

GaussianRateParams gaussian_rate_params(IanSinr z, const McsTable& table) {
    if (!(z.tilde_z > 0.0)) {
        throw std::invalid_argument("gaussian_rate_params: tilde_z must be positive");
    }
    // C(Z_tilde z) is a step function of z, so the moments are finite sums
    // of exponential interval masses.
    double mu = 0.0;
    double second = 0.0;
    const auto& entries = table.entries();
    for (std::size_t m = 0; m < entries.size(); ++m) {
        const double lo = entries[m].threshold / z.tilde_z;
        const double hi_mass = (m + 1 < entries.size())
                                   ? std::exp(-entries[m + 1].threshold / z.tilde_z)
                                   : 0.0;
        const double mass = std::exp(-lo) - hi_mass;
        mu += entries[m].efficiency * mass;
        second += entries[m].efficiency * entries[m].efficiency * mass;
    }
    return {mu, std::sqrt(std::max(second - mu * mu, 0.0))};
}

std::vector<double> simple_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                      int terminal_count, const McsTable& table, double tti_s) {
    check_matrix(mean_sinrs);
    if (terminal_count < 1 || !(tti_s > 0.0)) {
        throw std::invalid_argument("simple_throughput: invalid terminal count or TTI");
    }
    std::vector<double> rates;
    rates.reserve(mean_sinrs.size());
    for (const auto& row : mean_sinrs) {
        double sum = 0.0;
        for (const auto& z : row) sum += table.payload_bits(z.tilde_z);
        rates.push_back(sum / (terminal_count * tti_s));
    }
    return rates;
}

std::vector<double> ian_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                   const McsTable& table, double tti_s,
                                   const AnalyticConfig& cfg) {
    check_matrix(mean_sinrs);
    if (!(tti_s > 0.0)) throw std::invalid_argument("ian_throughput: invalid TTI");
    const int j_count = static_cast<int>(mean_sinrs.size());
    const auto& entries = table.entries();
    const double scale = table.payload_scale() / tti_s;

    std::vector<double> rates;
    rates.reserve(mean_sinrs.size());
    for (const auto& row : mean_sinrs) {
        double rate = 0.0;
        for (const auto& z : row) {
            // With exponential laws, every competitor's mean-scaled CDF
            // collapses onto the terminal's own, so the interval mass is
            // (F^J(hi) - F^J(lo))/J with F = 1 - e^{-z/tilde}.
            double closed = 0.0;
            for (std::size_t m = 0; m < entries.size(); ++m) {
                const double f_lo = -std::expm1(-entries[m].threshold / z.tilde_z);
                const double pow_lo = std::pow(f_lo, j_count);
                const double pow_hi =
                    (m + 1 < entries.size())
                        ? std::pow(-std::expm1(-entries[m + 1].threshold / z.tilde_z), j_count)
                        : 1.0;
                closed += entries[m].efficiency * (pow_hi - pow_lo) / j_count;
            }
            // Mandatory quadrature cross-check of the same rate integral.
            double checked = 0.0;
            const double lambda = 1.0 / z.tilde_z;
            auto integrand = [lambda, j_count](double v) {
                const double f = -std::expm1(-lambda * v);
                return std::pow(f, j_count - 1) * lambda * std::exp(-lambda * v);
            };
            for (std::size_t m = 0; m < entries.size(); ++m) {
                double mass;
                if (m + 1 < entries.size()) {
                    mass = num::integrate(integrand, entries[m].threshold,
                                          entries[m + 1].threshold, cfg.quad);
                } else {
                    num::QuadratureConfig tail = cfg.quad;
                    tail.tail = num::QuadratureConfig::TailTransform::truncate_at;
                    tail.truncate_z = std::max(2.0 * entries[m].threshold + 1.0,
                                               std::log(10.0 / tail.abs_tol) / lambda);
                    mass = num::integrate(integrand, entries[m].threshold,
                                          std::numeric_limits<double>::infinity(), tail);
                }
                checked += entries[m].efficiency * mass;
            }
            if (std::abs(closed - checked) > 1e-8 * std::max(std::abs(checked), 1e-9)) {
                throw std::runtime_error(
                    "ian_throughput: closed form and quadrature disagree");
            }
            rate += closed;
        }
        rates.push_back(rate * scale);
    }
    return rates;
}

std::vector<double> gaussian_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                        const McsTable& table, double tti_s,
                                        const AnalyticConfig& cfg) {
    check_matrix(mean_sinrs);
    if (!(tti_s > 0.0)) throw std::invalid_argument("gaussian_throughput: invalid TTI");
    const std::size_t j_count = mean_sinrs.size();
    const std::size_t n_count = mean_sinrs.front().size();
    const double scale = table.payload_scale() / tti_s;
    const double inv_sqrt_2pi = 0.3989422804014327;

    std::vector<std::vector<GaussianRateParams>> params(j_count,
                                                        std::vector<GaussianRateParams>(n_count));
    for (std::size_t j = 0; j < j_count; ++j) {
        for (std::size_t n = 0; n < n_count; ++n) {
            params[j][n] = gaussian_rate_params(mean_sinrs[j][n], table);
        }
    }

    std::vector<double> rates(j_count, 0.0);
    for (std::size_t j = 0; j < j_count; ++j) {
        for (std::size_t n = 0; n < n_count; ++n) {
            const GaussianRateParams own = params[j][n];
            if (own.mu == 0.0) continue;  // never decodes anything
            if (own.sigma == 0.0) {
                // Deterministic own rate: competitors beat the normalized
                // value 1 with probability 1/2 when random; deterministic
                // ones are resolved by mean comparison.
                double win = 1.0;
                for (std::size_t g = 0; g < j_count; ++g) {
                    if (g == j) continue;
                    const GaussianRateParams other = params[g][n];
                    if (other.mu == 0.0) continue;
                    win *= (other.sigma == 0.0) ? (own.mu >= other.mu ? 1.0 : 0.0) : 0.5;
                }
                rates[j] += own.mu * win;
                continue;
            }
            std::vector<double> factors;  // mu_g sigma_j / (mu_j sigma_g)
            for (std::size_t g = 0; g < j_count; ++g) {
                if (g == j) continue;
                const GaussianRateParams other = params[g][n];
                if (other.mu == 0.0 || other.sigma == 0.0) continue;  // factor 1
                factors.push_back(other.mu * own.sigma / (own.mu * other.sigma));
            }
            auto integrand = [&](double z) {
                double acc = (z * own.sigma + own.mu) * inv_sqrt_2pi * std::exp(-0.5 * z * z);
                for (double r : factors) acc *= phi_cdf(r * z);
                return acc;
            };
            rates[j] += num::integrate(integrand, 0.0, 16.0, cfg.quad);
        }
        rates[j] *= scale;
    }
    return rates;
}

std::vector<double> iid_priority_throughput(const CellPopulation& pop, const McsTable& table,
                                            const AnalyticConfig&) {
    validate_population(pop);
    const int j_count = static_cast<int>(pop.size());
    const auto& entries = table.entries();
    const double scale = table.payload_scale() / pop.frame.tti_s;

    std::vector<double> rates(pop.size(), 0.0);
    for (std::size_t j = 0; j < pop.size(); ++j) {
        for (int n = 0; n < pop.frame.num_rb; ++n) {
            const auto& d = pop.terminals[j][n];
            // Substituting u = F(z) makes ∫ F^{J-1} f over an interval exact.
            for (std::size_t m = 0; m < entries.size(); ++m) {
                const double pow_lo = std::pow(d.cdf_product(entries[m].threshold), j_count);
                const double pow_hi =
                    (m + 1 < entries.size())
                        ? std::pow(d.cdf_product(entries[m + 1].threshold), j_count)
                        : 1.0;
                rates[j] += entries[m].efficiency * (pow_hi - pow_lo) / j_count;
            }
        }
        rates[j] *= scale;
    }
    return rates;
}

RateResult unique_mcs_ian_throughput(const std::vector<std::vector<IanSinr>>& mean_sinrs,
                                     const McsTable& table, double tti_s,
                                     const AnalyticConfig& cfg) {
    check_matrix(mean_sinrs);
    if (!(tti_s > 0.0)) {
        throw std::invalid_argument("unique_mcs_ian_throughput: invalid TTI");
    }
    for (const auto& row : mean_sinrs) {
        for (const auto& z : row) {
            if (z.tilde_z != row.front().tilde_z) {
                throw std::invalid_argument(
                    "unique_mcs_ian_throughput: requires homogeneous per-RB powers");
            }
        }
    }
    FrameConfig frame;
    frame.num_rb = static_cast<int>(mean_sinrs.front().size());
    frame.tti_s = tti_s;
    std::vector<SinrDistribution> dists;
    dists.reserve(mean_sinrs.size());
    for (const auto& row : mean_sinrs) {
        dists.push_back(asymptotic_distribution(row.front().tilde_z, 0.0, 1.0));
    }
    return unique_mcs_throughput(make_population(std::move(dists), frame), table, cfg);
}

}  // namespace pfs
