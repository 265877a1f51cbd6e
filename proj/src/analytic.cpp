// SPDX-License-Identifier: Apache-2.0
#include "pfs/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pfs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> threshold_edges(const McsTable& table) {
    std::vector<double> edges;
    edges.reserve(table.levels());
    for (const auto& e : table.entries()) edges.push_back(e.threshold);
    return edges;
}

double envelope_rate(const SinrDistribution& d) {
    return d.is_exponential() ? d.rate() : d.noise_ratio();
}

// Truncation point for infinite tails: where the e^{-z env} envelope drops
// below abs_tol/10, never earlier than past the last MCS edge.
num::QuadratureConfig tail_config(const AnalyticConfig& cfg, double env, double lo) {
    num::QuadratureConfig q = cfg.quad;
    q.tail = num::QuadratureConfig::TailTransform::truncate_at;
    q.truncate_z = std::max({2.0 * lo + 1.0, std::log(10.0 / q.abs_tol) / env, 50.0});
    return q;
}

// Π_{g≠j} F_g((E[Z_g]/E[Z_j]) z) · f_j(z), evaluated through the product
// forms only; this is the oracle/fallback integrand.
std::function<double(double)> scheduled_integrand(const CellPopulation& pop, std::size_t j,
                                                  int rb) {
    const SinrDistribution* own = &pop.terminals[j][rb];
    const double mean_j = own->mean();
    std::vector<const SinrDistribution*> others;
    std::vector<double> ratios;
    for (std::size_t g = 0; g < pop.size(); ++g) {
        if (g == j) continue;
        others.push_back(&pop.terminals[g][rb]);
        ratios.push_back(pop.terminals[g][rb].mean() / mean_j);
    }
    return [own, others = std::move(others), ratios = std::move(ratios)](double z) {
        double acc = own->pdf_product(z);
        for (std::size_t i = 0; i < others.size(); ++i) {
            acc *= others[i]->cdf_product(ratios[i] * z);
        }
        return acc;
    };
}

bool all_exact(const CellPopulation& pop, int rb) {
    for (const auto& terminal : pop.terminals) {
        if (terminal[rb].is_exponential()) return false;
    }
    return true;
}

bool all_pf_usable(const CellPopulation& pop, int rb) {
    for (const auto& terminal : pop.terminals) {
        if (!terminal[rb].partial_fraction_usable()) return false;
    }
    return true;
}

// Interval masses of the scheduled (unnormalized) measure by quadrature.
// masses[m] covers [edges[m], edges[m+1]) with an implicit edge at infinity.
std::vector<double> masses_quadrature(const CellPopulation& pop, std::size_t j, int rb,
                                      const std::vector<double>& edges,
                                      const AnalyticConfig& cfg) {
    auto f = scheduled_integrand(pop, j, rb);
    const std::size_t m_count = edges.size();
    std::vector<double> masses(m_count);
    for (std::size_t m = 0; m + 1 < m_count; ++m) {
        masses[m] = num::integrate(f, edges[m], edges[m + 1], cfg.quad);
    }
    masses[m_count - 1] = num::integrate(
        f, edges.back(), kInf,
        tail_config(cfg, envelope_rate(pop.terminals[j][rb]), edges.back()));
    for (double& m : masses) m = std::max(m, 0.0);
    return masses;
}

// Closed-form interval masses via the antiderivative. Returns false when
// the expansion is unavailable, ill-conditioned, or fails the total-mass
// cross-check against quadrature (in which case the caller falls back).
bool try_masses_closed(const CellPopulation& pop, std::size_t j, int rb,
                       const std::vector<double>& edges, const AnalyticConfig& cfg,
                       std::vector<double>& out) {
    if (!all_exact(pop, rb) || !all_pf_usable(pop, rb)) return false;
    try {
        const Antiderivative anti = build_antiderivative(j, pop, rb, cfg);
        const double at_zero = anti(0.0);
        const double total = 1.0 - at_zero;
        if (cfg.cross_check_total_mass && pop.size() > 1) {
            const double reference = scheduling_probability(j, pop, rb, cfg);
            if (std::abs(total - reference) >
                cfg.cross_check_rel_tol * std::max(std::abs(reference), 1e-12)) {
                return false;
            }
        }
        std::vector<double> at_edges(edges.size());
        for (std::size_t m = 0; m < edges.size(); ++m) at_edges[m] = anti(edges[m]);
        out.resize(edges.size());
        for (std::size_t m = 0; m + 1 < edges.size(); ++m) {
            out[m] = std::max(at_edges[m + 1] - at_edges[m], 0.0);
        }
        out[edges.size() - 1] = std::max(1.0 - at_edges.back(), 0.0);
        return true;
    } catch (const IllConditionedError&) {
        return false;
    } catch (const ComplexityError&) {
        return false;
    }
}

double binom_coeff(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

}  // namespace

CellPopulation make_population(std::vector<SinrDistribution> per_terminal, FrameConfig frame) {
    CellPopulation pop;
    pop.frame = frame;
    pop.terminals.reserve(per_terminal.size());
    for (auto& d : per_terminal) {
        pop.terminals.emplace_back(static_cast<std::size_t>(frame.num_rb), d);
    }
    validate_population(pop);
    return pop;
}

void validate_population(const CellPopulation& pop) {
    if (pop.terminals.empty()) {
        throw std::invalid_argument("population: at least one terminal required");
    }
    if (pop.frame.num_rb < 1) {
        throw std::invalid_argument("population: num_rb must be >= 1");
    }
    if (!(pop.frame.tti_s > 0.0)) {
        throw std::invalid_argument("population: tti_s must be positive");
    }
    for (const auto& terminal : pop.terminals) {
        if (terminal.size() != static_cast<std::size_t>(pop.frame.num_rb)) {
            throw std::invalid_argument(
                "population: every terminal needs one distribution per resource block");
        }
        for (const auto& dist : terminal) {
            (void)dist.mean();  // raises InfiniteMeanError on divergent entries
        }
    }
}

bool RateResult::all_ok() const {
    for (const auto& e : error) {
        if (!e.empty()) return false;
    }
    return true;
}

namespace {

bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
    const std::size_t k = comb.size();
    for (std::size_t i = k; i-- > 0;) {
        if (comb[i] != i + n - k) {
            ++comb[i];
            for (std::size_t q = i + 1; q < k; ++q) comb[q] = comb[q - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

Antiderivative build_antiderivative(std::size_t j, const CellPopulation& pop, int rb,
                                    const AnalyticConfig& cfg) {
    validate_population(pop);
    if (j >= pop.size()) {
        throw std::out_of_range("build_antiderivative: terminal index out of range");
    }
    if (rb < 0 || rb >= pop.frame.num_rb) {
        throw std::out_of_range("build_antiderivative: resource block index out of range");
    }
    for (const auto& terminal : pop.terminals) {
        const auto& d = terminal[rb];
        if (d.is_exponential() || !d.partial_fraction_usable()) {
            throw std::invalid_argument(
                "build_antiderivative: requires exact-form distributions with usable "
                "partial-fraction decompositions");
        }
    }

    Antiderivative anti;
    anti.own_ = pop.terminals[j][rb];
    anti.own_c0_ = anti.own_.noise_ratio();
    anti.escalate_condition_ = cfg.escalate_condition;
    anti.condition_limit_ = cfg.condition_limit;

    const std::size_t terminal_count = pop.size();
    if (terminal_count == 1) return anti;

    const double mean_j = anti.own_.mean();
    std::vector<std::vector<double>> hat_roots;
    std::vector<std::vector<double>> hat_weights;
    std::vector<double> hat_c0;
    for (std::size_t g = 0; g < terminal_count; ++g) {
        if (g == j) continue;
        const auto& dg = pop.terminals[g][rb];
        const double ratio = dg.mean() / mean_j;  // E[Z_g]/E[Z_j]
        std::vector<double> roots = dg.roots();
        std::vector<double> weights = dg.weights();
        for (double& r : roots) r /= ratio;
        for (double& w : weights) w /= ratio;
        hat_roots.push_back(std::move(roots));
        hat_weights.push_back(std::move(weights));
        hat_c0.push_back(dg.noise_ratio() * ratio);
    }

    const std::size_t group_count = hat_roots.size();
    const std::vector<double>& own_roots = anti.own_.roots();
    const std::vector<double>& own_weights = anti.own_.weights();

    std::vector<std::size_t> comb;
    std::vector<std::size_t> mi;
    std::vector<double> poles;
    for (std::size_t k = 1; k <= group_count; ++k) {
        comb.resize(k);
        std::iota(comb.begin(), comb.end(), std::size_t{0});
        const double sign = (k % 2 == 1) ? -1.0 : 1.0;
        do {
            double decay = anti.own_c0_;
            for (std::size_t l = 0; l < k; ++l) decay += hat_c0[comb[l]];

            mi.assign(k, 0);
            poles.resize(k);
            bool exhausted = false;
            while (!exhausted) {
                double prod_u = 1.0;
                for (std::size_t l = 0; l < k; ++l) {
                    poles[l] = hat_roots[comb[l]][mi[l]];
                    prod_u *= hat_weights[comb[l]][mi[l]];
                }
                for (std::size_t l = 0; l < k; ++l) {
                    double w_l = 1.0;
                    for (std::size_t q = 0; q < k; ++q) {
                        if (q == l) continue;
                        w_l /= poles[q] - poles[l];
                    }
                    for (std::size_t t = 0; t < own_roots.size(); ++t) {
                        const double coeff = sign * prod_u * w_l * own_weights[t];
                        if (!std::isfinite(coeff) || poles[l] == own_roots[t]) {
                            throw IllConditionedError(
                                "build_antiderivative: coincident poles across terminals", kInf);
                        }
                        anti.terms_.push_back({coeff, poles[l], own_roots[t], decay});
                        if (anti.terms_.size() > cfg.term_cap) {
                            throw ComplexityError(
                                "build_antiderivative: term count exceeds cap; use the "
                                "quadrature path",
                                anti.terms_.size());
                        }
                    }
                }
                std::size_t pos = 0;
                while (pos < k) {
                    if (++mi[pos] < hat_roots[comb[pos]].size()) break;
                    mi[pos] = 0;
                    ++pos;
                }
                exhausted = (pos == k);
            }
        } while (next_combination(comb, group_count));
    }
    return anti;
}

Antiderivative::Evaluation Antiderivative::evaluate(double z) const {
    if (std::isnan(z) || z < 0.0) {
        throw std::domain_error("Antiderivative: z must be >= 0");
    }
    const double base = own_.cdf(z);
    if (terms_.empty()) return {base, 1.0};

    double sum = 0.0;
    double comp = 0.0;
    double abs_sum = 0.0;
    for (const Term& t : terms_) {
        const double envelope = std::exp(-t.decay * z);
        double v = 0.0;
        if (envelope != 0.0) {
            const double a_coef = 1.0 / (t.a - t.b);
            const double c_coef = own_c0_ * a_coef;
            const double q = a_coef * a_coef - c_coef;
            v = t.coeff * envelope *
                (-q * num::exp_e1_scaled(t.decay * (t.a + z)) +
                 (q + a_coef * t.decay) * num::exp_e1_scaled(t.decay * (t.b + z)) -
                 a_coef / (t.b + z));
        }
        const double s = sum + v;
        comp += (std::abs(sum) >= std::abs(v)) ? (sum - s) + v : (v - s) + sum;
        sum = s;
        abs_sum += std::abs(v);
    }
    double correction = sum + comp;
    const double condition = 1.0 + abs_sum;
    if (!std::isfinite(correction) || condition > condition_limit_) {
        throw IllConditionedError("Antiderivative: expansion condition exceeds limit",
                                  condition);
    }
    if (condition > escalate_condition_) {
        // Extended-precision pass: same terms, long double throughout.
        long double lsum = 0.0L;
        long double lcomp = 0.0L;
        const long double lz = z;
        const long double lc0 = own_c0_;
        for (const Term& t : terms_) {
            const long double envelope = std::exp(-static_cast<long double>(t.decay) * lz);
            long double v = 0.0L;
            if (envelope != 0.0L) {
                const long double a_coef = 1.0L / (static_cast<long double>(t.a) - t.b);
                const long double c_coef = lc0 * a_coef;
                const long double q = a_coef * a_coef - c_coef;
                v = static_cast<long double>(t.coeff) * envelope *
                    (-q * num::exp_e1_scaled_ld(t.decay * (t.a + lz)) +
                     (q + a_coef * t.decay) * num::exp_e1_scaled_ld(t.decay * (t.b + lz)) -
                     a_coef / (t.b + lz));
            }
            const long double s = lsum + v;
            lcomp += (std::abs(lsum) >= std::abs(v)) ? (lsum - s) + v : (v - s) + lsum;
            lsum = s;
        }
        correction = static_cast<double>(lsum + lcomp);
    }
    return {base + correction, condition};
}

RateResult relaxed_mcs_throughput(const CellPopulation& pop, const McsTable& table,
                                  const AnalyticConfig& cfg) {
    validate_population(pop);
    const std::vector<double> edges = threshold_edges(table);
    const double scale = table.payload_scale() / pop.frame.tti_s;
    const std::size_t terminal_count = pop.size();
    const int num_rb = pop.frame.num_rb;

    RateResult res;
    res.rate_bps.assign(terminal_count, 0.0);
    res.quadrature_fallback.assign(terminal_count, false);
    res.error.assign(terminal_count, "");

    for (std::size_t j = 0; j < terminal_count; ++j) {
        try {
            double rate = 0.0;
            for (int n = 0; n < num_rb; ++n) {
                std::vector<double> masses;
                if (terminal_count == 1) {
                    // No competitors: the primitive is the terminal's own CDF.
                    const auto& d = pop.terminals[j][n];
                    masses.resize(edges.size());
                    for (std::size_t m = 0; m + 1 < edges.size(); ++m) {
                        masses[m] = d.cdf_product(edges[m + 1]) - d.cdf_product(edges[m]);
                    }
                    masses[edges.size() - 1] = 1.0 - d.cdf_product(edges.back());
                } else if (all_exact(pop, n)) {
                    if (!try_masses_closed(pop, j, n, edges, cfg, masses)) {
                        masses = masses_quadrature(pop, j, n, edges, cfg);
                        res.quadrature_fallback[j] = true;
                    }
                } else {
                    masses = masses_quadrature(pop, j, n, edges, cfg);
                }
                for (std::size_t m = 0; m < edges.size(); ++m) {
                    rate += table.entries()[m].efficiency * masses[m];
                }
            }
            res.rate_bps[j] = rate * scale;
        } catch (const std::exception& e) {
            res.rate_bps[j] = kNaN;
            res.error[j] = e.what();
        }
    }
    return res;
}

double scheduling_probability(std::size_t j, const CellPopulation& pop, int rb,
                              const AnalyticConfig& cfg) {
    validate_population(pop);
    if (j >= pop.size()) {
        throw std::out_of_range("scheduling_probability: terminal index out of range");
    }
    if (rb < 0 || rb >= pop.frame.num_rb) {
        throw std::out_of_range("scheduling_probability: resource block index out of range");
    }
    if (pop.size() == 1) return 1.0;
    auto f = scheduled_integrand(pop, j, rb);
    return num::integrate(f, 0.0, kInf,
                          tail_config(cfg, envelope_rate(pop.terminals[j][rb]), 0.0));
}

double scheduled_sinr_pdf(std::size_t j, const CellPopulation& pop, int rb, double z,
                          const AnalyticConfig& cfg) {
    if (std::isnan(z) || z < 0.0) {
        throw std::domain_error("scheduled_sinr_pdf: z must be >= 0");
    }
    const double prob = scheduling_probability(j, pop, rb, cfg);
    return scheduled_integrand(pop, j, rb)(z) / prob;
}

double scheduled_sinr_cdf(std::size_t j, const CellPopulation& pop, int rb, double z,
                          const AnalyticConfig& cfg) {
    if (std::isnan(z) || z < 0.0) {
        throw std::domain_error("scheduled_sinr_cdf: z must be >= 0");
    }
    const double prob = scheduling_probability(j, pop, rb, cfg);
    if (z == 0.0) return 0.0;
    if (pop.size() == 1) return pop.terminals[j][rb].cdf_product(z);
    const double mass = num::integrate(scheduled_integrand(pop, j, rb), 0.0, z, cfg.quad);
    return std::clamp(mass / prob, 0.0, 1.0);
}

namespace {

// Scheduling probability plus the scheduled-SINR CDF sampled at the MCS
// edges: the shared ingredient of both unique-MCS evaluation paths.
struct SchedProfile {
    double prob = 1.0;
    std::vector<double> cdf_edges;
    bool fallback = false;
};

SchedProfile sched_profile(std::size_t j, const CellPopulation& pop, int rb,
                           const std::vector<double>& edges, const AnalyticConfig& cfg) {
    SchedProfile prof;
    prof.cdf_edges.resize(edges.size());

    if (pop.size() == 1) {
        const auto& d = pop.terminals[j][rb];
        for (std::size_t m = 0; m < edges.size(); ++m) {
            prof.cdf_edges[m] = d.cdf_product(edges[m]);
        }
        return prof;
    }

    prof.prob = scheduling_probability(j, pop, rb, cfg);

    bool closed_done = false;
    if (all_exact(pop, rb) && all_pf_usable(pop, rb)) {
        try {
            const Antiderivative anti = build_antiderivative(j, pop, rb, cfg);
            const double at_zero = anti(0.0);
            const double total = 1.0 - at_zero;
            if (std::abs(total - prof.prob) <=
                cfg.cross_check_rel_tol * std::max(prof.prob, 1e-12)) {
                double running = 0.0;
                for (std::size_t m = 0; m < edges.size(); ++m) {
                    const double v = std::clamp((anti(edges[m]) - at_zero) / total, 0.0, 1.0);
                    running = std::max(running, v);
                    prof.cdf_edges[m] = running;
                }
                closed_done = true;
            }
        } catch (const IllConditionedError&) {
        } catch (const ComplexityError&) {
        }
    }
    if (!closed_done) {
        prof.fallback = all_exact(pop, rb);
        auto f = scheduled_integrand(pop, j, rb);
        double cum = 0.0;
        double prev = 0.0;
        for (std::size_t m = 0; m < edges.size(); ++m) {
            cum += num::integrate(f, prev, edges[m], cfg.quad);
            prev = edges[m];
            prof.cdf_edges[m] = std::clamp(cum / prof.prob, 0.0, 1.0);
        }
        for (std::size_t m = 1; m < edges.size(); ++m) {
            prof.cdf_edges[m] = std::max(prof.cdf_edges[m], prof.cdf_edges[m - 1]);
        }
    }
    return prof;
}

void require_homogeneous_blocks(const CellPopulation& pop) {
    for (const auto& terminal : pop.terminals) {
        const auto& first = terminal.front();
        for (const auto& d : terminal) {
            const bool same = d.form() == first.form() && d.rate() == first.rate() &&
                              d.roots() == first.roots() &&
                              d.noise_ratio() == first.noise_ratio();
            if (!same) {
                throw std::invalid_argument(
                    "unique-MCS model requires homogeneous per-RB transmit power "
                    "(identical distribution on every resource block)");
            }
        }
    }
}

RateResult unique_mcs_impl(const CellPopulation& pop, const McsTable& table,
                           const AnalyticConfig& cfg, bool binomial_path) {
    validate_population(pop);
    require_homogeneous_blocks(pop);
    const std::vector<double> edges = threshold_edges(table);
    const double scale = table.payload_scale() / pop.frame.tti_s;
    const std::size_t terminal_count = pop.size();
    const int num_rb = pop.frame.num_rb;

    RateResult res;
    res.rate_bps.assign(terminal_count, 0.0);
    res.quadrature_fallback.assign(terminal_count, false);
    res.error.assign(terminal_count, "");

    for (std::size_t j = 0; j < terminal_count; ++j) {
        try {
            const SchedProfile prof = sched_profile(j, pop, 0, edges, cfg);
            res.quadrature_fallback[j] = prof.fallback;
            const double p = prof.prob;
            double rate = 0.0;
            for (int n = 1; n <= num_rb; ++n) {
                const double weight = binom_coeff(num_rb, n) * std::pow(p, n) *
                                      std::pow(1.0 - p, num_rb - n);
                if (weight == 0.0) continue;
                for (std::size_t m = 0; m < edges.size(); ++m) {
                    const double f_lo = prof.cdf_edges[m];
                    const double f_hi = (m + 1 < edges.size()) ? prof.cdf_edges[m + 1] : 1.0;
                    double mass;
                    if (!binomial_path) {
                        mass = std::pow(1.0 - f_lo, n) - std::pow(1.0 - f_hi, n);
                    } else {
                        std::vector<double> terms(static_cast<std::size_t>(n));
                        for (int k = 0; k < n; ++k) {
                            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
                            terms[k] = sgn * binom_coeff(n - 1, k) *
                                       (std::pow(f_hi, k + 1) - std::pow(f_lo, k + 1)) /
                                       static_cast<double>(k + 1);
                        }
                        mass = static_cast<double>(n) * num::compensated_sum(terms).value;
                    }
                    rate += weight * static_cast<double>(n) * table.entries()[m].efficiency *
                            std::max(mass, 0.0);
                }
            }
            res.rate_bps[j] = rate * scale;
        } catch (const std::exception& e) {
            res.rate_bps[j] = kNaN;
            res.error[j] = e.what();
        }
    }
    return res;
}

}  // namespace

RateResult unique_mcs_throughput(const CellPopulation& pop, const McsTable& table,
                                 const AnalyticConfig& cfg) {
    return unique_mcs_impl(pop, table, cfg, false);
}

RateResult unique_mcs_throughput_binomial(const CellPopulation& pop, const McsTable& table,
                                          const AnalyticConfig& cfg) {
    return unique_mcs_impl(pop, table, cfg, true);
}

std::vector<double> ultra_dense_relaxed_throughput(const std::vector<double>& mean_sinrs,
                                                   int terminal_count, int num_rb, double tti_s,
                                                   const McsTable& table) {
    if (terminal_count < 1) {
        throw std::invalid_argument("ultra_dense_relaxed_throughput: terminal count >= 1");
    }
    if (num_rb < 1 || !(tti_s > 0.0)) {
        throw std::invalid_argument("ultra_dense_relaxed_throughput: invalid frame constants");
    }
    const std::vector<double> edges = threshold_edges(table);
    const double scale =
        table.payload_scale() * num_rb / (tti_s * static_cast<double>(terminal_count));
    std::vector<double> rates;
    rates.reserve(mean_sinrs.size());
    for (double mean : mean_sinrs) {
        if (!(mean > 0.0) || !std::isfinite(mean)) {
            throw std::invalid_argument("ultra_dense_relaxed_throughput: means must be positive");
        }
        double rate = 0.0;
        for (std::size_t m = 0; m < edges.size(); ++m) {
            const double f_lo = -std::expm1(-edges[m] / mean);
            const double pow_lo = std::pow(f_lo, terminal_count);
            const double pow_hi =
                (m + 1 < edges.size())
                    ? std::pow(-std::expm1(-edges[m + 1] / mean), terminal_count)
                    : 1.0;
            rate += table.entries()[m].efficiency * (pow_hi - pow_lo);
        }
        rates.push_back(rate * scale);
    }
    return rates;
}

double ultra_dense_unique_mcs_throughput(double mean_sinr, int terminal_count, int num_rb,
                                         double tti_s, const McsTable& table) {
    if (terminal_count < 1) {
        throw std::invalid_argument("ultra_dense_unique_mcs_throughput: terminal count >= 1");
    }
    if (num_rb < 1 || !(tti_s > 0.0)) {
        throw std::invalid_argument("ultra_dense_unique_mcs_throughput: invalid frame constants");
    }
    if (!(mean_sinr > 0.0) || !std::isfinite(mean_sinr)) {
        throw std::invalid_argument("ultra_dense_unique_mcs_throughput: mean must be positive");
    }
    const std::vector<double> edges = threshold_edges(table);
    const double scale = table.payload_scale() / tti_s;
    const double p = 1.0 / terminal_count;

    std::vector<double> f_edges(edges.size());
    for (std::size_t m = 0; m < edges.size(); ++m) {
        f_edges[m] = -std::expm1(-edges[m] / mean_sinr);
    }

    double rate = 0.0;
    for (int n = 1; n <= num_rb; ++n) {
        const double weight =
            binom_coeff(num_rb, n) * std::pow(p, n) * std::pow(1.0 - p, num_rb - n);
        if (weight == 0.0) continue;
        for (std::size_t m = 0; m < edges.size(); ++m) {
            const double f_lo = f_edges[m];
            const double f_hi = (m + 1 < edges.size()) ? f_edges[m + 1] : 1.0;
            std::vector<double> terms(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) {
                const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
                const double exponent = static_cast<double>(terminal_count) * (k + 1);
                terms[k] = sgn * binom_coeff(n - 1, k) *
                           (std::pow(f_hi, exponent) - std::pow(f_lo, exponent)) /
                           static_cast<double>(k + 1);
            }
            const double mass = static_cast<double>(n) * num::compensated_sum(terms).value;
            rate += weight * static_cast<double>(n) * table.entries()[m].efficiency *
                    std::max(mass, 0.0);
        }
    }
    return rate * scale;
}

double pfs_sinr_gain(int terminal_count) {
    if (terminal_count < 1) {
        throw std::invalid_argument("pfs_sinr_gain: terminal count must be >= 1");
    }
    const int j_count = terminal_count;
    if (j_count <= 42) {
        // Exact integer evaluation: with C(J-1,k) J/(k+1) = C(J,k+1) the sum
        // becomes Σ_m (-1)^{m-1} C(J,m)/m over the common denominator
        // lcm(1..J), which fits 64/128-bit integers up to J = 42.
        unsigned long long lcm_all = 1;
        for (int m = 2; m <= j_count; ++m) {
            lcm_all = std::lcm(lcm_all, static_cast<unsigned long long>(m));
        }
        std::vector<unsigned long long> binom(static_cast<std::size_t>(j_count) + 1, 0);
        binom[0] = 1;
        for (int row = 1; row <= j_count; ++row) {
            for (int i = row; i >= 1; --i) binom[i] += binom[i - 1];
        }
        __int128 numer = 0;
        for (int m = 1; m <= j_count; ++m) {
            const __int128 term = static_cast<__int128>(binom[m]) *
                                  (lcm_all / static_cast<unsigned long long>(m));
            numer += (m % 2 == 1) ? term : -term;
        }
        return static_cast<double>(static_cast<long double>(numer) /
                                   static_cast<long double>(lcm_all));
    }
    // Large J: compensated long double evaluation of the defining sum.
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double binom = 1.0L;  // C(J-1, k)
    for (int k = 0; k <= j_count - 1; ++k) {
        if (k > 0) binom = binom * (j_count - k) / k;
        const long double kp1 = static_cast<long double>(k) + 1.0L;
        long double term = binom * static_cast<long double>(j_count) / (kp1 * kp1);
        if (k % 2 == 1) term = -term;
        const long double s = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - s) + term : (term - s) + sum;
        sum = s;
    }
    return static_cast<double>(sum + comp);
}

double scheduled_mean_dense(double p0, double total_interference, double n0,
                            int terminal_count) {
    if (!(p0 > 0.0) || !(n0 > 0.0) || total_interference < 0.0) {
        throw std::invalid_argument("scheduled_mean_dense: powers must be positive");
    }
    return p0 / (n0 + total_interference) * pfs_sinr_gain(terminal_count);
}

}  // namespace pfs
