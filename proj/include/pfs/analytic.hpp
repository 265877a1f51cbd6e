// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfs/frame.hpp"
#include "pfs/mcs.hpp"
#include "pfs/numerics.hpp"
#include "pfs/sinr.hpp"

namespace pfs {

/// Per-terminal, per-resource-block SINR laws of one cell.
struct CellPopulation {
    std::vector<std::vector<SinrDistribution>> terminals;  ///< [j][rb]
    FrameConfig frame;

    std::size_t size() const { return terminals.size(); }
};

/// Replicates one distribution per terminal across frame.num_rb blocks
/// (the homogeneous-power case).
CellPopulation make_population(std::vector<SinrDistribution> per_terminal, FrameConfig frame);

/// Throws std::invalid_argument (or InfiniteMeanError) if the population
/// violates its invariants: at least one terminal, a common block count,
/// finite mean everywhere.
void validate_population(const CellPopulation& pop);

struct AnalyticConfig {
    num::QuadratureConfig quad{};

    /// Closed-form sums are re-accumulated in extended precision above
    /// escalate_condition and abandoned for quadrature above condition_limit.
    double escalate_condition = 1e8;
    double condition_limit = 1e12;

    /// Antiderivative expansions larger than this raise ComplexityError.
    std::size_t term_cap = 10'000'000;

    /// Compare the closed-form total mass against quadrature and fall back
    /// when they disagree by more than cross_check_rel_tol.
    bool cross_check_total_mass = true;
    double cross_check_rel_tol = 1e-6;
};

class IllConditionedError : public std::runtime_error {
  public:
    IllConditionedError(const std::string& msg, double condition)
        : std::runtime_error(msg), condition_(condition) {}
    double condition() const noexcept { return condition_; }

  private:
    double condition_;
};

class ComplexityError : public std::runtime_error {
  public:
    ComplexityError(const std::string& msg, std::size_t terms)
        : std::runtime_error(msg), terms_(terms) {}
    std::size_t terms() const noexcept { return terms_; }

  private:
    std::size_t terms_;
};

/// Closed-form primitive of Π_{g≠j} F_g((E[Z_g]/E[Z_j]) z) · f_j(z):
/// the subset expansion of the CDF product, partial-fraction decomposed
/// against the poles of f_j, integrated term by term against e^{-Dz}.
/// Evaluation uses the scaled exponential integral e^x E1(x) so each term
/// carries a single e^{-Dz} envelope.
class Antiderivative {
  public:
    struct Evaluation {
        double value;
        double condition;  ///< 1 + Σ|term|, the loss scale of the alternating sum
    };

    /// Throws IllConditionedError when the condition exceeds the limit.
    Evaluation evaluate(double z) const;
    double operator()(double z) const { return evaluate(z).value; }

    /// ∫_0^∞ of the integrand, i.e. the scheduling probability: the
    /// primitive tends to 1 at infinity, so this is 1 - value(0).
    double total_mass() const { return 1.0 - evaluate(0.0).value; }

    std::size_t term_count() const { return terms_.size(); }

    friend Antiderivative build_antiderivative(std::size_t j, const CellPopulation& pop, int rb,
                                               const AnalyticConfig& cfg);

  private:
    struct Term {
        double coeff;  ///< (-1)^k Π U(ĉ) · W_l · U(c_t)
        double a;      ///< pole from the scaled other-terminal CDFs
        double b;      ///< pole of the own PDF
        double decay;  ///< D = Σ ĉ0 + c0
    };

    SinrDistribution own_;
    double own_c0_ = 0.0;
    std::vector<Term> terms_;
    double escalate_condition_ = 1e8;
    double condition_limit_ = 1e12;
};

/// Materializes the expansion for terminal j on resource block rb.
/// Requires every distribution in the population to be exact-form with a
/// usable partial-fraction decomposition; throws ComplexityError when the
/// term count exceeds cfg.term_cap and IllConditionedError on coincident
/// poles across terminals.
Antiderivative build_antiderivative(std::size_t j, const CellPopulation& pop, int rb,
                                    const AnalyticConfig& cfg = {});

/// Per-terminal rate vectors; entries with a nonempty error string carry
/// NaN rates. quadrature_fallback marks terminals whose closed form was
/// abandoned for the quadrature path.
struct RateResult {
    std::vector<double> rate_bps;
    std::vector<bool> quadrature_fallback;
    std::vector<std::string> error;

    bool all_ok() const;
};

/// Expected throughput under per-resource-block MCS selection
/// (relaxed constraint): closed form with quadrature oracle/fallback.
RateResult relaxed_mcs_throughput(const CellPopulation& pop, const McsTable& table,
                                  const AnalyticConfig& cfg = {});

/// P[S_j = 1] on one resource block, by adaptive quadrature.
double scheduling_probability(std::size_t j, const CellPopulation& pop, int rb,
                              const AnalyticConfig& cfg = {});

/// Conditional law of Z_j given the terminal wins the block.
double scheduled_sinr_pdf(std::size_t j, const CellPopulation& pop, int rb, double z,
                          const AnalyticConfig& cfg = {});
double scheduled_sinr_cdf(std::size_t j, const CellPopulation& pop, int rb, double z,
                          const AnalyticConfig& cfg = {});

/// Expected throughput under the common-MCS-per-transport-block rule:
/// binomial mixture over co-scheduled set sizes, minimum order statistic
/// of the scheduled SINR law per set. The direct path evaluates the
/// minimum's interval mass as survival-power differences; the _binomial
/// variant re-derives it through the alternating expansion of
/// (1-F)^{n-1} and must agree with the direct path.
/// Requires homogeneous per-RB transmit power per terminal.
RateResult unique_mcs_throughput(const CellPopulation& pop, const McsTable& table,
                                 const AnalyticConfig& cfg = {});
RateResult unique_mcs_throughput_binomial(const CellPopulation& pop, const McsTable& table,
                                          const AnalyticConfig& cfg = {});

/// Ultra-dense closed forms: SINR exponential per terminal, scheduling
/// symmetric. Rates depend only on the terminal's own mean and the
/// terminal count.
std::vector<double> ultra_dense_relaxed_throughput(const std::vector<double>& mean_sinrs,
                                                   int terminal_count, int num_rb, double tti_s,
                                                   const McsTable& table);
double ultra_dense_unique_mcs_throughput(double mean_sinr, int terminal_count, int num_rb,
                                         double tti_s, const McsTable& table);

/// Scheduled-SINR gain over a channel-agnostic scheduler,
/// G = Σ_{k=0}^{J-1} C(J-1,k) (-1)^k J/(k+1)^2; depends only on the
/// terminal count. Evaluated exactly in integer arithmetic for J <= 42.
double pfs_sinr_gain(int terminal_count);

/// E[Z | scheduled] in the ultra-dense limit: mean SINR times the gain.
double scheduled_mean_dense(double p0, double total_interference, double n0, int terminal_count);

}  // namespace pfs
