// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

namespace pfs {

/// Average received powers of one downlink, per resource block.
struct LinkProfile {
    double signal_power = 0.0;               ///< p0 [W]
    std::vector<double> interferer_powers;   ///< p_i [W], may be empty (noise-limited)
    double noise_power = 0.0;                ///< N0 [W]
};

class DegeneracyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InfiniteMeanError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Distribution of Z = p0 X0 / (Σ p_i X_i + N0) with i.i.d. unit-mean
/// exponential fading X. Two representations are kept:
///
///  * product form  F(z) = 1 - Π_i c_i/(c_i+z) · e^{-z c0}, always valid,
///    with c_i = p0/p_i and c0 = N0/p0;
///  * partial-fraction form F(z) = 1 - Σ_i U_i/(c_i+z) · e^{-z c0}, which
///    feeds every closed-form rate expression but requires distinct roots
///    and a well-conditioned decomposition.
///
/// Nearly coincident roots are separated by a small multiplicative
/// perturbation before decomposition; if the decomposed weights fail to
/// reproduce the product form pointwise, partial_fraction_usable() turns
/// false and product-form/quadrature paths take over.
///
/// The noise-limited and ultra-dense cases are represented exactly as an
/// exponential law with rate lambda.
class SinrDistribution {
  public:
    enum class Form { exact, exponential };

    SinrDistribution() = default;  ///< empty placeholder; build via the factories below

    Form form() const { return form_; }
    bool is_exponential() const { return form_ == Form::exponential; }

    /// Exponential rate lambda (exponential form only).
    double rate() const { return lambda_; }

    const std::vector<double>& roots() const { return c_; }          ///< c_i, ascending
    const std::vector<double>& weights() const { return u_; }        ///< U_i
    double noise_ratio() const { return c0_; }                       ///< c0 = N0/p0
    bool partial_fraction_usable() const { return pf_usable_; }
    bool roots_perturbed() const { return perturbed_; }

    /// E[Z]; throws InfiniteMeanError when c0 = 0 with interferers present.
    double mean() const;

    double cdf(double z) const;          ///< partial-fraction route (exact form)
    double cdf_product(double z) const;  ///< product route, always available
    double pdf(double z) const;
    double pdf_product(double z) const;

    friend SinrDistribution build_distribution(const LinkProfile& link);
    friend SinrDistribution asymptotic_distribution(double p0, double total_interference,
                                                    double n0);

  private:
    Form form_ = Form::exact;
    double lambda_ = 0.0;
    std::vector<double> c_;
    std::vector<double> u_;
    double c0_ = 0.0;
    double mean_ = 0.0;
    bool mean_finite_ = true;
    bool pf_usable_ = false;
    bool perturbed_ = false;
};

/// Builds the exact SINR law of a link (exponential law when there are no
/// interferers). Throws DegeneracyError if roots remain coincident after
/// the separation perturbation, std::invalid_argument on bad powers.
SinrDistribution build_distribution(const LinkProfile& link);

/// Ultra-dense / interference-as-noise limit: exponential with rate
/// (n0 + P)/p0, i.e. mean p0/(n0 + P).
SinrDistribution asymptotic_distribution(double p0, double total_interference, double n0);

/// E[Z] of a distribution (same value as dist.mean()).
double mean_sinr(const SinrDistribution& dist);

}  // namespace pfs
