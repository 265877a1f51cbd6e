// SPDX-License-Identifier: Apache-2.0
#include "pfs/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfs/numerics.hpp"

namespace pfs {

namespace {

constexpr double kSeparationRel = 1e-9;   // roots closer than this (rel.) get perturbed
constexpr double kPerturbStep = 1e-7;     // multiplicative separation step
constexpr double kIdentityTol = 1e-10;    // pointwise acceptance of the decomposition
constexpr double kMeanConditionLimit = 1e8;

void check_z(double z) {
    if (std::isnan(z) || z < 0.0) {
        throw std::domain_error("SINR distribution: z must be >= 0");
    }
}

// Residue weights of Π_i c_i/(c_i+z) = Σ_i U_i/(c_i+z) for distinct roots:
// U_i = (Π_a c_a) · Π_{f≠i} (c_f - c_i)^{-1}, computed in log magnitude so
// large root counts degrade to inf/0 instead of trapping.
std::vector<double> residue_weights(const std::vector<double>& roots) {
    const std::size_t n = roots.size();
    double log_prod = 0.0;
    for (double c : roots) log_prod += std::log(c);

    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        double log_mag = log_prod;
        double sign = 1.0;
        for (std::size_t f = 0; f < n; ++f) {
            if (f == i) continue;
            const double diff = roots[f] - roots[i];
            log_mag -= std::log(std::abs(diff));
            if (diff < 0.0) sign = -sign;
        }
        weights[i] = sign * std::exp(log_mag);
    }
    return weights;
}

// The decomposition is accepted only if Σ U/(c+z) reproduces the product
// Π c/(c+z) pointwise on a fixed geometric grid of 16 probe points.
bool decomposition_valid(const std::vector<double>& roots, const std::vector<double>& weights) {
    double scale = 1.0;
    for (double c : roots) scale *= std::cbrt(c);  // rough geometric mean, overflow-safe
    scale = std::pow(scale, 3.0 / static_cast<double>(roots.size()));
    for (int q = 0; q < 16; ++q) {
        const double z = scale * std::exp2(q - 8);
        double prod = 1.0;
        for (double c : roots) prod *= c / (c + z);
        double sum = 0.0;
        for (std::size_t i = 0; i < roots.size(); ++i) sum += weights[i] / (roots[i] + z);
        if (!std::isfinite(sum) || std::abs(sum - prod) > kIdentityTol) {
            return false;
        }
    }
    return true;
}

}  // namespace

SinrDistribution build_distribution(const LinkProfile& link) {
    if (!(link.signal_power > 0.0) || !std::isfinite(link.signal_power)) {
        throw std::invalid_argument("LinkProfile: signal power must be positive");
    }
    if (link.noise_power < 0.0 || !std::isfinite(link.noise_power)) {
        throw std::invalid_argument("LinkProfile: noise power must be >= 0");
    }
    for (double p : link.interferer_powers) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("LinkProfile: interferer powers must be positive");
        }
    }

    SinrDistribution dist;
    if (link.interferer_powers.empty()) {
        if (!(link.noise_power > 0.0)) {
            throw std::invalid_argument(
                "LinkProfile: noise-limited link requires positive noise power");
        }
        dist.form_ = SinrDistribution::Form::exponential;
        dist.lambda_ = link.noise_power / link.signal_power;
        dist.mean_ = link.signal_power / link.noise_power;
        dist.c0_ = dist.lambda_;
        return dist;
    }

    dist.form_ = SinrDistribution::Form::exact;
    dist.c0_ = link.noise_power / link.signal_power;
    dist.c_.reserve(link.interferer_powers.size());
    for (double p : link.interferer_powers) {
        dist.c_.push_back(link.signal_power / p);
    }
    std::sort(dist.c_.begin(), dist.c_.end());

    // Root separation: walk clusters of near-equal roots and spread them by
    // alternating multiplicative offsets +-1e-7, +-2e-7, ...
    const double sep_tol = kSeparationRel * dist.c_.back();
    for (std::size_t i = 0; i < dist.c_.size();) {
        std::size_t j = i + 1;
        while (j < dist.c_.size() && dist.c_[j] - dist.c_[j - 1] < sep_tol) ++j;
        const std::size_t cluster = j - i;
        if (cluster > 1) {
            dist.perturbed_ = true;
            for (std::size_t m = 0; m < cluster; ++m) {
                const double magnitude = static_cast<double>(m / 2 + 1) * kPerturbStep;
                const double offset = (m % 2 == 0) ? magnitude : -magnitude;
                dist.c_[i + m] *= 1.0 + offset;
            }
        }
        i = j;
    }
    std::sort(dist.c_.begin(), dist.c_.end());
    for (std::size_t i = 1; i < dist.c_.size(); ++i) {
        if (!(dist.c_[i] - dist.c_[i - 1] > 0.0)) {
            throw DegeneracyError("build_distribution: roots coincide beyond separation "
                                  "tolerance after perturbation");
        }
    }

    if (dist.c_.size() == 1) {
        dist.u_ = {dist.c_[0]};
        dist.pf_usable_ = true;
    } else {
        dist.u_ = residue_weights(dist.c_);
        dist.pf_usable_ = decomposition_valid(dist.c_, dist.u_);
        if (!dist.pf_usable_) dist.u_.clear();
    }

    if (dist.c0_ == 0.0) {
        dist.mean_finite_ = false;  // mean() raises on access
        return dist;
    }

    // E[Z] = Σ U_i e^{c_i c0} E1(c_i c0); quadrature of ∫(1-F)dz when the
    // decomposition is unusable or the sum cancels too heavily.
    bool mean_done = false;
    if (dist.pf_usable_) {
        std::vector<double> terms(dist.c_.size());
        for (std::size_t i = 0; i < dist.c_.size(); ++i) {
            terms[i] = dist.u_[i] * num::exp_e1_scaled(dist.c_[i] * dist.c0_);
        }
        const auto sum = num::compensated_sum(terms);
        if (std::isfinite(sum.value) && sum.value > 0.0 && sum.condition < kMeanConditionLimit) {
            dist.mean_ = sum.value;
            mean_done = true;
        }
    }
    if (!mean_done) {
        num::QuadratureConfig cfg;
        cfg.tail = num::QuadratureConfig::TailTransform::truncate_at;
        cfg.truncate_z = std::log(10.0 / cfg.abs_tol) / dist.c0_;
        dist.mean_ = num::integrate(
            [&dist](double z) { return 1.0 - dist.cdf_product(z); }, 0.0,
            std::numeric_limits<double>::infinity(), cfg);
    }
    return dist;
}

SinrDistribution asymptotic_distribution(double p0, double total_interference, double n0) {
    if (!(p0 > 0.0) || !std::isfinite(p0)) {
        throw std::invalid_argument("asymptotic_distribution: p0 must be positive");
    }
    if (total_interference < 0.0 || !std::isfinite(total_interference)) {
        throw std::invalid_argument("asymptotic_distribution: total interference must be >= 0");
    }
    if (!(n0 > 0.0) || !std::isfinite(n0)) {
        throw std::invalid_argument("asymptotic_distribution: n0 must be positive");
    }
    SinrDistribution dist;
    dist.form_ = SinrDistribution::Form::exponential;
    dist.lambda_ = (n0 + total_interference) / p0;
    dist.c0_ = dist.lambda_;
    dist.mean_ = p0 / (n0 + total_interference);
    return dist;
}

double SinrDistribution::mean() const {
    if (!mean_finite_) {
        throw InfiniteMeanError("SinrDistribution: E[Z] diverges for c0 = 0 with interferers");
    }
    return mean_;
}

double mean_sinr(const SinrDistribution& dist) { return dist.mean(); }

double SinrDistribution::cdf_product(double z) const {
    check_z(z);
    if (form_ == Form::exponential) {
        return -std::expm1(-lambda_ * z);
    }
    double tail = std::exp(-z * c0_);
    for (double c : c_) tail *= c / (c + z);
    return 1.0 - tail;
}

double SinrDistribution::cdf(double z) const {
    check_z(z);
    if (form_ == Form::exponential) {
        return -std::expm1(-lambda_ * z);
    }
    if (!pf_usable_) {
        return cdf_product(z);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) sum += u_[i] / (c_[i] + z);
    const double v = 1.0 - sum * std::exp(-z * c0_);
    return std::clamp(v, 0.0, 1.0);
}

double SinrDistribution::pdf_product(double z) const {
    check_z(z);
    if (form_ == Form::exponential) {
        return lambda_ * std::exp(-lambda_ * z);
    }
    double prod = std::exp(-z * c0_);
    double pole_sum = c0_;
    for (double c : c_) {
        prod *= c / (c + z);
        pole_sum += 1.0 / (c + z);
    }
    return prod * pole_sum;
}

double SinrDistribution::pdf(double z) const {
    check_z(z);
    if (form_ == Form::exponential) {
        return lambda_ * std::exp(-lambda_ * z);
    }
    if (!pf_usable_) {
        return pdf_product(z);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const double d = c_[i] + z;
        sum += u_[i] * (1.0 / (d * d) + c0_ / d);
    }
    return std::max(sum * std::exp(-z * c0_), 0.0);
}

}  // namespace pfs
