// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace pfs::num {

/// Tolerances and budget for the adaptive quadrature engine.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 4000;

    /// How an infinite upper limit is mapped onto a finite interval.
    /// exp_substitution rewrites ∫_a^∞ f(z) dz as ∫_0^{e^-a} f(-ln u)/u du and is
    /// adequate for integrands whose exponential decay sets in before z ≈ 700.
    /// truncate_at integrates [a, truncate_z] directly; callers pick truncate_z
    /// from a known envelope (e.g. where e^{-z c0} drops below abs_tol/10).
    enum class TailTransform { exp_substitution, truncate_at };
    TailTransform tail = TailTransform::exp_substitution;
    double truncate_z = 745.0;
};

/// Thrown when the subdivision budget is exhausted before the requested
/// tolerance is met. Carries the best estimate and its error bound.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& msg, double best_estimate, double error_bound)
        : std::runtime_error(msg), best_(best_estimate), bound_(error_bound) {}
    double best_estimate() const noexcept { return best_; }
    double error_bound() const noexcept { return bound_; }

  private:
    double best_;
    double bound_;
};

/// Exponential integral E1(x) = ∫_x^∞ e^{-t}/t dt for x > 0.
/// Power series below x = 1, continued fraction above; both routes are
/// exposed separately so they can be cross-checked on the overlap region.
double exp_integral_e1(double x);
double e1_series(double x);
double e1_continued_fraction(double x);

/// Scaled form e^x E1(x). Stays finite for large x where E1 itself
/// underflows; this is the quantity the closed-form rate models consume.
double exp_e1_scaled(double x);
long double exp_e1_scaled_ld(long double x);

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// b may be +infinity; the tail is handled per cfg.tail.
/// Throws ConvergenceError when cfg.max_subdivisions is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

/// Neumaier-compensated sum. condition = Σ|t| / |Σt| estimates how much
/// cancellation the plain sum suffered (1 = none, inf = total).
struct SumResult {
    double value;
    double condition;
};
SumResult compensated_sum(std::span<const double> terms);

}  // namespace pfs::num
