// SPDX-License-Identifier: Apache-2.0
#include "pfs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace pfs::num {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr long double kEulerGammaLd = 0.57721566490153286061L;

void require_positive_finite(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::domain_error("exp_integral_e1: argument must be positive and finite");
    }
}

// Modified Lentz evaluation of the continued fraction for e^x E1(x).
// Converges fast for x >~ 0.3; by construction returns the scaled value.
template <typename T>
T e1_cf_scaled(T x) {
    const T fpmin = std::numeric_limits<T>::min() / std::numeric_limits<T>::epsilon();
    T b = x + T(1);
    T c = T(1) / fpmin;
    T d = T(1) / b;
    T h = d;
    for (int i = 1; i <= 1000; ++i) {
        const T a = T(-i) * T(i);
        b += T(2);
        d = a * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + a / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = T(1) / d;
        const T del = d * c;
        h *= del;
        if (std::abs(del - T(1)) <= std::numeric_limits<T>::epsilon()) {
            return h;
        }
    }
    throw ConvergenceError("exp_integral_e1: continued fraction failed to converge",
                           static_cast<double>(h), std::numeric_limits<double>::infinity());
}

template <typename T>
T e1_series_impl(T x) {
    T sum = -T(std::is_same_v<T, long double> ? kEulerGammaLd : kEulerGamma) - std::log(x);
    T u = T(1);
    for (int k = 1; k <= 400; ++k) {
        u *= x / T(k);
        const T term = (k % 2 == 1 ? u : -u) / T(k);
        sum += term;
        if (std::abs(term) <= std::numeric_limits<T>::epsilon() * std::abs(sum)) {
            return sum;
        }
    }
    throw ConvergenceError("exp_integral_e1: series failed to converge",
                           static_cast<double>(sum), std::numeric_limits<double>::infinity());
}

}  // namespace

double e1_series(double x) {
    require_positive_finite(x);
    return e1_series_impl(x);
}

double e1_continued_fraction(double x) {
    require_positive_finite(x);
    return e1_cf_scaled(x) * std::exp(-x);
}

double exp_integral_e1(double x) {
    require_positive_finite(x);
    return x <= 1.0 ? e1_series_impl(x) : e1_cf_scaled(x) * std::exp(-x);
}

double exp_e1_scaled(double x) {
    require_positive_finite(x);
    return x <= 1.0 ? std::exp(x) * e1_series_impl(x) : e1_cf_scaled(x);
}

long double exp_e1_scaled_ld(long double x) {
    if (!std::isfinite(static_cast<double>(x)) || x <= 0.0L) {
        throw std::domain_error("exp_e1_scaled_ld: argument must be positive and finite");
    }
    return x <= 1.0L ? std::exp(x) * e1_series_impl(x) : e1_cf_scaled(x);
}

namespace {

struct Panel {
    double a, b;
    double integral;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& lhs, const Panel& rhs) const { return lhs.error < rhs.error; }
};

// 15-point Kronrod extension of the 7-point Gauss rule, with the QUADPACK
// error estimate based on resasc.
Panel gk15(const std::function<double(double)>& f, double a, double b) {
    static const double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                  0.741531185599394, 0.586087235467691, 0.405845151377397,
                                  0.207784955007898, 0.0};
    static const double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                  0.140653259715525, 0.169004726639267, 0.190350578064785,
                                  0.204432940075298, 0.209482141084728};
    static const double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                 0.417959183673469};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv1[7], fv2[7];
    const double fc = f(center);
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double fsum = fv1[j] + fv2[j];
        resk += wgk[j] * fsum;
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) {
            resg += wg[(j - 1) / 2] * fsum;
        }
    }
    const double mean = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }
    resasc *= std::abs(half);
    resabs *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(err, 50.0 * eps * resabs);
    }
    return {a, b, resk * half, err};
}

double adaptive_finite(const std::function<double(double)>& f, double a, double b,
                       const QuadratureConfig& cfg) {
    if (a == b) return 0.0;

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
    Panel first = gk15(f, a, b);
    double total = first.integral;
    double total_err = first.error;
    queue.push(first);

    int splits = 0;
    while (true) {
        if (!std::isfinite(total)) {
            throw ConvergenceError("integrate: non-finite integrand encountered", total,
                                   std::numeric_limits<double>::infinity());
        }
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (total_err <= tol) return total;
        if (splits >= cfg.max_subdivisions) {
            throw ConvergenceError("integrate: subdivision budget exhausted", total, total_err);
        }
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; accept its estimate as-is.
            throw ConvergenceError("integrate: interval below floating-point resolution", total,
                                   total_err);
        }
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
    }
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
        throw std::invalid_argument("integrate: tolerances must be positive");
    }
    if (cfg.max_subdivisions < 1) {
        throw std::invalid_argument("integrate: max_subdivisions must be >= 1");
    }
    if (std::isnan(a) || std::isnan(b)) {
        throw std::invalid_argument("integrate: NaN integration limit");
    }
    if (!(a <= b)) {
        throw std::invalid_argument("integrate: require a <= b");
    }

    if (std::isinf(b)) {
        if (cfg.tail == QuadratureConfig::TailTransform::truncate_at) {
            if (!(cfg.truncate_z > a)) {
                throw std::invalid_argument("integrate: truncate_z must exceed the lower limit");
            }
            return adaptive_finite(f, a, cfg.truncate_z, cfg);
        }
        // u = e^{-z}: the Kronrod nodes are interior, so u = 0 is never touched.
        const double upper = std::exp(-a);
        auto transformed = [&f](double u) { return f(-std::log(u)) / u; };
        return adaptive_finite(transformed, 0.0, upper, cfg);
    }
    return adaptive_finite(f, a, b, cfg);
}

SumResult compensated_sum(std::span<const double> terms) {
    double sum = 0.0;
    double comp = 0.0;
    double abs_sum = 0.0;
    for (double v : terms) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        abs_sum += std::abs(v);
    }
    const double value = sum + comp;
    double condition;
    if (value == 0.0) {
        condition = abs_sum == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
        condition = abs_sum / std::abs(value);
    }
    return {value, condition};
}

}  // namespace pfs::num
