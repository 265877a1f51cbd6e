// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pfs/baselines.hpp"
#include "pfs/numerics.hpp"
#include "support/oracles.hpp"

using namespace pfs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

McsTable small_table() {
    return McsTable({{0.25, 0.5}, {1.0, 1.0}, {4.0, 2.0}, {16.0, 3.0}});
}

std::vector<std::vector<IanSinr>> tilde_matrix(std::vector<double> values, int num_rb) {
    std::vector<std::vector<IanSinr>> m;
    for (double v : values) m.push_back(std::vector<IanSinr>(num_rb, IanSinr{v}));
    return m;
}

}  // namespace

TEST_CASE("ian_sinr_matrix accumulates interference plus noise") {
    LinkProfile link{2.0, {0.5, 0.3}, 0.2};
    const auto m = ian_sinr_matrix({{link, link}});
    REQUIRE(m.size() == 1);
    REQUIRE(m[0].size() == 2);
    CHECK(m[0][0].tilde_z == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("simple model trivials") {
    const auto table = small_table();
    // Above the top threshold: full top efficiency once per RB, split by J.
    const auto high = simple_throughput(tilde_matrix({100.0}, 5), 1, table, 1e-3);
    CHECK(high[0] == doctest::Approx(5.0 * 14.0 * 12.0 * 3.0 / 1e-3));
    // Below the first threshold: zero.
    const auto low = simple_throughput(tilde_matrix({0.1}, 5), 3, table, 1e-3);
    CHECK(low[0] == 0.0);
    // Halving the terminal count doubles the rate exactly.
    const auto four = simple_throughput(tilde_matrix({2.0}, 5), 4, table, 1e-3);
    const auto two = simple_throughput(tilde_matrix({2.0}, 5), 2, table, 1e-3);
    CHECK(two[0] == doctest::Approx(2.0 * four[0]).epsilon(1e-15));
}

TEST_CASE("IaN model: symmetric users equal the ultra-dense closed form") {
    const auto table = small_table();
    const auto rates = ian_throughput(tilde_matrix({1.5, 1.5, 1.5}, 2), table, 1e-3);
    const auto dense = ultra_dense_relaxed_throughput({1.5, 1.5, 1.5}, 3, 2, 1e-3, table);
    for (int j = 0; j < 3; ++j) {
        CHECK(rates[j] == doctest::Approx(dense[j]).epsilon(1e-9));
    }
}

TEST_CASE("IaN model: single user reduces to the outage-weighted sum") {
    const auto table = small_table();
    const double tilde = 0.8;
    const auto rates = ian_throughput(tilde_matrix({tilde}, 1), table, 1e-3);
    double expected = 0.0;
    const auto& entries = table.entries();
    for (std::size_t m = 0; m < entries.size(); ++m) {
        const double lo = std::exp(-entries[m].threshold / tilde);
        const double hi =
            (m + 1 < entries.size()) ? std::exp(-entries[m + 1].threshold / tilde) : 0.0;
        expected += entries[m].efficiency * (lo - hi);
    }
    expected *= table.payload_scale() / 1e-3;
    CHECK(rates[0] == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("IaN model: heterogeneous instance matches the rate-integral quadrature") {
    const auto table = small_table();
    const std::vector<double> tildes{2.5, 0.6, 1.1};
    const auto rates = ian_throughput(tilde_matrix(tildes, 1), table, 1e-3);
    // Independent oracle: full quadrature of Π F_g(ρ_g z) f_j(z) with
    // exponential laws (scaled CDFs collapse onto the own law).
    for (std::size_t j = 0; j < tildes.size(); ++j) {
        const double lambda = 1.0 / tildes[j];
        auto integrand = [&](double z) {
            const double f = -std::expm1(-lambda * z);
            return std::pow(f, 2) * lambda * std::exp(-lambda * z);
        };
        double oracle = 0.0;
        const auto& entries = table.entries();
        num::QuadratureConfig tail;
        tail.tail = num::QuadratureConfig::TailTransform::truncate_at;
        tail.truncate_z = std::log(1e11) / lambda + 40.0;
        for (std::size_t m = 0; m < entries.size(); ++m) {
            const double hi = (m + 1 < entries.size()) ? entries[m + 1].threshold : kInf;
            oracle += entries[m].efficiency *
                      num::integrate(integrand, entries[m].threshold, hi, tail);
        }
        oracle *= table.payload_scale() / 1e-3;
        CHECK(std::abs(rates[j] - oracle) <= 1e-8 * oracle + 1e-9);
    }
}

TEST_CASE("Gaussian moments: two-level identity") {
    const McsTable table({{1.0, 1.0}, {5.0, 2.0}}, 14, 12);
    const double tilde = 2.0;
    const auto params = gaussian_rate_params({tilde}, table);
    const double expected_mu = 1.0 * (std::exp(-1.0 / tilde) - std::exp(-5.0 / tilde)) +
                               2.0 * std::exp(-5.0 / tilde);
    CHECK(params.mu == doctest::Approx(expected_mu).epsilon(1e-12));
    const double second = 1.0 * (std::exp(-1.0 / tilde) - std::exp(-5.0 / tilde)) +
                          4.0 * std::exp(-5.0 / tilde);
    CHECK(params.sigma ==
          doctest::Approx(std::sqrt(second - expected_mu * expected_mu)).epsilon(1e-12));
}

TEST_CASE("Gaussian model: symmetric users get equal rates") {
    const auto table = small_table();
    const auto rates = gaussian_throughput(tilde_matrix({1.2, 1.2}, 3), table, 1e-3);
    CHECK(rates[0] == doctest::Approx(rates[1]).epsilon(1e-10));
    CHECK(rates[0] > 0.0);
}

TEST_CASE("Gaussian model tracks a Monte-Carlo of its own surrogate") {
    // Draw normal rates, schedule by R/mu, average the winner's rate. The
    // model integrates from z = 0 as printed, i.e. a win only counts while
    // the winner sits at or above its own mean rate; the oracle mirrors
    // that truncation.
    const auto table = small_table();
    const std::vector<double> tildes{2.0, 0.7};
    const auto rates = gaussian_throughput(tilde_matrix(tildes, 1), table, 1e-3);

    std::vector<GaussianRateParams> params;
    for (double t : tildes) params.push_back(gaussian_rate_params({t}, table));
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> normal(0.0, 1.0);
    const long draws = 1'000'000;
    std::vector<double> won(2, 0.0);
    for (long d = 0; d < draws; ++d) {
        double best_priority = -kInf;
        int best = 0;
        double value[2];
        for (int j = 0; j < 2; ++j) {
            value[j] = params[j].mu + params[j].sigma * normal(rng);
            const double priority = value[j] / params[j].mu;
            if (priority > best_priority) {
                best_priority = priority;
                best = j;
            }
        }
        if (value[best] >= params[best].mu) won[best] += value[best];
    }
    for (int j = 0; j < 2; ++j) {
        const double mc_rate = won[j] / draws * table.payload_scale() / 1e-3;
        CHECK(rates[j] == doctest::Approx(mc_rate).epsilon(0.02));
    }
}

TEST_CASE("i.i.d.-priority model: single user equals the unscheduled expectation") {
    LinkProfile link{1.0, {0.4, 0.2}, 0.05};
    auto pop = make_population({build_distribution(link)}, FrameConfig{2, 1e-3, 1000});
    const auto table = small_table();
    const auto rates = iid_priority_throughput(pop, table);
    double expected = 0.0;
    const auto& entries = table.entries();
    const auto& d = pop.terminals[0][0];
    for (std::size_t m = 0; m < entries.size(); ++m) {
        const double hi =
            (m + 1 < entries.size()) ? d.cdf_product(entries[m + 1].threshold) : 1.0;
        expected += entries[m].efficiency * (hi - d.cdf_product(entries[m].threshold));
    }
    expected *= 2.0 * table.payload_scale() / 1e-3;
    CHECK(rates[0] == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("i.i.d.-priority model matches quadrature on an exact two-interferer law") {
    LinkProfile link{1.0, {0.5, 0.25}, 0.05};
    auto pop = make_population(
        {build_distribution(link), build_distribution(link), build_distribution(link)},
        FrameConfig{1, 1e-3, 1000});
    const auto table = small_table();
    const auto rates = iid_priority_throughput(pop, table);
    const auto& d = pop.terminals[0][0];
    auto integrand = [&d](double z) { return std::pow(d.cdf_product(z), 2) * d.pdf_product(z); };
    num::QuadratureConfig tail;
    tail.tail = num::QuadratureConfig::TailTransform::truncate_at;
    tail.truncate_z = std::log(1e11) / d.noise_ratio();
    double oracle = 0.0;
    const auto& entries = table.entries();
    for (std::size_t m = 0; m < entries.size(); ++m) {
        const double hi = (m + 1 < entries.size()) ? entries[m + 1].threshold : kInf;
        oracle += entries[m].efficiency *
                  num::integrate(integrand, entries[m].threshold, hi, tail);
    }
    oracle *= table.payload_scale() / 1e-3;
    CHECK(std::abs(rates[0] - oracle) <= 1e-8 * oracle + 1e-9);
}

TEST_CASE("model coincidence on exponential populations") {
    // Where the baselines' assumptions hold exactly (exponential SINR),
    // IaN, i.i.d. priority and the exact relaxed model agree.
    const auto table = small_table();
    const std::vector<double> means{3.0, 0.9, 1.4};
    std::vector<SinrDistribution> dists;
    for (double m : means) dists.push_back(asymptotic_distribution(m, 0.0, 1.0));
    auto pop = make_population(std::move(dists), FrameConfig{2, 1e-3, 1000});

    const auto exact = relaxed_mcs_throughput(pop, table);
    REQUIRE(exact.all_ok());
    const auto ian = ian_throughput(tilde_matrix(means, 2), table, 1e-3);
    const auto iid = iid_priority_throughput(pop, table);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(std::abs(exact.rate_bps[j] - ian[j]) / ian[j] < 1e-6);
        CHECK(std::abs(iid[j] - ian[j]) / ian[j] < 1e-6);
    }
}

TEST_CASE("unique-MCS IaN baseline") {
    const auto table = small_table();
    // Symmetric users coincide with the ultra-dense unique closed form.
    const auto sym = unique_mcs_ian_throughput(tilde_matrix({1.1, 1.1, 1.1}, 4), table, 1e-3);
    REQUIRE(sym.all_ok());
    const double dense = ultra_dense_unique_mcs_throughput(1.1, 3, 4, 1e-3, table);
    for (int j = 0; j < 3; ++j) {
        CHECK(sym.rate_bps[j] == doctest::Approx(dense).epsilon(1e-4));
    }

    // N=1 equals the IaN relaxed model on one block.
    const auto one_rb = unique_mcs_ian_throughput(tilde_matrix({2.0, 0.5}, 1), table, 1e-3);
    REQUIRE(one_rb.all_ok());
    const auto ian_one = ian_throughput(tilde_matrix({2.0, 0.5}, 1), table, 1e-3);
    for (int j = 0; j < 2; ++j) {
        CHECK(one_rb.rate_bps[j] == doctest::Approx(ian_one[j]).epsilon(1e-6));
    }

    // Minimum penalty: never above the relaxed IaN model.
    const auto uniq = unique_mcs_ian_throughput(tilde_matrix({2.0, 0.5, 1.0}, 6), table, 1e-3);
    const auto ian6 = ian_throughput(tilde_matrix({2.0, 0.5, 1.0}, 6), table, 1e-3);
    REQUIRE(uniq.all_ok());
    for (int j = 0; j < 3; ++j) {
        CHECK(uniq.rate_bps[j] <= ian6[j] * (1.0 + 1e-9));
    }
}

TEST_CASE("baseline rates are nonnegative and bounded by the frame capacity") {
    const auto table = small_table();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> logz(-2.0, 2.0);
    const int num_rb = 3;
    std::vector<double> tildes;
    for (int j = 0; j < 4; ++j) tildes.push_back(std::pow(10.0, logz(rng)));
    const auto m = tilde_matrix(tildes, num_rb);
    const double cap = num_rb * table.payload_scale() * table.max_efficiency() / 1e-3;

    for (const auto& rates :
         {simple_throughput(m, 4, table, 1e-3), ian_throughput(m, table, 1e-3),
          gaussian_throughput(m, table, 1e-3)}) {
        for (double r : rates) {
            CHECK(r >= 0.0);
            CHECK(r <= cap * (1.0 + 1e-9));
        }
    }
}
