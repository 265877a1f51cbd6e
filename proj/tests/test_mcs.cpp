// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pfs/mcs.hpp"
#include "pfs/numerics.hpp"
#include "pfs/sinr.hpp"

using namespace pfs;

namespace {

McsTable two_level() {
    return McsTable({{1.0, 1.0}, {10.0, 2.0}});
}

}  // namespace

TEST_CASE("step lookup: outage below the first threshold") {
    const auto table = two_level();
    CHECK(table.efficiency(0.0) == 0.0);
    CHECK(table.efficiency(0.999) == 0.0);
}

TEST_CASE("step lookup: intervals are closed on the left") {
    const auto table = two_level();
    CHECK(table.efficiency(1.0) == 1.0);   // z exactly at z_m selects scheme m
    CHECK(table.efficiency(10.0) == 2.0);
    CHECK(table.efficiency(5.0) == 1.0);
    CHECK(table.efficiency(1e9) == 2.0);   // top scheme saturates
    CHECK(table.payload_bits(5.0) == doctest::Approx(14.0 * 12.0 * 1.0));
}

TEST_CASE("step lookup rejects negative SINR") {
    CHECK_THROWS_AS(two_level().efficiency(-0.1), std::domain_error);
}

TEST_CASE("default CQI table and the shipped config file agree") {
    const auto builtin = default_cqi_table();
    CHECK(builtin.levels() == 15);
    CHECK(builtin.entries().front().efficiency == doctest::Approx(0.1523));
    CHECK(builtin.entries().back().efficiency == doctest::Approx(5.5547));
    CHECK(builtin.entries().front().threshold ==
          doctest::Approx(std::pow(10.0, -0.6)).epsilon(1e-12));

    const auto loaded = load_mcs_table_file(std::string(PFS_DATA_DIR) + "/mcs_default.txt");
    REQUIRE(loaded.levels() == builtin.levels());
    for (std::size_t m = 0; m < loaded.levels(); ++m) {
        CHECK(loaded.entries()[m].threshold ==
              doctest::Approx(builtin.entries()[m].threshold).epsilon(1e-12));
        CHECK(loaded.entries()[m].efficiency == builtin.entries()[m].efficiency);
    }
}

TEST_CASE("loader rejects malformed tables, naming the row") {
    {
        std::istringstream rows("0.0 0.6\n-2.0 0.3\n");  // out of order
        CHECK_THROWS_WITH_AS(load_mcs_table(rows), doctest::Contains("row 2"),
                             McsFormatError);
    }
    {
        std::istringstream rows("0.0 0.6\n");  // single row
        CHECK_THROWS_AS(load_mcs_table(rows), McsFormatError);
    }
    {
        std::istringstream rows("0.0 0.6\n0.0 0.7\n");  // duplicate threshold
        CHECK_THROWS_AS(load_mcs_table(rows), McsFormatError);
    }
    {
        std::istringstream rows("0.0 0.6\n2.0 0.5\n");  // efficiency not increasing
        CHECK_THROWS_AS(load_mcs_table(rows), McsFormatError);
    }
    {
        std::istringstream rows("0.0\n");  // missing column
        CHECK_THROWS_AS(load_mcs_table(rows), McsFormatError);
    }
}

TEST_CASE("loader tolerates comments and blank lines") {
    std::istringstream rows("# comment\n\n-6.0 0.15 # inline\n0.0 0.60\n");
    const auto table = load_mcs_table(rows);
    CHECK(table.levels() == 2);
}

TEST_CASE("spectral efficiency is a non-decreasing step function") {
    const auto table = default_cqi_table();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 400.0);
    std::vector<double> zs(400);
    for (auto& z : zs) z = u(rng);
    std::sort(zs.begin(), zs.end());
    double prev = 0.0;
    for (double z : zs) {
        const double c = table.efficiency(z);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("interval masses of any SINR law partition unit probability") {
    const auto table = default_cqi_table();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> logp(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        LinkProfile link;
        link.signal_power = 1.0;
        link.noise_power = std::pow(10.0, logp(rng));
        const int interferers = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < interferers; ++i) {
            link.interferer_powers.push_back(std::pow(10.0, logp(rng)));
        }
        const auto dist = build_distribution(link);

        double total = dist.cdf(table.entries().front().threshold);  // below z_1
        for (std::size_t m = 0; m < table.levels(); ++m) {
            const double hi = (m + 1 < table.levels())
                                  ? dist.cdf(table.entries()[m + 1].threshold)
                                  : 1.0;
            total += hi - dist.cdf(table.entries()[m].threshold);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}
