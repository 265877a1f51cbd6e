// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfs/analytic.hpp"
#include "pfs/sinr.hpp"

namespace pfs {

/// Raised on schema violations; the message names the offending field.
class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct BaseStation {
    std::string id;
    double x = 0.0;
    double y = 0.0;
    double tx_power_per_rb_w = 0.8;
    enum class Role { serving, interferer };
    Role role = Role::serving;
    double shadow_db = 0.0;  ///< constant per-link shadowing offset of this station
};

struct Terminal {
    std::string id;
    double x = 0.0;
    double y = 0.0;
    std::string serving_bs;
};

struct ScenarioFrame {
    int num_rb = 25;
    int symbols = 14;      ///< N_S
    int subcarriers = 12;  ///< N_C
    double tti_s = 1e-3;
    int window = 1000;
};

/// A deployment: geometry + pathloss parameters, or an explicit received
/// power matrix. Interference at a terminal comes from every base station
/// other than its serving one.
struct CellScenario {
    enum class PathlossMode { log_distance, explicit_matrix };

    std::vector<BaseStation> base_stations;
    std::vector<Terminal> terminals;
    PathlossMode mode = PathlossMode::log_distance;

    // log_distance: rx = tx * 10^((-ref_loss_db - 10 e log10(d) + shadow_db)/10), d >= 1 m
    double ref_loss_db = 30.0;
    double exponent = 3.5;

    // explicit_matrix: rows per terminal, serving power first, then interferers [W]
    std::vector<std::vector<double>> powers_w;

    double noise_power_w = 5.7e-15;
    ScenarioFrame frame;
};

CellScenario load_scenario(std::istream& source);
CellScenario load_scenario_file(const std::string& path);
void save_scenario(const CellScenario& scenario, std::ostream& out);

/// Received-power matrix, one LinkProfile per (terminal, resource block);
/// powers are flat across blocks.
std::vector<std::vector<LinkProfile>> compute_link_profiles(const CellScenario& scenario);

/// Exact SINR laws for every link in the scenario.
CellPopulation build_population(const CellScenario& scenario);

struct DropParams {
    double cell_radius_m = 250.0;
    int terminal_count = 10;
    int interferer_count = 2;
    double interferer_ring_radius_m = 500.0;
    std::uint64_t seed = 1;
};

/// Seeded uniform-in-disk terminal drop around a central serving station,
/// interferers equally spaced on a ring.
CellScenario generate_drop(const DropParams& params);

}  // namespace pfs
