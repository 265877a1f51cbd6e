// SPDX-License-Identifier: Apache-2.0
#include "pfs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

namespace pfs {

namespace {

using nlohmann::json;

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw ScenarioError(where + "." + key + ": missing or non-numeric");
    }
    return obj[key].get<double>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw ScenarioError(where + "." + key + ": missing or not a string");
    }
    return obj[key].get<std::string>();
}

}  // namespace

CellScenario load_scenario(std::istream& source) {
    json root;
    try {
        root = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario JSON parse error: ") + e.what());
    }

    if (!root.contains("format_version") || !root["format_version"].is_number_integer() ||
        root["format_version"].get<int>() != 1) {
        throw ScenarioError("format_version: missing or unsupported (expected 1)");
    }

    CellScenario scn;
    scn.noise_power_w = require_number(root, "noise_power_w", "scenario");
    if (!(scn.noise_power_w > 0.0)) {
        throw ScenarioError("noise_power_w: must be positive");
    }

    if (root.contains("frame")) {
        const json& f = root["frame"];
        scn.frame.num_rb = static_cast<int>(require_number(f, "num_rb", "frame"));
        scn.frame.symbols = static_cast<int>(require_number(f, "symbols", "frame"));
        scn.frame.subcarriers = static_cast<int>(require_number(f, "subcarriers", "frame"));
        scn.frame.tti_s = require_number(f, "tti_s", "frame");
        scn.frame.window = static_cast<int>(require_number(f, "window", "frame"));
        if (scn.frame.num_rb < 1) throw ScenarioError("frame.num_rb: must be >= 1");
        if (!(scn.frame.tti_s > 0.0)) throw ScenarioError("frame.tti_s: must be positive");
        if (scn.frame.symbols < 1 || scn.frame.subcarriers < 1) {
            throw ScenarioError("frame.symbols/subcarriers: must be >= 1");
        }
        if (scn.frame.window < 1) throw ScenarioError("frame.window: must be >= 1");
    }

    if (!root.contains("pathloss") || !root["pathloss"].is_object()) {
        throw ScenarioError("pathloss: missing object");
    }
    const json& pl = root["pathloss"];
    const std::string model = require_string(pl, "model", "pathloss");
    if (model == "log_distance") {
        scn.mode = CellScenario::PathlossMode::log_distance;
        scn.ref_loss_db = require_number(pl, "ref_loss_db", "pathloss");
        scn.exponent = require_number(pl, "exponent", "pathloss");
        if (!(scn.exponent > 0.0)) throw ScenarioError("pathloss.exponent: must be positive");
    } else if (model == "explicit") {
        scn.mode = CellScenario::PathlossMode::explicit_matrix;
        if (!pl.contains("powers_w") || !pl["powers_w"].is_array()) {
            throw ScenarioError("pathloss.powers_w: missing array");
        }
        for (std::size_t r = 0; r < pl["powers_w"].size(); ++r) {
            const json& row = pl["powers_w"][r];
            if (!row.is_array() || row.empty()) {
                throw ScenarioError("pathloss.powers_w[" + std::to_string(r) +
                                    "]: must be a non-empty array");
            }
            std::vector<double> vals;
            for (const auto& v : row) {
                if (!v.is_number() || !(v.get<double>() > 0.0)) {
                    throw ScenarioError("pathloss.powers_w[" + std::to_string(r) +
                                        "]: powers must be positive numbers");
                }
                vals.push_back(v.get<double>());
            }
            scn.powers_w.push_back(std::move(vals));
        }
    } else {
        throw ScenarioError("pathloss.model: expected 'log_distance' or 'explicit'");
    }

    if (root.contains("base_stations")) {
        for (std::size_t i = 0; i < root["base_stations"].size(); ++i) {
            const json& b = root["base_stations"][i];
            const std::string where = "base_stations[" + std::to_string(i) + "]";
            BaseStation bs;
            bs.id = require_string(b, "id", where);
            bs.x = require_number(b, "x", where);
            bs.y = require_number(b, "y", where);
            bs.tx_power_per_rb_w = require_number(b, "tx_power_per_rb_w", where);
            if (!(bs.tx_power_per_rb_w > 0.0)) {
                throw ScenarioError(where + ".tx_power_per_rb_w: must be positive");
            }
            const std::string role = require_string(b, "role", where);
            if (role == "serving") {
                bs.role = BaseStation::Role::serving;
            } else if (role == "interferer") {
                bs.role = BaseStation::Role::interferer;
            } else {
                throw ScenarioError(where + ".role: expected 'serving' or 'interferer'");
            }
            if (b.contains("shadow_db")) bs.shadow_db = require_number(b, "shadow_db", where);
            scn.base_stations.push_back(std::move(bs));
        }
    }

    if (!root.contains("terminals") || root["terminals"].empty()) {
        throw ScenarioError("terminals: at least one terminal required");
    }
    for (std::size_t i = 0; i < root["terminals"].size(); ++i) {
        const json& t = root["terminals"][i];
        const std::string where = "terminals[" + std::to_string(i) + "]";
        Terminal term;
        term.id = require_string(t, "id", where);
        term.x = require_number(t, "x", where);
        term.y = require_number(t, "y", where);
        if (scn.mode == CellScenario::PathlossMode::log_distance) {
            term.serving_bs = require_string(t, "serving_bs", where);
            bool found = false;
            for (const auto& bs : scn.base_stations) {
                if (bs.id == term.serving_bs) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw ScenarioError(where + ".serving_bs: unknown base station '" +
                                    term.serving_bs + "'");
            }
        } else if (t.contains("serving_bs")) {
            term.serving_bs = t["serving_bs"].get<std::string>();
        }
        scn.terminals.push_back(std::move(term));
    }

    if (scn.mode == CellScenario::PathlossMode::explicit_matrix &&
        scn.powers_w.size() != scn.terminals.size()) {
        throw ScenarioError("pathloss.powers_w: expected one row per terminal");
    }
    return scn;
}

CellScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open scenario file: " + path);
    }
    return load_scenario(in);
}

void save_scenario(const CellScenario& scn, std::ostream& out) {
    json root;
    root["format_version"] = 1;
    root["noise_power_w"] = scn.noise_power_w;
    root["frame"] = {{"num_rb", scn.frame.num_rb},
                     {"symbols", scn.frame.symbols},
                     {"subcarriers", scn.frame.subcarriers},
                     {"tti_s", scn.frame.tti_s},
                     {"window", scn.frame.window}};
    if (scn.mode == CellScenario::PathlossMode::log_distance) {
        root["pathloss"] = {{"model", "log_distance"},
                            {"ref_loss_db", scn.ref_loss_db},
                            {"exponent", scn.exponent}};
    } else {
        root["pathloss"] = {{"model", "explicit"}, {"powers_w", scn.powers_w}};
    }
    root["base_stations"] = json::array();
    for (const auto& bs : scn.base_stations) {
        root["base_stations"].push_back(
            {{"id", bs.id},
             {"x", bs.x},
             {"y", bs.y},
             {"tx_power_per_rb_w", bs.tx_power_per_rb_w},
             {"role", bs.role == BaseStation::Role::serving ? "serving" : "interferer"},
             {"shadow_db", bs.shadow_db}});
    }
    root["terminals"] = json::array();
    for (const auto& t : scn.terminals) {
        json obj = {{"id", t.id}, {"x", t.x}, {"y", t.y}};
        if (!t.serving_bs.empty()) obj["serving_bs"] = t.serving_bs;
        root["terminals"].push_back(obj);
    }
    out << root.dump(2) << "\n";
}

namespace {

double received_power(const CellScenario& scn, const BaseStation& bs, const Terminal& t) {
    const double dx = bs.x - t.x;
    const double dy = bs.y - t.y;
    const double d = std::max(std::sqrt(dx * dx + dy * dy), 1.0);  // 1 m clamp
    const double loss_db = -scn.ref_loss_db - 10.0 * scn.exponent * std::log10(d) + bs.shadow_db;
    return bs.tx_power_per_rb_w * std::pow(10.0, loss_db / 10.0);
}

}  // namespace

std::vector<std::vector<LinkProfile>> compute_link_profiles(const CellScenario& scn) {
    std::vector<std::vector<LinkProfile>> links;
    links.reserve(scn.terminals.size());

    for (std::size_t i = 0; i < scn.terminals.size(); ++i) {
        LinkProfile link;
        link.noise_power = scn.noise_power_w;
        if (scn.mode == CellScenario::PathlossMode::explicit_matrix) {
            const auto& row = scn.powers_w[i];
            link.signal_power = row.front();
            link.interferer_powers.assign(row.begin() + 1, row.end());
        } else {
            const Terminal& t = scn.terminals[i];
            const BaseStation* serving = nullptr;
            for (const auto& bs : scn.base_stations) {
                if (bs.id == t.serving_bs) serving = &bs;
            }
            if (serving == nullptr) {
                throw ScenarioError("terminal '" + t.id + "': unknown serving base station");
            }
            link.signal_power = received_power(scn, *serving, t);
            for (const auto& bs : scn.base_stations) {
                if (&bs == serving) continue;
                link.interferer_powers.push_back(received_power(scn, bs, t));
            }
        }
        links.emplace_back(static_cast<std::size_t>(scn.frame.num_rb), link);
    }
    return links;
}

CellPopulation build_population(const CellScenario& scn) {
    const auto links = compute_link_profiles(scn);
    std::vector<SinrDistribution> dists;
    dists.reserve(links.size());
    for (const auto& row : links) dists.push_back(build_distribution(row.front()));
    FrameConfig frame{scn.frame.num_rb, scn.frame.tti_s, scn.frame.window};
    return make_population(std::move(dists), frame);
}

CellScenario generate_drop(const DropParams& params) {
    if (params.terminal_count < 1 || params.interferer_count < 0) {
        throw std::invalid_argument("generate_drop: invalid counts");
    }
    if (!(params.cell_radius_m > 0.0) || !(params.interferer_ring_radius_m > 0.0)) {
        throw std::invalid_argument("generate_drop: radii must be positive");
    }

    std::mt19937_64 rng(params.seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    CellScenario scn;
    scn.base_stations.push_back({"bs0", 0.0, 0.0, 0.8, BaseStation::Role::serving, 0.0});

    const double two_pi = 2.0 * std::numbers::pi_v<double>;
    const double rotation = uniform() * two_pi;
    for (int i = 0; i < params.interferer_count; ++i) {
        const double angle = rotation + two_pi * i / params.interferer_count;
        scn.base_stations.push_back({"intf" + std::to_string(i),
                                     params.interferer_ring_radius_m * std::cos(angle),
                                     params.interferer_ring_radius_m * std::sin(angle), 0.8,
                                     BaseStation::Role::interferer, 0.0});
    }
    for (int j = 0; j < params.terminal_count; ++j) {
        const double r = params.cell_radius_m * std::sqrt(uniform());
        const double angle = uniform() * two_pi;
        scn.terminals.push_back(
            {"ms" + std::to_string(j), r * std::cos(angle), r * std::sin(angle), "bs0"});
    }
    return scn;
}

}  // namespace pfs
