#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimome/errors.hpp"

namespace mimome {

// NCSIE: the transmitter only knows the legitimate channel and maximizes its
// capacity. CSIE: full eavesdropper CSI, the search maximizes C_m - C_e.
enum class Scenario { ncsie, csie };

inline std::string scenario_name(Scenario s) { return s == Scenario::ncsie ? "ncsie" : "csie"; }

inline Scenario scenario_from_name(const std::string& name) {
    if (name == "ncsie") return Scenario::ncsie;
    if (name == "csie") return Scenario::csie;
    throw ConfigError("unknown scenario '" + name + "' (expected ncsie or csie)");
}

struct SelectionResult {
    std::vector<int> indices;      // ascending, 1-based
    double objective_bits = 0.0;   // search objective: C_m (NCSIE) or C_m - C_e (CSIE)
    double secrecy_bits = 0.0;     // [objective]^+ as reported
    std::uint64_t visited_nodes = 0;
};

struct SelectOptions {
    bool warm_start = false;    // seed the incumbent with the norm-based subset
    double prune_epsilon = 0.0;
};

}  // namespace mimome
