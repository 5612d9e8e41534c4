#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace lacsum {

struct PresetCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct PresetResult {
    std::string name;
    std::vector<PresetCheck> checks;
    nlohmann::json manifest;
    std::vector<std::string> files;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// known presets: erdos-fortet, clt-pow2, theoremA-scan, theoremB-blowup,
// martingale-diag
nlohmann::json default_preset_config(const std::string& name);

// Runs the preset and writes its CSV/JSON artifacts plus a manifest under
// config["out_dir"]. The seed must be set in the config; it is never
// defaulted silently.
PresetResult run_preset(const std::string& name, nlohmann::json config);

}  // namespace lacsum
