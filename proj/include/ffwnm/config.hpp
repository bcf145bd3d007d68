#pragma once

#include <string>
#include <vector>

#include "ffwnm/variation.hpp"

namespace ffwnm {

/// Full run description: MC settings plus the characterization context and
/// output location. Built-in defaults cover both technology presets; a
/// config file (see docs/config.md and configs/example.cfg) overrides any
/// subset of them.
struct RunConfig {
    McConfig mc;
    McContext ctx;
    std::vector<double> timing_ages{0.0, 10.0};
    std::string out_dir = "out";
};

RunConfig default_run_config();

/// Parse the sectioned key=value format from text. Unknown sections or
/// keys raise ConfigError so typos surface instead of silently running
/// with defaults.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

/// Desk-scale preset: 100 trials, ages {0, 10}.
void apply_quick_preset(RunConfig& cfg);

} // namespace ffwnm
