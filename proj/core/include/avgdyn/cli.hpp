#pragma once

#include "avgdyn/schedule.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace avgdyn {

/// Config file problem; `field` is the offending key path (e.g. "model.gamma").
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_path, const std::string& msg)
        : std::runtime_error(field_path.empty() ? msg : field_path + ": " + msg),
          field(std::move(field_path)) {}
};

/// Command-line overrides. Precedence for the output directory:
/// --out-dir flag, then AVGDYN_OUT_DIR, then the config file.
struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<long> stride;
    int workers = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// simulate: trajectory CSV + outcome JSON (+ optional analysis artifacts).
int cmd_simulate(const CliOptions& opts);

/// steady-state: absorption report JSON for a stationary system.
int cmd_steady_state(const CliOptions& opts);

/// sweep: curtain grid CSV or transitivity table CSV, resumable per cell.
int cmd_sweep(const CliOptions& opts);

/// walk: Monte Carlo vs analytic absorption comparison JSON.
int cmd_walk(const CliOptions& opts);

/// topology: infinite-graph TopologyReport + theorem-2 residuals JSON.
int cmd_topology(const CliOptions& opts);

}  // namespace avgdyn
