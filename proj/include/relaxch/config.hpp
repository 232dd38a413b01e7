#pragma once

#include <relaxch/stepper.hpp>
#include <relaxch/studies.hpp>

#include <string>

namespace relaxch {

struct OutputConfig {
    bool snapshots = true;
    int snapshot_every = 10;  // records between phi/sigma snapshots
    bool plots = false;

    bool operator==(const OutputConfig&) const = default;
};

struct Config {
    RunConfig run{};
    StudyConfig study{};
    OutputConfig output{};

    bool operator==(const Config&) const = default;
};

/// Flat "key = value" text with [model], [grid], [time], [initial], [study]
/// and [output] sections. '#' starts a comment. Absent keys keep their
/// defaults; unknown sections or keys raise ConfigError.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Text that parse_config maps back to an equal Config.
std::string serialize_config(const Config& c);

} // namespace relaxch
