#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqsel/design.hpp"
#include "seqsel/simulate.hpp"
#include "seqsel/tune.hpp"

namespace seqsel {

// Provenance block stamped into every output artifact.
struct Meta {
    std::string version;
    std::string config_hash;  // 16 hex digits of the config text
    std::uint64_t seed = 0;
    bool has_seed = false;
};

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);

struct SimulationSettings {
    long reps = 100000;
    std::uint64_t seed = 20260822ULL;
    Condition condition = Condition::mixed;
};

struct CompareSettings {
    std::vector<std::pair<double, double>> targets;  // (alpha, beta) per row
    double offline_step = 0.025;
};

// Parsed run configuration. Sensor order in the file fixes bank positions;
// cost surcharges and usage limits are keyed by sensor id in the file and
// validated against the bank here.
struct RunConfig {
    std::vector<SensorModel> sensors;
    Priors priors;
    int grid_size = 8001;
    int quad_nodes = 96;
    int horizon = 200;
    DesignMode mode = DesignMode::infinite;
    std::optional<CostParams> costs;
    std::optional<DesignTargets> targets;
    TunerConfig tuner;
    SimulationSettings sim;
    CompareSettings compare;
    std::string hash;  // fnv1a64 of the raw config text, hex
};

RunConfig parse_config(const std::string& text);  // SchemaError on bad input
RunConfig load_config(const std::string& path);   // IoError on unreadable file

std::string policy_to_string(const Policy& policy, const Meta& meta);
Policy policy_from_string(const std::string& text);
void save_policy(const std::string& path, const Policy& policy, const Meta& meta);
Policy load_policy(const std::string& path);

std::string report_to_string(const SimulationReport& report,
                             const std::vector<SensorModel>& bank, const Meta& meta);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// CSV emitters; every file starts with a `# version=... config_hash=... seed=...`
// comment line.
void write_boundaries_csv(const std::string& path, const Policy& policy, const Meta& meta);
void write_selection_csv(const std::string& path, const Policy& policy, const Meta& meta);
void write_value_table_csv(const std::string& path, const ValueTable& values,
                           const BeliefGrid& grid, const Meta& meta);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const Meta& meta);

// Enum spellings shared by configs, outputs, and CLI flags.
std::string condition_name(Condition c);
Condition condition_from_name(const std::string& name);
std::string mode_name(DesignMode m);
DesignMode mode_from_name(const std::string& name);

}  // namespace seqsel
