#ifndef PDR_CONFIG_HPP
#define PDR_CONFIG_HPP

#include "pdr/pipeline.hpp"
#include "pdr/synth.hpp"

#include <optional>
#include <string>

namespace pdr {

struct SimulateConfig {
    double rate_hz = 100.0;
    double lead_in_s = 2.0;
    double lead_out_s = 2.0;
    PathSpec path;
    GaitSpec gait;
    SensorErrorSpec errors;
    MagEnvSpec mag_env;
};

/// Declarative run configuration. Every key is optional with a documented
/// default; unknown keys are rejected. Angles are degrees in the file and
/// radians in memory.
struct RunConfig {
    VariantConfig variant;
    std::optional<SimulateConfig> simulate;
    std::optional<double> total_distance;

    /// Route length for the metrics denominator: the explicit value when
    /// given, otherwise the simulate path length.
    double resolve_total_distance() const;
};

RunConfig parse_run_config_string(const std::string& json_text,
                                  const std::string& origin = "<string>");
RunConfig load_run_config(const std::string& path);

}  // namespace pdr

#endif  // PDR_CONFIG_HPP
