#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "escom/allocation.hpp"
#include "escom/com_estimator.hpp"
#include "escom/dynamics.hpp"
#include "escom/flight_control.hpp"
#include "escom/vehicle_model.hpp"

namespace escom {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ScenarioId { EstimateFixedPayload, TransportNoEsc, TransportWithEsc, Custom };

ScenarioId scenario_from_string(const std::string& s);
std::string to_string(ScenarioId id);

struct ScenarioConfig;

/// Sets the scenario id and its implied mode switches (transport_no_esc turns
/// the estimator off). Later explicit overrides can still change them.
void set_scenario(ScenarioConfig& cfg, ScenarioId id);

struct PayloadConfig {
    double mass = 0.2;                        // [kg]
    Vec3 attach_position = Vec3(0.184, 0.0, -0.121);  // [m], body frame
};

struct ReciprocationConfig {
    int axis = 1;            // 0=x, 1=y, 2=z
    double amplitude = 3.0;  // [m], total travel of one stroke
    double half_period = 10.0;  // [s], one-way transit time
};

enum class EstimatorInit { Empty, Truth, Custom };

struct RateConfig {
    int inner_hz = 1000;
    int outer_hz = 250;
    int estimator_hz = 250;
    int log_hz = 250;
};

struct ScenarioConfig {
    int schema_version = 1;
    ScenarioId scenario = ScenarioId::EstimateFixedPayload;
    double duration = 120.0;  // [s]
    std::uint64_t seed = 0;
    RateConfig rates;
    VehicleParams vehicle;    // empty-vehicle parameters; com_true = empty CoM
    ActuatorModel actuators;
    PayloadConfig payload;
    bool payload_enabled = true;
    ReciprocationConfig reciprocation;
    bool estimator_enabled = true;
    bool estimator_freeze_after_convergence = true;
    EstimatorInit estimator_init = EstimatorInit::Empty;
    Vec3 estimator_init_custom = Vec3::Zero();
    double inertia_est_scale = 1.0;  // deliberate J-hat mismatch factor
    EstimatorConfig estimator;
    ControllerGains gains;
    double mass_nominal = 2.405;  // controller gravity-compensation mass
    NoiseConfig noise;
    DivergenceBounds bounds;
    double hover_settle_time = 5.0;        // [s] before transport begins
    double estimation_max_time = 120.0;    // [s], scenario C phase-1 cap
    double transport_cycles = 2.0;         // full reciprocation cycles in B/C
    // Window over which every com_est component must stay within
    // convergence_tol before the run counts as converged. The band-pass
    // envelope (2Q/w) makes the estimate ring for tens of seconds, so a short
    // window would latch onto an overshoot plateau.
    double convergence_window = 20.0;      // [s]
    double convergence_tol = 1e-3;         // [m]
    AllocatorSettings allocation;

    void validate() const;  // throws ConfigError
};

/// Default configuration reproducing the reference experiments: empty-vehicle
/// CoM back-solved so that the 0.2 kg payload at [0.184 0 -0.121] puts the
/// composite CoM at [0.0175 0.0085 -0.0430].
ScenarioConfig default_config();

/// Flat dotted-key map parsed from the config text format.
using KeyValueMap = std::map<std::string, std::string>;

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError on
/// malformed lines.
KeyValueMap parse_key_values(const std::string& text);
KeyValueMap load_key_value_file(const std::string& path);

/// Applies overrides on top of a config. Unknown keys raise ConfigError.
void apply_overrides(ScenarioConfig& cfg, const KeyValueMap& kv);

}  // namespace escom
