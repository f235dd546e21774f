#include "escom/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace escom {

ScenarioId scenario_from_string(const std::string& s) {
    if (s == "estimate_fixed_payload") return ScenarioId::EstimateFixedPayload;
    if (s == "transport_no_esc") return ScenarioId::TransportNoEsc;
    if (s == "transport_with_esc") return ScenarioId::TransportWithEsc;
    if (s == "custom") return ScenarioId::Custom;
    throw ConfigError("unknown scenario: " + s);
}

std::string to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::EstimateFixedPayload: return "estimate_fixed_payload";
        case ScenarioId::TransportNoEsc: return "transport_no_esc";
        case ScenarioId::TransportWithEsc: return "transport_with_esc";
        case ScenarioId::Custom: return "custom";
    }
    return "custom";
}

ScenarioConfig default_config() {
    ScenarioConfig cfg;
    // Empty-vehicle CoM back-solved so payload.mass at payload.attach_position
    // lands the composite CoM on the reference value.
    const Vec3 com_composite(0.0175, 0.0085, -0.0430);
    const double m_v = 2.405, m_p = 0.2;
    const Vec3 attach(0.184, 0.0, -0.121);
    cfg.vehicle.com_true = ((m_v + m_p) * com_composite - m_p * attach) / m_v;
    cfg.mass_nominal = cfg.vehicle.mass;
    cfg.estimator.inertia_est = cfg.vehicle.inertia;
    return cfg;
}

void set_scenario(ScenarioConfig& cfg, ScenarioId id) {
    cfg.scenario = id;
    cfg.estimator_enabled = id != ScenarioId::TransportNoEsc;
}

namespace {

double to_double(const std::string& s) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw ConfigError("trailing characters in number: " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a number: " + s);
    }
}

int to_int(const std::string& s) {
    const double v = to_double(s);
    if (v != std::floor(v)) throw ConfigError("not an integer: " + s);
    return static_cast<int>(v);
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "on") return true;
    if (s == "false" || s == "0" || s == "off") return false;
    throw ConfigError("not a boolean: " + s);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"schema_version", [](ScenarioConfig& c, const std::string& v) { c.schema_version = to_int(v); }},
        {"scenario", [](ScenarioConfig& c, const std::string& v) { set_scenario(c, scenario_from_string(v)); }},
        {"duration", [](ScenarioConfig& c, const std::string& v) { c.duration = to_double(v); }},
        {"seed", [](ScenarioConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_double(v)); }},
        {"rates.inner_hz", [](ScenarioConfig& c, const std::string& v) { c.rates.inner_hz = to_int(v); }},
        {"rates.outer_hz", [](ScenarioConfig& c, const std::string& v) { c.rates.outer_hz = to_int(v); }},
        {"rates.estimator_hz", [](ScenarioConfig& c, const std::string& v) { c.rates.estimator_hz = to_int(v); }},
        {"rates.log_hz", [](ScenarioConfig& c, const std::string& v) { c.rates.log_hz = to_int(v); }},
        {"vehicle.mass", [](ScenarioConfig& c, const std::string& v) { c.vehicle.mass = to_double(v); }},
        {"vehicle.inertia_xx", [](ScenarioConfig& c, const std::string& v) { c.vehicle.inertia(0, 0) = to_double(v); }},
        {"vehicle.inertia_yy", [](ScenarioConfig& c, const std::string& v) { c.vehicle.inertia(1, 1) = to_double(v); }},
        {"vehicle.inertia_zz", [](ScenarioConfig& c, const std::string& v) { c.vehicle.inertia(2, 2) = to_double(v); }},
        {"vehicle.arm_length_r", [](ScenarioConfig& c, const std::string& v) { c.vehicle.arm_length_r = to_double(v); }},
        {"vehicle.servo_offset_l", [](ScenarioConfig& c, const std::string& v) { c.vehicle.servo_offset_l = to_double(v); }},
        {"vehicle.yaw_thrust_ratio_xi", [](ScenarioConfig& c, const std::string& v) { c.vehicle.yaw_thrust_ratio_xi = to_double(v); }},
        {"vehicle.com_x", [](ScenarioConfig& c, const std::string& v) { c.vehicle.com_true(0) = to_double(v); }},
        {"vehicle.com_y", [](ScenarioConfig& c, const std::string& v) { c.vehicle.com_true(1) = to_double(v); }},
        {"vehicle.com_z", [](ScenarioConfig& c, const std::string& v) { c.vehicle.com_true(2) = to_double(v); }},
        {"vehicle.gravity", [](ScenarioConfig& c, const std::string& v) { c.vehicle.gravity_g = to_double(v); }},
        {"vehicle.servo_angle_limit", [](ScenarioConfig& c, const std::string& v) { c.vehicle.servo_angle_limit = to_double(v); }},
        {"vehicle.thrust_min", [](ScenarioConfig& c, const std::string& v) { c.vehicle.thrust_min = to_double(v); }},
        {"vehicle.thrust_max", [](ScenarioConfig& c, const std::string& v) { c.vehicle.thrust_max = to_double(v); }},
        {"actuators.tau_rotor", [](ScenarioConfig& c, const std::string& v) { c.actuators.tau_rotor = to_double(v); }},
        {"actuators.tau_servo", [](ScenarioConfig& c, const std::string& v) { c.actuators.tau_servo = to_double(v); }},
        {"actuators.servo_rate_max", [](ScenarioConfig& c, const std::string& v) { c.actuators.servo_rate_max = to_double(v); }},
        {"payload.enabled", [](ScenarioConfig& c, const std::string& v) { c.payload_enabled = to_bool(v); }},
        {"payload.mass", [](ScenarioConfig& c, const std::string& v) { c.payload.mass = to_double(v); }},
        {"payload.x", [](ScenarioConfig& c, const std::string& v) { c.payload.attach_position(0) = to_double(v); }},
        {"payload.y", [](ScenarioConfig& c, const std::string& v) { c.payload.attach_position(1) = to_double(v); }},
        {"payload.z", [](ScenarioConfig& c, const std::string& v) { c.payload.attach_position(2) = to_double(v); }},
        {"reciprocation.axis", [](ScenarioConfig& c, const std::string& v) {
             if (v == "x") c.reciprocation.axis = 0;
             else if (v == "y") c.reciprocation.axis = 1;
             else if (v == "z") c.reciprocation.axis = 2;
             else throw ConfigError("reciprocation.axis must be x, y or z");
         }},
        {"reciprocation.amplitude", [](ScenarioConfig& c, const std::string& v) { c.reciprocation.amplitude = to_double(v); }},
        {"reciprocation.half_period", [](ScenarioConfig& c, const std::string& v) { c.reciprocation.half_period = to_double(v); }},
        {"estimator.enabled", [](ScenarioConfig& c, const std::string& v) { c.estimator_enabled = to_bool(v); }},
        {"estimator.freeze_after_convergence", [](ScenarioConfig& c, const std::string& v) { c.estimator_freeze_after_convergence = to_bool(v); }},
        {"estimator.init", [](ScenarioConfig& c, const std::string& v) {
             if (v == "empty") c.estimator_init = EstimatorInit::Empty;
             else if (v == "truth") c.estimator_init = EstimatorInit::Truth;
             else if (v == "custom") c.estimator_init = EstimatorInit::Custom;
             else throw ConfigError("estimator.init must be empty, truth or custom");
         }},
        {"estimator.init_x", [](ScenarioConfig& c, const std::string& v) { c.estimator_init_custom(0) = to_double(v); }},
        {"estimator.init_y", [](ScenarioConfig& c, const std::string& v) { c.estimator_init_custom(1) = to_double(v); }},
        {"estimator.init_z", [](ScenarioConfig& c, const std::string& v) { c.estimator_init_custom(2) = to_double(v); }},
        {"estimator.a1", [](ScenarioConfig& c, const std::string& v) { c.estimator.dither.a1 = to_double(v); }},
        {"estimator.a2", [](ScenarioConfig& c, const std::string& v) { c.estimator.dither.a2 = to_double(v); }},
        {"estimator.w1", [](ScenarioConfig& c, const std::string& v) { c.estimator.dither.w1 = to_double(v); }},
        {"estimator.w2", [](ScenarioConfig& c, const std::string& v) { c.estimator.dither.w2 = to_double(v); }},
        {"estimator.q_factor", [](ScenarioConfig& c, const std::string& v) { c.estimator.q_factor = to_double(v); }},
        {"estimator.g1", [](ScenarioConfig& c, const std::string& v) { c.estimator.g1 = to_double(v); }},
        {"estimator.g2", [](ScenarioConfig& c, const std::string& v) { c.estimator.g2 = to_double(v); }},
        {"estimator.w_lowpass", [](ScenarioConfig& c, const std::string& v) { c.estimator.w_lowpass = to_double(v); }},
        {"estimator.w_deriv_smooth", [](ScenarioConfig& c, const std::string& v) { c.estimator.w_deriv_smooth = to_double(v); }},
        {"estimator.delta_max", [](ScenarioConfig& c, const std::string& v) { c.estimator.delta_max = to_double(v); }},
        {"estimator.clamp_box", [](ScenarioConfig& c, const std::string& v) { c.estimator.clamp_box = to_double(v); }},
        {"estimator.warmup_periods", [](ScenarioConfig& c, const std::string& v) { c.estimator.warmup_periods = to_double(v); }},
        {"estimator.k3_source", [](ScenarioConfig& c, const std::string& v) {
             if (v == "tau_x") c.estimator.k3_source = K3Source::TauX;
             else if (v == "neg_tau_y") c.estimator.k3_source = K3Source::NegTauY;
             else throw ConfigError("estimator.k3_source must be tau_x or neg_tau_y");
         }},
        {"estimator.inertia_scale", [](ScenarioConfig& c, const std::string& v) { c.inertia_est_scale = to_double(v); }},
        {"gains.pos_p", [](ScenarioConfig& c, const std::string& v) { c.gains.pos_p.setConstant(to_double(v)); }},
        {"gains.pos_i", [](ScenarioConfig& c, const std::string& v) { c.gains.pos_i.setConstant(to_double(v)); }},
        {"gains.pos_d", [](ScenarioConfig& c, const std::string& v) { c.gains.pos_d.setConstant(to_double(v)); }},
        {"gains.att_p_rp", [](ScenarioConfig& c, const std::string& v) { c.gains.att_p(0) = c.gains.att_p(1) = to_double(v); }},
        {"gains.att_d_rp", [](ScenarioConfig& c, const std::string& v) { c.gains.att_d(0) = c.gains.att_d(1) = to_double(v); }},
        {"gains.att_p_yaw", [](ScenarioConfig& c, const std::string& v) { c.gains.att_p(2) = to_double(v); }},
        {"gains.att_d_yaw", [](ScenarioConfig& c, const std::string& v) { c.gains.att_d(2) = to_double(v); }},
        {"gains.integrator_limit", [](ScenarioConfig& c, const std::string& v) { c.gains.integrator_limit.setConstant(to_double(v)); }},
        {"gains.mass_nominal", [](ScenarioConfig& c, const std::string& v) { c.mass_nominal = to_double(v); }},
        {"noise.enabled", [](ScenarioConfig& c, const std::string& v) { c.noise.enabled = to_bool(v); }},
        {"noise.gyro_sigma", [](ScenarioConfig& c, const std::string& v) { c.noise.gyro_sigma = to_double(v); }},
        {"noise.position_sigma", [](ScenarioConfig& c, const std::string& v) { c.noise.position_sigma = to_double(v); }},
        {"noise.velocity_sigma", [](ScenarioConfig& c, const std::string& v) { c.noise.velocity_sigma = to_double(v); }},
        {"noise.attitude_sigma", [](ScenarioConfig& c, const std::string& v) { c.noise.attitude_sigma = to_double(v); }},
        {"noise.servo_sigma", [](ScenarioConfig& c, const std::string& v) { c.noise.servo_sigma = to_double(v); }},
        {"limits.max_tilt", [](ScenarioConfig& c, const std::string& v) { c.bounds.max_tilt = to_double(v); }},
        {"limits.max_position", [](ScenarioConfig& c, const std::string& v) { c.bounds.max_position = to_double(v); }},
        {"allocation.condition_threshold", [](ScenarioConfig& c, const std::string& v) { c.allocation.condition_threshold = to_double(v); }},
        {"allocation.thrust_sum_epsilon", [](ScenarioConfig& c, const std::string& v) { c.allocation.thrust_sum_epsilon = to_double(v); }},
        {"scenario.hover_settle_time", [](ScenarioConfig& c, const std::string& v) { c.hover_settle_time = to_double(v); }},
        {"scenario.estimation_max_time", [](ScenarioConfig& c, const std::string& v) { c.estimation_max_time = to_double(v); }},
        {"scenario.transport_cycles", [](ScenarioConfig& c, const std::string& v) { c.transport_cycles = to_double(v); }},
        {"scenario.convergence_window", [](ScenarioConfig& c, const std::string& v) { c.convergence_window = to_double(v); }},
        {"scenario.convergence_tol", [](ScenarioConfig& c, const std::string& v) { c.convergence_tol = to_double(v); }},
    };
    return table;
}

}  // namespace

KeyValueMap parse_key_values(const std::string& text) {
    KeyValueMap kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        kv[key] = value;
    }
    return kv;
}

KeyValueMap load_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

void apply_overrides(ScenarioConfig& cfg, const KeyValueMap& kv) {
    const auto& table = setters();
    for (const auto& [key, value] : kv) {
        auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown config key: " + key);
        it->second(cfg, value);
    }
}

void ScenarioConfig::validate() const {
    if (schema_version != 1) throw ConfigError("unsupported schema_version");
    if (!(duration > 0.0)) throw ConfigError("duration must be > 0");
    try {
        vehicle.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("vehicle: ") + e.what());
    }
    if (rates.inner_hz <= 0 || rates.outer_hz <= 0 || rates.estimator_hz <= 0 || rates.log_hz <= 0)
        throw ConfigError("rates must be positive");
    if (rates.inner_hz % rates.outer_hz != 0 || rates.inner_hz % rates.estimator_hz != 0 ||
        rates.inner_hz % rates.log_hz != 0)
        throw ConfigError("outer, estimator and log rates must divide the inner rate");
    const double dt = 1.0 / rates.inner_hz;
    if (dt > 0.005) throw ConfigError("inner rate too slow for stable integration (dt > 5 ms)");
    if (payload_enabled) {
        if (payload.mass < 0.0) throw ConfigError("payload.mass must be >= 0");
        const Vec3& p = payload.attach_position;
        if (std::abs(p(0)) > 0.25 || std::abs(p(1)) > 0.25 || p(2) > 0.0 || p(2) < -0.30)
            throw ConfigError("payload attach position outside fuselage top-surface bounds");
    }
    if (estimator_enabled) {
        const DitherConfig& d = estimator.dither;
        const double hover = vehicle.mass * vehicle.gravity_g;
        if (d.a1 > 0.1 * hover || d.a2 > 0.1 * hover)
            throw ConfigError("dither amplitude too large relative to hover thrust");
        const double sep_margin = std::max(d.w1, d.w2) / estimator.q_factor;
        if (std::abs(d.w1 - d.w2) < sep_margin)
            throw ConfigError("dither frequencies too close for band-pass separation");
        const StabilityReport rep = validate_stability(estimator.g1, estimator.g2,
                                                       estimator.w_lowpass, d, estimator.delta_max);
        if (!rep.ok) {
            std::string msg = "estimator stability validation failed:";
            for (const auto& v : rep.violations) msg += " [" + v + "]";
            throw ConfigError(msg);
        }
    }
}

}  // namespace escom
