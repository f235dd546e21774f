#pragma once

#include <optional>
#include <string>
#include <vector>

#include "escom/allocation.hpp"
#include "escom/config.hpp"

namespace escom {

enum class TerminationCause { Completed, Crashed, Fault };

std::string to_string(TerminationCause c);

struct CompositeBody {
    double mass = 0.0;
    Vec3 com = Vec3::Zero();
    Mat3 inertia = Mat3::Zero();
};

/// Composite mass properties of vehicle plus point-mass payload: weighted-mean
/// CoM and parallel-axis inertia about the composite CoM.
CompositeBody composite_com(const VehicleParams& empty_params, const PayloadConfig& payload);

struct LogRecord {
    double t = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Vec3 euler = Vec3::Zero();
    Vec3 body_rates = Vec3::Zero();
    Vec4 thrust_cmd = Vec4::Zero();
    Vec2 servo_cmd = Vec2::Zero();
    Vec2 servo_actual = Vec2::Zero();
    Vec3 torque_des = Vec3::Zero();
    Vec3 force_des_body = Vec3::Zero();   // includes dither
    Vec3 torque_realized = Vec3::Zero();
    Vec3 force_realized = Vec3::Zero();
    Vec3 gamma = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    Vec3 com_est = Vec3::Zero();
    bool thrust_saturated = false;
    bool servo_saturated = false;
    int phase = 0;  // 0 = hover/estimation, 1 = transport
};

struct RunSummary {
    TerminationCause termination = TerminationCause::Completed;
    double end_time = 0.0;
    std::optional<double> convergence_time;
    Vec3 final_com_est = Vec3::Zero();
    Vec3 com_truth = Vec3::Zero();
    double max_abs_roll = 0.0;            // over the whole run
    double max_abs_pitch = 0.0;
    double transport_max_abs_roll = 0.0;  // over the transport phase only
    double transport_max_abs_pitch = 0.0;
    double transport_rms_tracking_error = 0.0;
    bool any_servo_cmd_saturated = false;
    bool any_thrust_saturated = false;
    double rms_position_error = 0.0;
};

struct RunLog {
    std::vector<LogRecord> records;
    RunSummary summary;
};

/// Convergence when every estimate component varies less than tol over the
/// trailing window. Returns the first time this holds.
std::optional<double> detect_convergence(const std::vector<double>& times,
                                         const std::vector<Vec3>& com_trace,
                                         double window, double tol);

/// Executes the multi-rate closed loop for the configured scenario.
/// Throws ConfigError before the run starts; run-time faults terminate the
/// run and are recorded in the log.
RunLog run_scenario(const ScenarioConfig& cfg);

/// Writes run.csv, per-figure plot-data CSVs and summary.txt into out_dir.
void emit_outputs(const RunLog& log, const ScenarioConfig& cfg, const std::string& out_dir);

/// The run.csv serialization used by emit_outputs, exposed for determinism tests.
std::string run_log_csv(const RunLog& log);

}  // namespace escom
