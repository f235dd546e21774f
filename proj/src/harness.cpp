#include "escom/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <filesystem>
#include <fstream>

#include "escom/com_estimator.hpp"
#include "escom/dynamics.hpp"
#include "escom/flight_control.hpp"

namespace escom {

std::string to_string(TerminationCause c) {
    switch (c) {
        case TerminationCause::Completed: return "completed";
        case TerminationCause::Crashed: return "crashed";
        case TerminationCause::Fault: return "fault";
    }
    return "fault";
}

CompositeBody composite_com(const VehicleParams& empty_params, const PayloadConfig& payload) {
    CompositeBody out;
    const double mv = empty_params.mass;
    const double mp = payload.mass;
    out.mass = mv + mp;
    out.com = (mv * empty_params.com_true + mp * payload.attach_position) / out.mass;

    auto parallel_axis = [](double m, const Vec3& d) -> Mat3 {
        return m * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
    };
    out.inertia = empty_params.inertia + parallel_axis(mv, empty_params.com_true - out.com) +
                  parallel_axis(mp, payload.attach_position - out.com);
    return out;
}

std::optional<double> detect_convergence(const std::vector<double>& times,
                                         const std::vector<Vec3>& com_trace,
                                         double window, double tol) {
    const size_t n = std::min(times.size(), com_trace.size());
    size_t lo = 0;
    for (size_t hi = 0; hi < n; ++hi) {
        while (times[hi] - times[lo] > window) ++lo;
        if (times[hi] - times[lo] < window - 1e-9) continue;  // window not yet filled
        Vec3 mn = com_trace[lo], mx = com_trace[lo];
        bool ok = true;
        for (size_t k = lo; k <= hi && ok; ++k) {
            mn = mn.cwiseMin(com_trace[k]);
            mx = mx.cwiseMax(com_trace[k]);
            if (((mx - mn).array() >= tol).any()) ok = false;
        }
        if (ok) return times[hi];
    }
    return std::nullopt;
}

namespace {

enum class Phase { Estimation, Settle, Transport, Done };

struct ReciprocationProfile {
    int axis;
    double amplitude;
    double full_period;

    void eval(double t_local, Vec3* pos, Vec3* vel) const {
        pos->setZero();
        vel->setZero();
        const double w = 2.0 * M_PI / full_period;
        (*pos)(axis) = 0.5 * amplitude * (1.0 - std::cos(w * t_local));
        (*vel)(axis) = 0.5 * amplitude * w * std::sin(w * t_local);
    }
};

/// Rolling min/max window over the estimate trace for online convergence checks.
class ConvergenceMonitor {
public:
    ConvergenceMonitor(double window, double tol) : window_(window), tol_(tol) {}

    bool push(double t, const Vec3& v) {
        buf_.emplace_back(t, v);
        while (t - buf_.front().first > window_) buf_.pop_front();
        if (t - buf_.front().first < window_ - 1e-9) return false;
        Vec3 mn = buf_.front().second, mx = buf_.front().second;
        for (const auto& [tt, vv] : buf_) {
            mn = mn.cwiseMin(vv);
            mx = mx.cwiseMax(vv);
        }
        return ((mx - mn).array() < tol_).all();
    }

private:
    double window_, tol_;
    std::deque<std::pair<double, Vec3>> buf_;
};

}  // namespace

RunLog run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();

    // Plant truth: composite body when a payload is loaded.
    VehicleParams plant = cfg.vehicle;
    if (cfg.payload_enabled && cfg.payload.mass > 0.0) {
        const CompositeBody comp = composite_com(cfg.vehicle, cfg.payload);
        plant.mass = comp.mass;
        plant.com_true = comp.com;
        plant.inertia = comp.inertia;
    }

    const double dt = 1.0 / cfg.rates.inner_hz;
    const int outer_div = cfg.rates.inner_hz / cfg.rates.outer_hz;
    const int est_div = cfg.rates.inner_hz / cfg.rates.estimator_hz;
    const int log_div = cfg.rates.inner_hz / cfg.rates.log_hz;
    const double outer_dt = dt * outer_div;

    RigidState state;
    ActuatorState act;
    act.rotor_thrusts_actual.setConstant(cfg.mass_nominal * cfg.vehicle.gravity_g / 4.0);

    FlightController fc(cfg.gains, cfg.mass_nominal, cfg.vehicle.gravity_g);
    std::mt19937_64 rng(cfg.seed);

    std::optional<ComEstimator> est;
    bool dither_active = false;
    if (cfg.estimator_enabled) {
        EstimatorConfig ecfg = cfg.estimator;
        ecfg.inertia_est = cfg.vehicle.inertia * cfg.inertia_est_scale;
        Vec3 init = cfg.vehicle.com_true;
        if (cfg.estimator_init == EstimatorInit::Truth) init = plant.com_true;
        if (cfg.estimator_init == EstimatorInit::Custom) init = cfg.estimator_init_custom;
        est.emplace(ecfg, init, dt * est_div);
        dither_active = true;
    }

    // Phase timeline.
    const double full_period = 2.0 * cfg.reciprocation.half_period;
    const double transport_span = cfg.transport_cycles * full_period;
    const ReciprocationProfile profile{cfg.reciprocation.axis, cfg.reciprocation.amplitude,
                                       full_period};
    Phase phase = Phase::Estimation;
    double phase_start = 0.0;
    double t_end = cfg.duration;
    bool has_transport = false;
    switch (cfg.scenario) {
        case ScenarioId::EstimateFixedPayload:
        case ScenarioId::Custom:
            break;
        case ScenarioId::TransportNoEsc:
            phase = Phase::Settle;
            has_transport = true;
            t_end = cfg.hover_settle_time + transport_span + 5.0;
            break;
        case ScenarioId::TransportWithEsc:
            has_transport = true;
            t_end = cfg.estimation_max_time + cfg.hover_settle_time + transport_span + 5.0;
            break;
    }

    ConvergenceMonitor conv(cfg.convergence_window, cfg.convergence_tol);
    RunLog log;
    RunSummary& sum = log.summary;
    sum.com_truth = plant.com_true;

    Vec3 force_global_des = Vec3(0.0, 0.0, -cfg.mass_nominal * cfg.vehicle.gravity_g);
    bool last_saturated = false;
    Vec3 torque_des = Vec3::Zero();
    // The gyro-difference torque estimate averages the applied torque over one
    // estimator period, so the nominal is accumulated from the actuator state
    // of every inner step in the same window. Building it from commands
    // instead would leave the actuator-lag phase shift in the residual, which
    // demodulates into a bias even when com_est is exact.
    Vec3 nominal_accum = Vec3::Zero();
    int nominal_n = 0;
    AllocationResult alloc;
    double transport_err_sq = 0.0;
    long transport_err_n = 0;
    double pos_err_sq = 0.0;
    long pos_err_n = 0;

    const long n_steps = std::lround(t_end / dt);
    for (long i = 0; i < n_steps; ++i) {
        const double t = i * dt;

        // Phase transitions.
        if (phase == Phase::Estimation) {
            const bool converged = sum.convergence_time.has_value();
            const bool timed_out = cfg.scenario == ScenarioId::TransportWithEsc &&
                                   t - phase_start >= cfg.estimation_max_time;
            if (cfg.scenario == ScenarioId::TransportWithEsc && (converged || timed_out)) {
                if (cfg.estimator_freeze_after_convergence && est) {
                    est->freeze();
                    dither_active = false;
                }
                phase = Phase::Settle;
                phase_start = t;
            } else if (converged && cfg.estimator_freeze_after_convergence && est &&
                       !est->frozen()) {
                est->freeze();
                dither_active = false;
            }
        }
        if (phase == Phase::Settle && t - phase_start >= cfg.hover_settle_time && has_transport) {
            phase = Phase::Transport;
            phase_start = t;
        }
        if (phase == Phase::Transport && t - phase_start >= transport_span) {
            phase = Phase::Done;
        }
        if (phase == Phase::Done) {
            sum.end_time = t;
            break;
        }

        Setpoint sp;
        if (phase == Phase::Transport) {
            profile.eval(t - phase_start, &sp.position_des, &sp.velocity_des);
        }

        const SensorSample meas = sample_sensors(state, act, t, cfg.noise, rng);

        if (i % outer_div == 0) {
            force_global_des = fc.position_control(sp, meas, outer_dt, last_saturated);
        }
        torque_des = fc.attitude_control(sp, meas);
        if (est) torque_des -= est->disturbance_trim();

        Wrench wrench_des = compose_wrench(force_global_des, torque_des, meas.attitude_meas);
        if (dither_active) wrench_des.force += dither(t, cfg.estimator.dither);

        const Vec3 com_alloc = est ? est->com_estimate() : cfg.vehicle.com_true;
        alloc = allocate(wrench_des, com_alloc, meas.servo_angle_meas, cfg.vehicle, nullptr,
                         cfg.allocation);
        if (alloc.status != AllocationStatus::Ok) {
            sum.termination = TerminationCause::Fault;
            sum.end_time = t;
            break;
        }
        last_saturated = alloc.thrust_saturated || alloc.servo_saturated;
        sum.any_thrust_saturated = sum.any_thrust_saturated || alloc.thrust_saturated;
        sum.any_servo_cmd_saturated = sum.any_servo_cmd_saturated || alloc.servo_saturated;

        if (est && i % est_div == 0) {
            const Vec3 torque_nominal =
                nominal_n > 0 ? Vec3(nominal_accum / nominal_n) : Vec3::Zero();
            nominal_accum.setZero();
            nominal_n = 0;
            est->update_from_measurements(meas.gyro, torque_nominal, t);
            if (!est->in_warmup() && !sum.convergence_time) {
                if (conv.push(t, est->com_estimate())) sum.convergence_time = t;
            }
        }

        if (i % log_div == 0) {
            LogRecord rec;
            rec.t = t;
            rec.position = state.position;
            rec.velocity = state.velocity;
            rec.euler = quat_to_euler_zyx(state.attitude);
            rec.body_rates = state.body_rates;
            rec.thrust_cmd = alloc.command.thrusts;
            rec.servo_cmd = alloc.command.servo_angles;
            rec.servo_actual = act.servo_angles_actual;
            rec.torque_des = torque_des;
            rec.force_des_body = wrench_des.force;
            ActuatorCommand actual;
            actual.thrusts = act.rotor_thrusts_actual;
            actual.servo_angles = act.servo_angles_actual;
            const Wrench realized = body_wrench(actual, plant.com_true, plant);
            rec.torque_realized = realized.torque;
            rec.force_realized = realized.force;
            if (est) {
                rec.gamma = est->gamma();
                rec.v = est->gradient();
                rec.com_est = est->com_estimate();
            } else {
                rec.com_est = com_alloc;
            }
            rec.thrust_saturated = alloc.thrust_saturated;
            rec.servo_saturated = alloc.servo_saturated;
            rec.phase = phase == Phase::Transport ? 1 : 0;
            log.records.push_back(rec);

            const Vec3 euler = rec.euler;
            sum.max_abs_roll = std::max(sum.max_abs_roll, std::abs(euler(0)));
            sum.max_abs_pitch = std::max(sum.max_abs_pitch, std::abs(euler(1)));
            const Vec3 perr = sp.position_des - state.position;
            pos_err_sq += perr.squaredNorm();
            ++pos_err_n;
            if (phase == Phase::Transport) {
                sum.transport_max_abs_roll = std::max(sum.transport_max_abs_roll, std::abs(euler(0)));
                sum.transport_max_abs_pitch =
                    std::max(sum.transport_max_abs_pitch, std::abs(euler(1)));
                const double e_axis = perr(cfg.reciprocation.axis);
                transport_err_sq += e_axis * e_axis;
                ++transport_err_n;
            }
        }

        act = step_actuators(act, alloc.command, cfg.vehicle, cfg.actuators, dt);
        if (est) {
            nominal_accum += torque_mapping_matrix(com_alloc, act.servo_angles_actual,
                                                   cfg.vehicle) *
                             act.rotor_thrusts_actual;
            ++nominal_n;
        }
        state = step_dynamics(state, act, plant, dt);
        sum.end_time = t + dt;

        if (diverged(state, cfg.bounds)) {
            sum.termination = TerminationCause::Crashed;
            break;
        }
    }

    sum.final_com_est = est ? est->com_estimate() : cfg.vehicle.com_true;
    if (pos_err_n > 0) sum.rms_position_error = std::sqrt(pos_err_sq / pos_err_n);
    if (transport_err_n > 0)
        sum.transport_rms_tracking_error = std::sqrt(transport_err_sq / transport_err_n);
    return log;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string run_log_csv(const RunLog& log) {
    std::string s =
        "t_s,pos_x,pos_y,pos_z,vel_x,vel_y,vel_z,roll,pitch,yaw,rate_p,rate_q,rate_r,"
        "thrust_cmd_1,thrust_cmd_2,thrust_cmd_3,thrust_cmd_4,servo_cmd_1,servo_cmd_2,"
        "servo_act_1,servo_act_2,tau_des_x,tau_des_y,tau_des_z,f_des_x,f_des_y,f_des_z,"
        "tau_real_x,tau_real_y,tau_real_z,f_real_x,f_real_y,f_real_z,"
        "gamma_1,gamma_2,gamma_3,v_1,v_2,v_3,com_est_x,com_est_y,com_est_z,"
        "thrust_sat,servo_sat,phase\r\n";
    for (const auto& r : log.records) {
        s += fmt(r.t);
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.position(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.velocity(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.euler(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.body_rates(i));
        for (int i = 0; i < 4; ++i) s += "," + fmt(r.thrust_cmd(i));
        for (int i = 0; i < 2; ++i) s += "," + fmt(r.servo_cmd(i));
        for (int i = 0; i < 2; ++i) s += "," + fmt(r.servo_actual(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.torque_des(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.force_des_body(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.torque_realized(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.force_realized(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.gamma(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.v(i));
        for (int i = 0; i < 3; ++i) s += "," + fmt(r.com_est(i));
        s += std::string(",") + (r.thrust_saturated ? "1" : "0");
        s += std::string(",") + (r.servo_saturated ? "1" : "0");
        s += "," + std::to_string(r.phase) + "\r\n";
    }
    return s;
}

void emit_outputs(const RunLog& log, const ScenarioConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());

    write_file(out_dir + "/run.csv", run_log_csv(log));

    auto panel = [&](const std::string& name, const std::string& header,
                     const std::function<std::string(const LogRecord&)>& row) {
        std::string s = header + "\r\n";
        for (const auto& r : log.records) s += fmt(r.t) + row(r) + "\r\n";
        write_file(out_dir + "/" + name, s);
    };

    panel("fig_attitude.csv", "t_s,roll,pitch,yaw", [](const LogRecord& r) {
        return "," + fmt(r.euler(0)) + "," + fmt(r.euler(1)) + "," + fmt(r.euler(2));
    });
    panel("fig_position.csv", "t_s,pos_x,pos_y,pos_z", [](const LogRecord& r) {
        return "," + fmt(r.position(0)) + "," + fmt(r.position(1)) + "," + fmt(r.position(2));
    });
    panel("fig_servo.csv", "t_s,servo_cmd_1,servo_cmd_2,servo_act_1,servo_act_2",
          [](const LogRecord& r) {
              return "," + fmt(r.servo_cmd(0)) + "," + fmt(r.servo_cmd(1)) + "," +
                     fmt(r.servo_actual(0)) + "," + fmt(r.servo_actual(1));
          });
    panel("fig_esc_process.csv", "t_s,gamma_1,gamma_2,gamma_3,v_1,v_2,v_3",
          [](const LogRecord& r) {
              std::string s;
              for (int i = 0; i < 3; ++i) s += "," + fmt(r.gamma(i));
              for (int i = 0; i < 3; ++i) s += "," + fmt(r.v(i));
              return s;
          });
    const Vec3 truth = log.summary.com_truth;
    panel("fig_com_estimate.csv", "t_s,com_est_x,com_est_y,com_est_z,com_true_x,com_true_y,com_true_z",
          [truth](const LogRecord& r) {
              std::string s;
              for (int i = 0; i < 3; ++i) s += "," + fmt(r.com_est(i));
              for (int i = 0; i < 3; ++i) s += "," + fmt(truth(i));
              return s;
          });

    const RunSummary& sum = log.summary;
    std::string s;
    s += "scenario = " + to_string(cfg.scenario) + "\n";
    s += "termination_cause = " + to_string(sum.termination) + "\n";
    s += "end_time = " + fmt(sum.end_time) + "\n";
    s += "convergence_time = " + (sum.convergence_time ? fmt(*sum.convergence_time) : "none") + "\n";
    s += "final_com_est_x = " + fmt(sum.final_com_est(0)) + "\n";
    s += "final_com_est_y = " + fmt(sum.final_com_est(1)) + "\n";
    s += "final_com_est_z = " + fmt(sum.final_com_est(2)) + "\n";
    s += "com_true_x = " + fmt(sum.com_truth(0)) + "\n";
    s += "com_true_y = " + fmt(sum.com_truth(1)) + "\n";
    s += "com_true_z = " + fmt(sum.com_truth(2)) + "\n";
    s += "max_abs_roll = " + fmt(sum.max_abs_roll) + "\n";
    s += "max_abs_pitch = " + fmt(sum.max_abs_pitch) + "\n";
    s += "transport_max_abs_roll = " + fmt(sum.transport_max_abs_roll) + "\n";
    s += "transport_max_abs_pitch = " + fmt(sum.transport_max_abs_pitch) + "\n";
    s += "transport_rms_tracking_error = " + fmt(sum.transport_rms_tracking_error) + "\n";
    s += "rms_position_error = " + fmt(sum.rms_position_error) + "\n";
    s += std::string("any_servo_cmd_saturated = ") + (sum.any_servo_cmd_saturated ? "true" : "false") + "\n";
    s += std::string("any_thrust_saturated = ") + (sum.any_thrust_saturated ? "true" : "false") + "\n";
    write_file(out_dir + "/summary.txt", s);
}

}  // namespace escom
