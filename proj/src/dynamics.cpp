#include "escom/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace escom {

Vec3 quat_to_euler_zyx(const Quat& q) {
    const Mat3 r = q.toRotationMatrix();
    const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
    const double roll = std::atan2(r(2, 1), r(2, 2));
    const double yaw = std::atan2(r(1, 0), r(0, 0));
    return Vec3(roll, pitch, yaw);
}

namespace {

struct StateDeriv {
    Vec3 dpos, dvel, dom;
    Eigen::Vector4d dq;  // quaternion coefficients (w,x,y,z)
};

Eigen::Vector4d quat_deriv(const Quat& q, const Vec3& omega) {
    // qdot = 0.5 * q (x) [0, omega]
    const Quat oq(0.0, omega(0), omega(1), omega(2));
    const Quat d = q * oq;
    return Eigen::Vector4d(0.5 * d.w(), 0.5 * d.x(), 0.5 * d.y(), 0.5 * d.z());
}

StateDeriv derivatives(const RigidState& s, const Wrench& w, const VehicleParams& p) {
    StateDeriv d;
    d.dpos = s.velocity;
    d.dvel = s.attitude.toRotationMatrix() * w.force / p.mass + Vec3(0.0, 0.0, p.gravity_g);
    const Vec3 jom = p.inertia * s.body_rates;
    d.dom = p.inertia.ldlt().solve(w.torque - s.body_rates.cross(jom));
    d.dq = quat_deriv(s.attitude, s.body_rates);
    return d;
}

RigidState advance(const RigidState& s, const StateDeriv& d, double h) {
    RigidState out;
    out.position = s.position + h * d.dpos;
    out.velocity = s.velocity + h * d.dvel;
    out.body_rates = s.body_rates + h * d.dom;
    out.attitude = Quat(s.attitude.w() + h * d.dq(0), s.attitude.x() + h * d.dq(1),
                        s.attitude.y() + h * d.dq(2), s.attitude.z() + h * d.dq(3));
    return out;
}

}  // namespace

RigidState step_dynamics(const RigidState& state, const ActuatorState& act,
                         const VehicleParams& params, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_dynamics: dt must be > 0");

    ActuatorCommand actual;
    actual.thrusts = act.rotor_thrusts_actual;
    actual.servo_angles = act.servo_angles_actual;
    const Wrench w = body_wrench(actual, params.com_true, params);

    const StateDeriv k1 = derivatives(state, w, params);
    const StateDeriv k2 = derivatives(advance(state, k1, 0.5 * dt), w, params);
    const StateDeriv k3 = derivatives(advance(state, k2, 0.5 * dt), w, params);
    const StateDeriv k4 = derivatives(advance(state, k3, dt), w, params);

    RigidState out;
    out.position = state.position + dt / 6.0 * (k1.dpos + 2.0 * k2.dpos + 2.0 * k3.dpos + k4.dpos);
    out.velocity = state.velocity + dt / 6.0 * (k1.dvel + 2.0 * k2.dvel + 2.0 * k3.dvel + k4.dvel);
    out.body_rates = state.body_rates + dt / 6.0 * (k1.dom + 2.0 * k2.dom + 2.0 * k3.dom + k4.dom);
    const Eigen::Vector4d dq = dt / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
    out.attitude = Quat(state.attitude.w() + dq(0), state.attitude.x() + dq(1),
                        state.attitude.y() + dq(2), state.attitude.z() + dq(3));
    out.attitude.normalize();
    return out;
}

bool diverged(const RigidState& state, const DivergenceBounds& bounds) {
    const Vec3 euler = quat_to_euler_zyx(state.attitude);
    if (std::abs(euler(0)) > bounds.max_tilt || std::abs(euler(1)) > bounds.max_tilt) return true;
    if (state.position.norm() > bounds.max_position) return true;
    return !(state.position.allFinite() && state.velocity.allFinite() &&
             state.body_rates.allFinite());
}

ActuatorState step_actuators(const ActuatorState& act, const ActuatorCommand& cmd,
                             const VehicleParams& params, const ActuatorModel& model,
                             double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_actuators: dt must be > 0");
    ActuatorState out;

    const double ar = 1.0 - std::exp(-dt / model.tau_rotor);
    for (int i = 0; i < 4; ++i) {
        const double target = std::clamp(cmd.thrusts(i), params.thrust_min, params.thrust_max);
        double f = act.rotor_thrusts_actual(i) + ar * (target - act.rotor_thrusts_actual(i));
        out.rotor_thrusts_actual(i) = std::clamp(f, params.thrust_min, params.thrust_max);
    }

    const double as = 1.0 - std::exp(-dt / model.tau_servo);
    const double max_step = model.servo_rate_max * dt;
    for (int i = 0; i < 2; ++i) {
        const double target =
            std::clamp(cmd.servo_angles(i), -params.servo_angle_limit, params.servo_angle_limit);
        double d = as * (target - act.servo_angles_actual(i));
        d = std::clamp(d, -max_step, max_step);
        double th = act.servo_angles_actual(i) + d;
        th = std::clamp(th, -params.servo_angle_limit, params.servo_angle_limit);
        out.servo_angles_actual(i) = th;
        out.servo_rates_actual(i) = (th - act.servo_angles_actual(i)) / dt;
    }
    return out;
}

SensorSample sample_sensors(const RigidState& state, const ActuatorState& act,
                            double t, const NoiseConfig& noise, std::mt19937_64& rng) {
    SensorSample s;
    s.timestamp = t;
    s.gyro = state.body_rates;
    s.attitude_meas = state.attitude;
    s.position_meas = state.position;
    s.velocity_meas = state.velocity;
    s.servo_angle_meas = act.servo_angles_actual;
    if (noise.enabled) {
        std::normal_distribution<double> n(0.0, 1.0);
        for (int i = 0; i < 3; ++i) s.gyro(i) += noise.gyro_sigma * n(rng);
        for (int i = 0; i < 3; ++i) s.position_meas(i) += noise.position_sigma * n(rng);
        for (int i = 0; i < 3; ++i) s.velocity_meas(i) += noise.velocity_sigma * n(rng);
        if (noise.attitude_sigma > 0.0) {
            const Vec3 da(noise.attitude_sigma * n(rng), noise.attitude_sigma * n(rng),
                          noise.attitude_sigma * n(rng));
            Quat dq(1.0, 0.5 * da(0), 0.5 * da(1), 0.5 * da(2));
            dq.normalize();
            s.attitude_meas = state.attitude * dq;
        }
        for (int i = 0; i < 2; ++i) s.servo_angle_meas(i) += noise.servo_sigma * n(rng);
    }
    return s;
}

}  // namespace escom
