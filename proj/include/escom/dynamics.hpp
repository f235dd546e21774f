#pragma once

#include <cstdint>
#include <random>

#include "escom/vehicle_model.hpp"

namespace escom {

using Quat = Eigen::Quaterniond;

/// Full 6-DOF rigid-body state. Attitude is the body->global rotation.
struct RigidState {
    Vec3 position = Vec3::Zero();    // [m], global frame, z down
    Vec3 velocity = Vec3::Zero();    // [m/s], global
    Quat attitude = Quat::Identity();
    Vec3 body_rates = Vec3::Zero();  // [rad/s], body frame
};

struct ActuatorState {
    Vec4 rotor_thrusts_actual = Vec4::Zero();  // [N]
    Vec2 servo_angles_actual = Vec2::Zero();   // [rad]
    Vec2 servo_rates_actual = Vec2::Zero();    // [rad/s]
};

struct ActuatorModel {
    double tau_rotor = 0.02;      // [s], first-order thrust lag
    double tau_servo = 0.08;      // [s], first-order servo lag
    double servo_rate_max = 4.0;  // [rad/s]
};

struct SensorSample {
    Vec3 gyro = Vec3::Zero();
    Quat attitude_meas = Quat::Identity();
    Vec3 position_meas = Vec3::Zero();
    Vec3 velocity_meas = Vec3::Zero();
    Vec2 servo_angle_meas = Vec2::Zero();
    double timestamp = 0.0;
};

struct NoiseConfig {
    bool enabled = false;
    double gyro_sigma = 0.002;      // [rad/s]
    double position_sigma = 0.0;    // [m]
    double velocity_sigma = 0.0;    // [m/s]
    double attitude_sigma = 0.0;    // [rad], small-angle per axis
    double servo_sigma = 0.0;       // [rad]
};

struct DivergenceBounds {
    double max_tilt = 1.0;      // [rad], on |roll| or |pitch|
    double max_position = 50.0; // [m], on ||position||
};

/// Z-Y-X Euler angles [roll pitch yaw] of a body->global quaternion.
Vec3 quat_to_euler_zyx(const Quat& q);

/// Advances the rigid-body state by dt with fixed-step RK4. The body wrench is
/// computed from the actual actuator values about params.com_true and held
/// body-fixed over the step. Throws std::invalid_argument on dt <= 0.
RigidState step_dynamics(const RigidState& state, const ActuatorState& act,
                         const VehicleParams& params, double dt);

/// True if the state violates the crash-detection bounds.
bool diverged(const RigidState& state, const DivergenceBounds& bounds);

/// First-order actuator lags toward the command; servo additionally rate
/// limited. Outputs clamped to the saturation bounds in params.
ActuatorState step_actuators(const ActuatorState& act, const ActuatorCommand& cmd,
                             const VehicleParams& params, const ActuatorModel& model,
                             double dt);

/// Emulated IMU + external pose measurement. Noise off returns truth exactly.
SensorSample sample_sensors(const RigidState& state, const ActuatorState& act,
                            double t, const NoiseConfig& noise, std::mt19937_64& rng);

}  // namespace escom
