#pragma once

#include <Eigen/Dense>
#include <array>

namespace escom {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// Physical constants of the simulated plant. All quantities in SI units,
/// body frame z-down, thrust along -z at zero servo tilt.
struct VehicleParams {
    double mass = 2.405;                       // [kg]
    Mat3 inertia = (Eigen::Vector3d(0.035, 0.035, 0.045)).asDiagonal();  // [kg m^2], about CoM
    double arm_length_r = 0.109;               // [m]
    double servo_offset_l = 0.015;             // [m]
    double yaw_thrust_ratio_xi = 0.01;         // reaction torque / thrust
    Vec3 com_true = Vec3::Zero();              // [m], body frame
    double gravity_g = 9.81;                   // [m/s^2]
    double servo_angle_limit = 0.3;            // [rad]
    double thrust_min = 0.0;                   // [N]
    double thrust_max = 15.0;                  // [N]

    void validate() const;  // throws std::invalid_argument on violated invariants
};

/// C = [C1^T C2^T]^T: four thrusts plus two servo angles.
struct ActuatorCommand {
    Vec4 thrusts = Vec4::Zero();       // [N], C1 = [F1 F2 F3 F4]
    Vec2 servo_angles = Vec2::Zero();  // [rad], C2 = [theta1 theta2]
};

/// Body torque/force pair, the controller/plant currency.
struct Wrench {
    Vec3 torque = Vec3::Zero();  // [N m]
    Vec3 force = Vec3::Zero();   // [N]
};

// Thruster positions in the body frame. Thrusters 1,3 sit on the axis-1 arm
// (along body x, offset +l below center) and tilt with theta1 to make y force;
// thrusters 2,4 sit on the axis-2 arm (along body y, offset -l) and tilt with
// theta2 to make -x force. Rotors 1,3 spin opposite to 2,4, so their reaction
// torque enters with -xi and 2,4 with +xi.
std::array<Vec3, 4> thruster_positions(const VehicleParams& params);

/// Per-thruster thrust force vectors in the body frame.
std::array<Vec3, 4> thruster_force_vectors(const ActuatorCommand& cmd);

/// Net three-dimensional force from all four thrusters.
Vec3 net_force(const ActuatorCommand& cmd);

/// 3x4 map from thrusts C1 to body torque, for a given CoM and servo angles.
Mat34 torque_mapping_matrix(const Vec3& com, const Vec2& servo_angles,
                            const VehicleParams& params);

/// Full body wrench produced by an actuator command about the given CoM.
Wrench body_wrench(const ActuatorCommand& cmd, const Vec3& com,
                   const VehicleParams& params);

}  // namespace escom
