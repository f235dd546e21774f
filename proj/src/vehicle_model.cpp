#include "escom/vehicle_model.hpp"

#include <cmath>
#include <stdexcept>

namespace escom {

void VehicleParams::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (!inertia.isApprox(inertia.transpose(), 1e-9))
        throw std::invalid_argument("inertia must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("inertia must be positive-definite");
    if (!(arm_length_r > 0.0)) throw std::invalid_argument("arm_length_r must be > 0");
    if (!(servo_offset_l >= 0.0)) throw std::invalid_argument("servo_offset_l must be >= 0");
    if (!(yaw_thrust_ratio_xi >= 0.0)) throw std::invalid_argument("yaw_thrust_ratio_xi must be >= 0");
    if (!(thrust_min >= 0.0 && thrust_min < thrust_max))
        throw std::invalid_argument("need 0 <= thrust_min < thrust_max");
    if (!(servo_angle_limit > 0.0 && servo_angle_limit < M_PI / 2.0))
        throw std::invalid_argument("servo_angle_limit must be in (0, pi/2)");
}

std::array<Vec3, 4> thruster_positions(const VehicleParams& params) {
    const double r = params.arm_length_r;
    const double l = params.servo_offset_l;
    return {Vec3(r, 0.0, l), Vec3(0.0, -r, -l), Vec3(-r, 0.0, l), Vec3(0.0, r, -l)};
}

std::array<Vec3, 4> thruster_force_vectors(const ActuatorCommand& cmd) {
    const double s1 = std::sin(cmd.servo_angles(0));
    const double c1 = std::cos(cmd.servo_angles(0));
    const double s2 = std::sin(cmd.servo_angles(1));
    const double c2 = std::cos(cmd.servo_angles(1));
    return {Vec3(0.0, s1, -c1) * cmd.thrusts(0), Vec3(-s2, 0.0, -c2) * cmd.thrusts(1),
            Vec3(0.0, s1, -c1) * cmd.thrusts(2), Vec3(-s2, 0.0, -c2) * cmd.thrusts(3)};
}

Vec3 net_force(const ActuatorCommand& cmd) {
    const double fa1 = cmd.thrusts(0) + cmd.thrusts(2);
    const double fa2 = cmd.thrusts(1) + cmd.thrusts(3);
    const double s1 = std::sin(cmd.servo_angles(0));
    const double c1 = std::cos(cmd.servo_angles(0));
    const double s2 = std::sin(cmd.servo_angles(1));
    const double c2 = std::cos(cmd.servo_angles(1));
    return Vec3(-fa2 * s2, fa1 * s1, -fa1 * c1 - fa2 * c2);
}

Mat34 torque_mapping_matrix(const Vec3& com, const Vec2& servo_angles,
                            const VehicleParams& params) {
    const double r = params.arm_length_r;
    const double l = params.servo_offset_l;
    const double xi = params.yaw_thrust_ratio_xi;
    const double xc = com(0), yc = com(1), zc = com(2);
    const double s1 = std::sin(servo_angles(0)), c1 = std::cos(servo_angles(0));
    const double s2 = std::sin(servo_angles(1)), c2 = std::cos(servo_angles(1));

    Mat34 m;
    m << -(l - zc) * s1 + yc * c1, (r + yc) * c2 + xi * s2,
         -(l - zc) * s1 + yc * c1, -(r - yc) * c2 + xi * s2,
         (r - xc) * c1 + xi * s1, (l + zc) * s2 - xc * c2,
         -(r + xc) * c1 + xi * s1, (l + zc) * s2 - xc * c2,
         (r - xc) * s1 - xi * c1, -(r + yc) * s2 + xi * c2,
         -(r + xc) * s1 - xi * c1, (r - yc) * s2 + xi * c2;
    return m;
}

Wrench body_wrench(const ActuatorCommand& cmd, const Vec3& com,
                   const VehicleParams& params) {
    Wrench w;
    w.torque = torque_mapping_matrix(com, cmd.servo_angles, params) * cmd.thrusts;
    w.force = net_force(cmd);
    return w;
}

}  // namespace escom
