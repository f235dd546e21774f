#include "escom/allocation.hpp"

#include <cmath>

namespace escom {

Mat4 full_mapping_matrix(const Vec3& com, const Vec2& servo_angles,
                         const VehicleParams& params) {
    const double c1 = std::cos(servo_angles(0));
    const double c2 = std::cos(servo_angles(1));
    Mat4 m;
    m.topRows<3>() = torque_mapping_matrix(com, servo_angles, params);
    m.row(3) << -c1, -c2, -c1, -c2;
    return m;
}

AllocationResult allocate_step1(const Vec3& torque_des, double fz_des,
                                const Vec3& com_est, const Vec2& servo_angles,
                                const VehicleParams& params,
                                const AllocatorSettings& settings) {
    AllocationResult res;
    const Mat4 m = full_mapping_matrix(com_est, servo_angles, params);
    Eigen::PartialPivLU<Mat4> lu(m);
    const double rcond = lu.rcond();
    res.mapping_condition = (rcond > 0.0) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(res.mapping_condition < settings.condition_threshold)) {
        res.status = AllocationStatus::SingularMapping;
        return res;
    }
    Vec4 rhs;
    rhs << torque_des, fz_des;
    Vec4 thrusts = lu.solve(rhs);
    for (int i = 0; i < 4; ++i) {
        const double clamped = std::clamp(thrusts(i), params.thrust_min, params.thrust_max);
        if (clamped != thrusts(i)) res.thrust_saturated = true;
        res.command.thrusts(i) = clamped;
    }
    return res;
}

ServoAllocation allocate_step2(double fx_des, double fy_des, const Vec4& thrusts_cmd,
                               const VehicleParams& params,
                               const AllocatorSettings& settings) {
    ServoAllocation res;
    const double fa1 = thrusts_cmd(0) + thrusts_cmd(2);
    const double fa2 = thrusts_cmd(1) + thrusts_cmd(3);
    if (fa1 <= settings.thrust_sum_epsilon || fa2 <= settings.thrust_sum_epsilon) {
        res.status = AllocationStatus::DegenerateThrust;
        return res;
    }
    const double sbar = std::sin(params.servo_angle_limit);
    const double arg1 = fy_des / fa1;
    const double arg2 = fx_des / (-fa2);
    if (std::abs(arg1) > sbar || std::abs(arg2) > sbar) res.saturated = true;
    res.servo_angles(0) = std::asin(std::clamp(arg1, -sbar, sbar));
    res.servo_angles(1) = std::asin(std::clamp(arg2, -sbar, sbar));
    // asin of a clamped argument already lands inside +-servo_angle_limit
    return res;
}

AllocationResult allocate(const Wrench& wrench_des, const Vec3& com_est,
                          const Vec2& measured_servo, const VehicleParams& params,
                          AllocationState* state, const AllocatorSettings& settings) {
    AllocationResult res = allocate_step1(wrench_des.torque, wrench_des.force(2), com_est,
                                          measured_servo, params, settings);
    if (res.status != AllocationStatus::Ok) return res;
    const ServoAllocation servo = allocate_step2(wrench_des.force(0), wrench_des.force(1),
                                                 res.command.thrusts, params, settings);
    if (servo.status != AllocationStatus::Ok) {
        res.status = servo.status;
        return res;
    }
    res.command.servo_angles = servo.servo_angles;
    res.servo_saturated = servo.saturated;
    if (state != nullptr) {
        state->last_servo_angles = measured_servo;
        state->mapping_condition = res.mapping_condition;
    }
    return res;
}

}  // namespace escom
