#pragma once

#include "escom/vehicle_model.hpp"

namespace escom {

enum class AllocationStatus { Ok, SingularMapping, DegenerateThrust };

struct AllocationResult {
    ActuatorCommand command;
    AllocationStatus status = AllocationStatus::Ok;
    bool thrust_saturated = false;
    bool servo_saturated = false;
    double mapping_condition = 0.0;  // condition estimate of the frozen M
};

struct AllocatorSettings {
    double condition_threshold = 1e6;
    double thrust_sum_epsilon = 0.1;  // [N], minimum F_A{1,2} for step 2
};

/// Tracks the servo angles used to freeze M and the last condition number.
struct AllocationState {
    Vec2 last_servo_angles = Vec2::Zero();
    double mapping_condition = 0.0;
};

/// The 4x4 map from C1 to [torque; F_z]: M_tau stacked over the collective row.
Mat4 full_mapping_matrix(const Vec3& com, const Vec2& servo_angles,
                         const VehicleParams& params);

/// Step 1: invert the frozen map to get thrusts for the desired torque and F_z.
/// Thrusts are clamped to bounds; clamping sets thrust_saturated.
AllocationResult allocate_step1(const Vec3& torque_des, double fz_des,
                                const Vec3& com_est, const Vec2& servo_angles,
                                const VehicleParams& params,
                                const AllocatorSettings& settings = {});

struct ServoAllocation {
    Vec2 servo_angles = Vec2::Zero();
    AllocationStatus status = AllocationStatus::Ok;
    bool saturated = false;
};

/// Step 2: servo angles from the horizontal force targets and the commanded
/// thrust sums. The asin argument is clamped to +-sin(servo_angle_limit).
ServoAllocation allocate_step2(double fx_des, double fy_des, const Vec4& thrusts_cmd,
                               const VehicleParams& params,
                               const AllocatorSettings& settings = {});

/// Sequential two-step allocation: Step 1 with M frozen at the measured servo
/// angles, then Step 2 for the servo commands.
AllocationResult allocate(const Wrench& wrench_des, const Vec3& com_est,
                          const Vec2& measured_servo, const VehicleParams& params,
                          AllocationState* state = nullptr,
                          const AllocatorSettings& settings = {});

}  // namespace escom
