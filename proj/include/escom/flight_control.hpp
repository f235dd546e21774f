#pragma once

#include "escom/dynamics.hpp"
#include "escom/vehicle_model.hpp"

namespace escom {

struct ControllerGains {
    Vec3 pos_p = Vec3(2.0, 2.0, 2.0);
    Vec3 pos_i = Vec3(0.5, 0.5, 0.5);
    Vec3 pos_d = Vec3(0.7, 0.7, 0.7);
    Vec3 att_p = Vec3(2.0, 2.0, 1.0);   // roll, pitch, yaw
    Vec3 att_d = Vec3(0.45, 0.45, 0.3);
    Vec3 integrator_limit = Vec3(4.0, 4.0, 4.0);
};

struct Setpoint {
    Vec3 position_des = Vec3::Zero();
    Vec3 velocity_des = Vec3::Zero();
    Vec3 attitude_des = Vec3::Zero();  // Euler [roll pitch yaw]
};

/// Cascaded pose controller: per-axis position PID with gravity compensation
/// feeding a Euler PD attitude loop. Holds the integrator state.
class FlightController {
public:
    FlightController(const ControllerGains& gains, double mass_nominal, double gravity)
        : gains_(gains), mass_nominal_(mass_nominal), gravity_(gravity) {}

    /// Desired global-frame force. The integrator accumulates only when the
    /// previous allocation cycle reported no saturation.
    Vec3 position_control(const Setpoint& sp, const SensorSample& meas, double dt,
                          bool allocation_saturated);

    /// Desired body torque from Euler attitude error and gyro damping.
    Vec3 attitude_control(const Setpoint& sp, const SensorSample& meas) const;

    const Vec3& integrator() const { return pos_integrator_; }
    void reset() { pos_integrator_.setZero(); }

private:
    ControllerGains gains_;
    double mass_nominal_;
    double gravity_;
    Vec3 pos_integrator_ = Vec3::Zero();
};

/// Rotates a desired global force into the body frame and pairs it with the
/// desired torque.
Wrench compose_wrench(const Vec3& force_global_des, const Vec3& torque_des,
                      const Quat& attitude_meas);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace escom
