#include "escom/flight_control.hpp"

#include <algorithm>
#include <cmath>

namespace escom {

double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a <= 0.0) a += 2.0 * M_PI;
    return a - M_PI;
}

Vec3 FlightController::position_control(const Setpoint& sp, const SensorSample& meas,
                                        double dt, bool allocation_saturated) {
    const Vec3 e_pos = sp.position_des - meas.position_meas;
    const Vec3 e_vel = sp.velocity_des - meas.velocity_meas;
    if (!allocation_saturated) {
        pos_integrator_ += e_pos * dt;
        pos_integrator_ = pos_integrator_.cwiseMax(-gains_.integrator_limit)
                              .cwiseMin(gains_.integrator_limit);
    }
    const Vec3 a_des = gains_.pos_p.cwiseProduct(e_pos) +
                       gains_.pos_i.cwiseProduct(pos_integrator_) +
                       gains_.pos_d.cwiseProduct(e_vel);
    return mass_nominal_ * (a_des - Vec3(0.0, 0.0, gravity_));
}

Vec3 FlightController::attitude_control(const Setpoint& sp, const SensorSample& meas) const {
    const Vec3 att = quat_to_euler_zyx(meas.attitude_meas);
    Vec3 e_att;
    for (int i = 0; i < 3; ++i) e_att(i) = wrap_angle(sp.attitude_des(i) - att(i));
    return gains_.att_p.cwiseProduct(e_att) - gains_.att_d.cwiseProduct(meas.gyro);
}

Wrench compose_wrench(const Vec3& force_global_des, const Vec3& torque_des,
                      const Quat& attitude_meas) {
    Wrench w;
    w.force = attitude_meas.toRotationMatrix().transpose() * force_global_des;
    w.torque = torque_des;
    return w;
}

}  // namespace escom
