#include <doctest.h>

#include <cmath>

#include "escom/flight_control.hpp"

using namespace escom;

namespace {
constexpr double kMass = 2.405;
constexpr double kG = 9.81;
constexpr double kDt = 0.004;
}

TEST_CASE("wrap_angle") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(3.0) == doctest::Approx(3.0));
    CHECK(wrap_angle(4.0) == doctest::Approx(4.0 - 2.0 * M_PI));
    CHECK(wrap_angle(-4.0) == doctest::Approx(2.0 * M_PI - 4.0));
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(7.0 * M_PI) == doctest::Approx(M_PI));
}

TEST_CASE("position control: pure gravity compensation at zero error") {
    FlightController fc(ControllerGains{}, kMass, kG);
    Setpoint sp;
    SensorSample meas;
    const Vec3 f = fc.position_control(sp, meas, kDt, false);
    CHECK(f(0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f(1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f(2) == doctest::Approx(-kMass * kG).epsilon(1e-9));
}

TEST_CASE("position control: proportional term") {
    FlightController fc(ControllerGains{}, kMass, kG);
    Setpoint sp;
    sp.position_des << 1.0, 0.0, 0.0;
    SensorSample meas;
    const Vec3 f = fc.position_control(sp, meas, 0.0, false);
    // m_hat * Kp * e = 2.405 * 2.0 * 1.0 = 4.81 N
    CHECK(f(0) == doctest::Approx(4.81).epsilon(1e-9));
}

TEST_CASE("position control: derivative term acts on velocity error") {
    FlightController fc(ControllerGains{}, kMass, kG);
    Setpoint sp;
    SensorSample meas;
    meas.velocity_meas << 0.0, -2.0, 0.0;
    const Vec3 f = fc.position_control(sp, meas, 0.0, false);
    CHECK(f(1) == doctest::Approx(kMass * 0.7 * 2.0).epsilon(1e-9));
}

TEST_CASE("position integrator: accumulation, freeze and clamp") {
    ControllerGains g;
    FlightController fc(g, kMass, kG);
    Setpoint sp;
    sp.position_des << 0.0, 0.0, -1.0;
    SensorSample meas;

    fc.position_control(sp, meas, 0.5, false);
    CHECK(fc.integrator()(2) == doctest::Approx(-0.5));

    // saturation flag freezes the state
    fc.position_control(sp, meas, 0.5, true);
    CHECK(fc.integrator()(2) == doctest::Approx(-0.5));

    // accumulates again once clear, clamped at the limit
    for (int i = 0; i < 100; ++i) fc.position_control(sp, meas, 0.5, false);
    CHECK(fc.integrator()(2) == doctest::Approx(-g.integrator_limit(2)));

    fc.reset();
    CHECK(fc.integrator().norm() == 0.0);
}

TEST_CASE("attitude control: PD on Euler error and gyro") {
    FlightController fc(ControllerGains{}, kMass, kG);
    Setpoint sp;
    SensorSample meas;
    meas.attitude_meas = Quat(Eigen::AngleAxisd(-0.1, Vec3::UnitY()));
    const Vec3 tau = fc.attitude_control(sp, meas);
    CHECK(tau(1) == doctest::Approx(2.0 * 0.1).epsilon(1e-9));  // Kp_pitch = 2.0

    meas = SensorSample{};
    meas.gyro << 0.5, 0.0, 0.0;
    const Vec3 tau2 = fc.attitude_control(sp, meas);
    CHECK(tau2(0) == doctest::Approx(-0.45 * 0.5).epsilon(1e-9));  // Kd_roll

    meas = SensorSample{};
    meas.attitude_meas = Quat(Eigen::AngleAxisd(0.2, Vec3::UnitZ()));
    const Vec3 tau3 = fc.attitude_control(sp, meas);
    CHECK(tau3(2) == doctest::Approx(-1.0 * 0.2).epsilon(1e-9));  // Kp_yaw
}

TEST_CASE("attitude error wraps across +-pi") {
    FlightController fc(ControllerGains{}, kMass, kG);
    Setpoint sp;
    sp.attitude_des << 0.0, 0.0, 3.0;
    SensorSample meas;
    meas.attitude_meas = Quat(Eigen::AngleAxisd(-3.0, Vec3::UnitZ()));
    const Vec3 tau = fc.attitude_control(sp, meas);
    // shortest path from -3.0 to +3.0 is -(2*pi - 6) rad
    CHECK(tau(2) == doctest::Approx(1.0 * (6.0 - 2.0 * M_PI)).epsilon(1e-9));
}

TEST_CASE("compose_wrench rotates the global force into the body frame") {
    const Vec3 f_global(1.0, 0.0, -23.6);
    const Vec3 tau(0.1, 0.2, 0.3);

    Wrench w = compose_wrench(f_global, tau, Quat::Identity());
    CHECK((w.force - f_global).norm() < 1e-12);
    CHECK((w.torque - tau).norm() < 1e-12);

    // yaw 90 deg: global x maps to body -y
    const Quat q_yaw(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitZ()));
    w = compose_wrench(Vec3(1.0, 0.0, 0.0), Vec3::Zero(), q_yaw);
    CHECK(w.force(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w.force(1) == doctest::Approx(-1.0).epsilon(1e-12));

    // pitch: gravity compensation gains a body-x component
    const Quat q_pitch(Eigen::AngleAxisd(0.1, Vec3::UnitY()));
    w = compose_wrench(Vec3(0.0, 0.0, -10.0), Vec3::Zero(), q_pitch);
    CHECK(w.force(0) == doctest::Approx(10.0 * std::sin(0.1)).epsilon(1e-12));
    CHECK(w.force(2) == doctest::Approx(-10.0 * std::cos(0.1)).epsilon(1e-12));
}

TEST_CASE("closed-loop point mass: step response settles without offset") {
    // 1-DOF z loop with a heavier true mass than the nominal one; the
    // integrator must absorb the weight difference.
    FlightController fc(ControllerGains{}, kMass, kG);
    const double m_true = kMass + 0.2;
    double z = 0.0, vz = 0.0;
    Setpoint sp;  // hold z = 0
    for (int i = 0; i < 30000; ++i) {
        SensorSample meas;
        meas.position_meas << 0.0, 0.0, z;
        meas.velocity_meas << 0.0, 0.0, vz;
        const Vec3 f = fc.position_control(sp, meas, kDt, false);
        const double az = f(2) / m_true + kG;
        vz += az * kDt;
        z += vz * kDt;
    }
    CHECK(std::abs(z) < 1e-4);
    CHECK(std::abs(vz) < 1e-5);
}

TEST_CASE("closed-loop attitude PD: damped return to level") {
    FlightController fc(ControllerGains{}, kMass, kG);
    const double j = 0.035;
    double theta = 0.3, omega = 0.0;
    Setpoint sp;
    double overshoot = 0.0;
    for (int i = 0; i < 10000; ++i) {
        SensorSample meas;
        meas.attitude_meas = Quat(Eigen::AngleAxisd(theta, Vec3::UnitX()));
        meas.gyro << omega, 0.0, 0.0;
        const Vec3 tau = fc.attitude_control(sp, meas);
        omega += tau(0) / j * 0.001;
        theta += omega * 0.001;
        overshoot = std::min(overshoot, theta);
    }
    CHECK(std::abs(theta) < 1e-6);
    CHECK(overshoot > -0.05);  // well damped
}
