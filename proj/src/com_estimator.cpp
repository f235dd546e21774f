#include "escom/com_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace escom {

Vec3 dither(double t, const DitherConfig& cfg) {
    const double d1 = cfg.a1 * std::sin(cfg.w1 * t);
    const double d2 = cfg.a2 * std::sin(cfg.w2 * t);
    return Vec3(d1, d1, d2);
}

void averaged_model_eigs(double g_prime, double wl_prime, double amplitude,
                         double* slow_re, double* fast_re) {
    // char. poly of B = [[0,-g'],[0.5*wl'*a^2,-wl']]:
    //   lambda^2 + wl'*lambda + 0.5*g'*wl'*a^2 = 0
    const double b = wl_prime;
    const double c = 0.5 * g_prime * wl_prime * amplitude * amplitude;
    const double disc = b * b - 4.0 * c;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        *slow_re = (-b + root) / 2.0;
        *fast_re = (-b - root) / 2.0;
    } else {
        *slow_re = *fast_re = -b / 2.0;
    }
}

StabilityReport validate_stability(double g1, double g2, double w_lowpass,
                                   const DitherConfig& dither_cfg, double delta_max) {
    StabilityReport rep;
    if (!(g1 > 0.0)) rep.violations.push_back("g1 must be > 0");
    if (!(g2 > 0.0)) rep.violations.push_back("g2 must be > 0");
    if (!(w_lowpass > 0.0)) rep.violations.push_back("w_lowpass must be > 0");
    if (!(dither_cfg.w1 > 0.0 && dither_cfg.w2 > 0.0))
        rep.violations.push_back("dither frequencies must be > 0");
    if (dither_cfg.w1 == dither_cfg.w2)
        rep.violations.push_back("dither frequencies must differ");
    if (!rep.violations.empty()) return rep;

    // Channel demodulation frequencies: x,y use w2, z uses w1.
    const double d_xy = std::max(g2 / dither_cfg.w2, w_lowpass / dither_cfg.w2);
    const double d_z = std::max(g1 / dither_cfg.w1, w_lowpass / dither_cfg.w1);
    rep.delta_implied = std::max(d_xy, d_z);
    if (rep.delta_implied > delta_max)
        rep.violations.push_back("smallness margin exceeded: implied delta " +
                                 std::to_string(rep.delta_implied) + " > " +
                                 std::to_string(delta_max));

    const double w_demod[3] = {dither_cfg.w2, dither_cfg.w2, dither_cfg.w1};
    const double gains[3] = {g2, g2, g1};
    const double amps[3] = {dither_cfg.a2, dither_cfg.a2, dither_cfg.a1};
    for (int i = 0; i < 3; ++i) {
        const double delta = std::max(gains[i] / w_demod[i], w_lowpass / w_demod[i]);
        const double gp = gains[i] / (w_demod[i] * delta);
        const double wlp = w_lowpass / (w_demod[i] * delta);
        averaged_model_eigs(gp, wlp, amps[i], &rep.b_eig_real_slow(i), &rep.b_eig_real_fast(i));
        if (!(rep.b_eig_real_slow(i) < 0.0 && rep.b_eig_real_fast(i) < 0.0))
            rep.violations.push_back("averaged-model B not Hurwitz on channel " +
                                     std::to_string(i));
    }
    rep.ok = rep.violations.empty();
    return rep;
}

Vec3 k_map(const Vec3& delta_torque, K3Source k3) {
    const double k3v = (k3 == K3Source::TauX) ? delta_torque(0) : -delta_torque(1);
    return Vec3(delta_torque(1), -delta_torque(0), k3v);
}

ComEstimator::ComEstimator(const EstimatorConfig& cfg, const Vec3& com_initial, double dt)
    : cfg_(cfg), dt_(dt), com_est_(com_initial) {
    const StabilityReport rep =
        validate_stability(cfg.g1, cfg.g2, cfg.w_lowpass, cfg.dither, cfg.delta_max);
    if (!rep.ok) {
        std::string msg = "ComEstimator: stability validation failed:";
        for (const auto& v : rep.violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
    bp_[0] = BandPassFilter(cfg.dither.w2, cfg.q_factor, dt);
    bp_[1] = BandPassFilter(cfg.dither.w2, cfg.q_factor, dt);
    bp_[2] = BandPassFilter(cfg.dither.w1, cfg.q_factor, dt);
    for (auto& f : lp_) f = LowPassFilter(cfg.w_lowpass, dt);
    for (auto& f : deriv_lp_) f = LowPassFilter(cfg.w_deriv_smooth, dt);
    for (auto& f : trim_lp_) f = LowPassFilter(cfg.w_trim, dt);
    for (auto& f : nominal_lp_) f = LowPassFilter(cfg.w_deriv_smooth, dt);
    const double slowest = std::min(cfg.dither.w1, cfg.dither.w2);
    warmup_end_ = cfg.warmup_periods * 2.0 * M_PI / slowest;
}

Vec3 ComEstimator::estimate_applied_torque(const Vec3& gyro_now) {
    Vec3 raw = Vec3::Zero();
    if (have_prev_gyro_) raw = cfg_.inertia_est * ((gyro_now - prev_gyro_) / dt_);
    prev_gyro_ = gyro_now;
    have_prev_gyro_ = true;
    Vec3 out;
    for (int i = 0; i < 3; ++i) out(i) = deriv_lp_[i].step(raw(i));
    return out;
}

void ComEstimator::update(const Vec3& delta_torque, double t) {
    warmup_ = t < warmup_end_;
    for (int i = 0; i < 3; ++i)
        trim_(i) = std::clamp(trim_lp_[i].step(delta_torque(i)), -cfg_.trim_limit,
                              cfg_.trim_limit);
    const Vec3 k = k_map(delta_torque, cfg_.k3_source);
    for (int i = 0; i < 3; ++i) k_tilde_(i) = bp_[i].step(k(i));
    const double d1 = cfg_.dither.a1 * std::sin(cfg_.dither.w1 * t);
    const double d2 = cfg_.dither.a2 * std::sin(cfg_.dither.w2 * t);
    gamma_ = Vec3(k_tilde_(0) * d2, k_tilde_(1) * d2, k_tilde_(2) * d1);
    for (int i = 0; i < 3; ++i) v_(i) = lp_[i].step(gamma_(i));
    if (warmup_ || frozen_) return;
    // Delta p_c integrates at -g*V; the estimate therefore moves at +g*V.
    com_est_ += dt_ * Vec3(cfg_.g2 * v_(0), cfg_.g2 * v_(1), cfg_.g1 * v_(2));
    com_est_ = com_est_.cwiseMax(-cfg_.clamp_box).cwiseMin(cfg_.clamp_box);
}

void ComEstimator::update_from_measurements(const Vec3& gyro, const Vec3& torque_nominal,
                                            double t) {
    const Vec3 torque_hat = estimate_applied_torque(gyro);
    Vec3 nominal_f;
    for (int i = 0; i < 3; ++i) nominal_f(i) = nominal_lp_[i].step(torque_nominal(i));
    update(torque_residual(torque_hat, nominal_f), t);
}

}  // namespace escom
