#pragma once

#include <string>
#include <vector>

#include "escom/filters.hpp"
#include "escom/vehicle_model.hpp"

namespace escom {

enum class K3Source { TauX, NegTauY };

struct DitherConfig {
    double a1 = 0.3;  // [N]
    double a2 = 0.7;  // [N]
    double w1 = 5.0;  // [rad/s]
    double w2 = 3.0;  // [rad/s]
};

/// Dither force added to the body force command: x and y carry d1, z carries d2.
Vec3 dither(double t, const DitherConfig& cfg);

struct StabilityReport {
    bool ok = false;
    double delta_implied = 0.0;
    // per channel (x, y, z): eigenvalue real parts of the averaged-model B matrix
    Vec3 b_eig_real_slow = Vec3::Zero();
    Vec3 b_eig_real_fast = Vec3::Zero();
    std::vector<std::string> violations;
};

struct EstimatorConfig {
    DitherConfig dither;
    double q_factor = 20.0;
    double g1 = 1.5;              // z-channel integrator gain
    double g2 = 0.5;              // x/y-channel integrator gain
    double w_lowpass = 0.5;       // [rad/s]
    double w_deriv_smooth = 20.0; // [rad/s], smoothing of the gyro differentiator
    double delta_max = 0.35;      // smallness margin for validate_stability
    double clamp_box = 0.15;      // [m], estimate envelope per axis
    K3Source k3_source = K3Source::TauX;
    // Slow low-pass tracking the torque residual; the harness subtracts it
    // from the commanded torque so a constant CoM-offset disturbance cannot
    // accumulate into a hover tilt while the estimate is still converging.
    double w_trim = 0.5;       // [rad/s]
    double trim_limit = 0.8;   // [N m] per axis
    Mat3 inertia_est = (Eigen::Vector3d(0.035, 0.035, 0.045)).asDiagonal();
    double warmup_periods = 2.0;  // in periods of the slowest dither
};

/// Checks the positivity and smallness conditions of the estimator parameters
/// and the Hurwitz property of the averaged-model matrix per channel.
StabilityReport validate_stability(double g1, double g2, double w_lowpass,
                                   const DitherConfig& dither, double delta_max = 0.35);

/// Slow/fast eigenvalue real parts of B = [[0,-g'],[0.5*wl'*a^2, -wl']].
/// Returned in tau units; multiply by w_demod*delta for t units.
void averaged_model_eigs(double g_prime, double wl_prime, double amplitude,
                         double* slow_re, double* fast_re);

/// ESC-inspired model-free CoM estimator: dither-residual demodulation with
/// band-pass isolation, low-pass gradient extraction and slow integration.
class ComEstimator {
public:
    /// Refuses construction if validate_stability fails.
    ComEstimator(const EstimatorConfig& cfg, const Vec3& com_initial, double dt);

    /// Torque estimate from gyro differences through the smoothing low-pass.
    Vec3 estimate_applied_torque(const Vec3& gyro_now);

    /// One estimator tick from a torque residual sample at time t. Updates the
    /// estimate unless still in warm-up or frozen.
    void update(const Vec3& delta_torque, double t);

    /// Full tick from gyro + nominal torque. The nominal is passed through a
    /// low-pass identical to the differentiator smoothing so both sides of the
    /// residual carry the same phase at the dither frequencies.
    void update_from_measurements(const Vec3& gyro, const Vec3& torque_nominal, double t);

    const Vec3& com_estimate() const { return com_est_; }
    void set_com_estimate(const Vec3& v) { com_est_ = v; }
    const Vec3& gamma() const { return gamma_; }
    /// Slow-tracked residual DC; subtract from the commanded torque to keep
    /// hover level while the estimate converges. Active from the first tick.
    const Vec3& disturbance_trim() const { return trim_; }
    const Vec3& gradient() const { return v_; }
    const Vec3& k_filtered() const { return k_tilde_; }
    bool in_warmup() const { return warmup_; }
    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }
    const EstimatorConfig& config() const { return cfg_; }

private:
    EstimatorConfig cfg_;
    double dt_;
    double warmup_end_;
    bool warmup_ = true;
    bool frozen_ = false;
    Vec3 com_est_;
    BandPassFilter bp_[3];      // diag(H2, H2, H1)
    LowPassFilter lp_[3];       // gradient low-pass, cutoff w_lowpass
    LowPassFilter deriv_lp_[3]; // differentiator smoothing
    LowPassFilter trim_lp_[3];  // disturbance trim tracker
    LowPassFilter nominal_lp_[3];  // matches deriv_lp_ on the nominal torque
    Vec3 trim_ = Vec3::Zero();
    bool have_prev_gyro_ = false;
    Vec3 prev_gyro_ = Vec3::Zero();
    Vec3 gamma_ = Vec3::Zero();
    Vec3 v_ = Vec3::Zero();
    Vec3 k_tilde_ = Vec3::Zero();
};

/// Residual between estimated applied torque and the nominal (desired) torque.
inline Vec3 torque_residual(const Vec3& torque_hat, const Vec3& torque_nominal) {
    return torque_hat - torque_nominal;
}

/// Rearrangement of the torque residual feeding the per-axis channels.
Vec3 k_map(const Vec3& delta_torque, K3Source k3 = K3Source::TauX);

}  // namespace escom
