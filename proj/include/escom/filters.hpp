#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace escom {

/// Second-order band-pass H(s) = (w0/Q)s / (s^2 + (w0/Q)s + w0^2),
/// discretized by bilinear transform with frequency prewarping at w0 so the
/// unit-gain-at-center invariant survives discretization exactly.
class BandPassFilter {
public:
    BandPassFilter() = default;
    BandPassFilter(double center_w, double q_factor, double dt)
        : center_w_(center_w), q_(q_factor) {
        if (!(center_w > 0.0 && q_factor > 0.0 && dt > 0.0))
            throw std::invalid_argument("BandPassFilter: need center_w, Q, dt > 0");
        const double w0 = center_w * dt;  // digital center frequency [rad/sample]
        if (w0 >= M_PI) throw std::invalid_argument("BandPassFilter: center above Nyquist");
        const double alpha = std::sin(w0) / (2.0 * q_factor);
        const double a0 = 1.0 + alpha;
        b0_ = alpha / a0;
        b2_ = -alpha / a0;
        a1_ = -2.0 * std::cos(w0) / a0;
        a2_ = (1.0 - alpha) / a0;
    }

    double step(double x) {
        // transposed direct form II
        const double y = b0_ * x + s1_;
        s1_ = -a1_ * y + s2_;
        s2_ = b2_ * x - a2_ * y;
        return y;
    }

    /// Magnitude of the discrete realization at angular frequency w [rad/s].
    double discrete_gain(double w, double dt) const {
        const std::complex<double> z = std::exp(std::complex<double>(0.0, w * dt));
        const std::complex<double> num = b0_ + b2_ / (z * z);
        const std::complex<double> den = 1.0 + a1_ / z + a2_ / (z * z);
        return std::abs(num / den);
    }

    /// Analytic |H(jw)| of the continuous prototype.
    static double analytic_gain(double center_w, double q_factor, double w) {
        const std::complex<double> s(0.0, w);
        const std::complex<double> num = (center_w / q_factor) * s;
        const std::complex<double> den = s * s + (center_w / q_factor) * s + center_w * center_w;
        return std::abs(num / den);
    }

    void reset() { s1_ = s2_ = 0.0; }
    double center_w() const { return center_w_; }
    double q_factor() const { return q_; }

private:
    double center_w_ = 0.0, q_ = 0.0;
    double b0_ = 0.0, b2_ = 0.0, a1_ = 0.0, a2_ = 0.0;
    double s1_ = 0.0, s2_ = 0.0;
};

/// First-order low-pass L(s) = w_c / (s + w_c), exact (zero-order-hold) pole
/// mapping, unit DC gain.
class LowPassFilter {
public:
    LowPassFilter() = default;
    LowPassFilter(double cutoff_w, double dt) : cutoff_w_(cutoff_w) {
        if (!(cutoff_w > 0.0 && dt > 0.0))
            throw std::invalid_argument("LowPassFilter: need cutoff, dt > 0");
        alpha_ = 1.0 - std::exp(-cutoff_w * dt);
    }

    double step(double x) {
        y_ += alpha_ * (x - y_);
        return y_;
    }

    void reset(double y0 = 0.0) { y_ = y0; }
    double value() const { return y_; }
    double cutoff_w() const { return cutoff_w_; }

private:
    double cutoff_w_ = 0.0;
    double alpha_ = 1.0;
    double y_ = 0.0;
};

}  // namespace escom
