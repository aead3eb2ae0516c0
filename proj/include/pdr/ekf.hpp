#ifndef PDR_EKF_HPP
#define PDR_EKF_HPP

#include "pdr/heading.hpp"
#include "pdr/types.hpp"

#include <optional>

namespace pdr {

struct InitUncertainty {
    double att_std = 1.7453292519943295e-2;      // rad (1 deg), roll/pitch
    double heading_std = 8.7266462599716477e-2;  // rad (5 deg)
    double gyro_bias_std = 1e-3;                 // rad/s
    double accel_bias_std = 1e-2;                // m/s^2
    double vel_std = 0.01;                       // m/s
    double pos_std = 1e-4;                       // m
};

struct NoiseConfig {
    // Process noise, per-sample white-noise sigmas at the nominal rate and
    // bias random-walk densities (per sqrt(s)).
    double gyro_noise_std = 1.5e-3;    // rad/s
    double accel_noise_std = 2e-2;     // m/s^2
    double gyro_bias_walk = 5e-6;      // rad/s/sqrt(s)
    double accel_bias_walk = 5e-5;     // m/s^2/sqrt(s)

    // Measurement noise variances.
    double roll_var = 3.0461741978670857e-4;     // rad^2 (1 deg)
    double pitch_var = 3.0461741978670857e-4;    // rad^2 (1 deg)
    double compass_var = 7.6154354946677142e-3;  // rad^2 (5 deg)
    double hdr_var = 1.2184696791468346e-3;      // rad^2 (2 deg)
    double zupt_var = 1e-4;                      // (m/s)^2 (0.01 m/s), per axis

    InitUncertainty init;

    /// Diagonal per-step process noise: attitude/velocity blocks scale with
    /// dt^2 (integrated white noise), bias blocks with dt (random walk); the
    /// position block is driven through velocity only.
    Mat15 process_noise(double dt) const;

    /// Diagonal initial covariance from the init sigmas.
    Mat15 initial_covariance() const;
};

/// Discrete error-state transition matrix for one step of length dt:
/// identity diagonal, dphi <- gyro-bias coupling dt*C_b^n,
/// dr <- dv coupling dt*I, dv <- dphi coupling -dt*[a_n x],
/// dv <- accel-bias coupling dt*C_b^n. The attitude is taken from `state`
/// (pre-propagation); a_n is the compensated specific force in the nav frame.
Mat15 build_phi(const NavState& state, const Vec3& a_n, double dt);

/// Covariance prediction P' = Phi P Phi^T + Q, re-symmetrized.
Mat15 ekf_predict(const Mat15& P, const Mat15& Phi, const Mat15& Q);

/// A stacked measurement: z (m x 1), H (m x 15), R diagonal (m x 1).
struct Measurement {
    Eigen::VectorXd z;
    Eigen::MatrixXd H;
    Eigen::VectorXd r_diag;
    int rows() const { return static_cast<int>(z.size()); }
};

/// Assemble the stance-phase measurement from its optional parts:
/// roll/pitch innovations, a gated heading innovation and the ZUPT velocity
/// residual. psi_pred supplies the heading-dependent rotation of the
/// attitude rows: the roll/pitch innovations live in Euler space while the
/// error state is a nav-frame rotation vector, and the clockwise heading
/// convention makes the heading row carry a negative sign. At psi_pred = 0
/// the attitude block reduces to diag(1, 1, -1).
/// A heading source of None omits the heading row; with no rows at all a
/// DataError is thrown.
Measurement build_measurement(const std::optional<RollPitch>& att_err,
                              const HeadingMeasurement& heading,
                              const std::optional<Vec3>& vel_resid,
                              double psi_pred, const NoiseConfig& noise);

/// Joseph-form update. Returns the error-state estimate K z and the updated
/// covariance (I - KH) P (I - KH)^T + K R K^T, re-symmetrized.
/// Throws NumericalError when the innovation covariance is not positive
/// definite.
std::pair<Vec15, Mat15> ekf_update(const Mat15& P, const Measurement& meas);

/// Feed an error-state estimate back into the navigation state: attitude by
/// the Cayley correction, position/velocity subtracted, biases accumulated.
/// The caller owns zeroing the error state afterwards. When |dphi| exceeds
/// the small-angle validity (0.3 rad) the correction is still applied and
/// *small_angle_exceeded is set.
NavState inject_errors(const NavState& state, const Vec15& dx,
                       bool* small_angle_exceeded = nullptr);

}  // namespace pdr

#endif  // PDR_EKF_HPP
