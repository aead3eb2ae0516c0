#include "pdr/ekf.hpp"

#include "pdr/errors.hpp"
#include "pdr/mathcore.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace pdr {

Mat15 NoiseConfig::process_noise(double dt) const {
    Mat15 q = Mat15::Zero();
    const double att = gyro_noise_std * dt;
    const double vel = accel_noise_std * dt;
    q.block<3, 3>(kAttBlock, kAttBlock) = att * att * Mat3::Identity();
    q.block<3, 3>(kGyroBiasBlock, kGyroBiasBlock) =
        gyro_bias_walk * gyro_bias_walk * dt * Mat3::Identity();
    q.block<3, 3>(kVelBlock, kVelBlock) = vel * vel * Mat3::Identity();
    q.block<3, 3>(kAccBiasBlock, kAccBiasBlock) =
        accel_bias_walk * accel_bias_walk * dt * Mat3::Identity();
    return q;
}

Mat15 NoiseConfig::initial_covariance() const {
    Mat15 p = Mat15::Zero();
    p(kAttBlock + 0, kAttBlock + 0) = init.att_std * init.att_std;
    p(kAttBlock + 1, kAttBlock + 1) = init.att_std * init.att_std;
    p(kAttBlock + 2, kAttBlock + 2) = init.heading_std * init.heading_std;
    p.block<3, 3>(kGyroBiasBlock, kGyroBiasBlock) =
        init.gyro_bias_std * init.gyro_bias_std * Mat3::Identity();
    p.block<3, 3>(kPosBlock, kPosBlock) =
        init.pos_std * init.pos_std * Mat3::Identity();
    p.block<3, 3>(kVelBlock, kVelBlock) =
        init.vel_std * init.vel_std * Mat3::Identity();
    p.block<3, 3>(kAccBiasBlock, kAccBiasBlock) =
        init.accel_bias_std * init.accel_bias_std * Mat3::Identity();
    return p;
}

Mat15 build_phi(const NavState& state, const Vec3& a_n, double dt) {
    const Mat3 c_bn = quat_to_rotmat(state.q);
    Mat15 phi = Mat15::Identity();
    phi.block<3, 3>(kAttBlock, kGyroBiasBlock) = dt * c_bn;
    phi.block<3, 3>(kPosBlock, kVelBlock) = dt * Mat3::Identity();
    phi.block<3, 3>(kVelBlock, kAttBlock) = -dt * skew3(a_n);
    phi.block<3, 3>(kVelBlock, kAccBiasBlock) = dt * c_bn;
    return phi;
}

Mat15 ekf_predict(const Mat15& P, const Mat15& Phi, const Mat15& Q) {
    Mat15 p = Phi * P * Phi.transpose() + Q;
    return 0.5 * (p + p.transpose());
}

Measurement build_measurement(const std::optional<RollPitch>& att_err,
                              const HeadingMeasurement& heading,
                              const std::optional<Vec3>& vel_resid,
                              double psi_pred, const NoiseConfig& noise) {
    int rows = 0;
    if (att_err) rows += 2;
    if (heading.source != HeadingSource::None) rows += 1;
    if (vel_resid) rows += 3;
    if (rows == 0) throw DataError("build_measurement: empty measurement set");

    Measurement m;
    m.z = Eigen::VectorXd::Zero(rows);
    m.H = Eigen::MatrixXd::Zero(rows, kStateDim);
    m.r_diag = Eigen::VectorXd::Zero(rows);

    const double ch = std::cos(psi_pred), sh = std::sin(psi_pred);
    int row = 0;
    if (att_err) {
        // Euler-space roll/pitch innovations against the nav-frame attitude
        // error vector; the axes rotate with the predicted heading.
        m.z(row) = att_err->roll;
        m.H(row, kAttBlock + 0) = ch;
        m.H(row, kAttBlock + 1) = -sh;
        m.r_diag(row) = noise.roll_var;
        ++row;
        m.z(row) = att_err->pitch;
        m.H(row, kAttBlock + 0) = sh;
        m.H(row, kAttBlock + 1) = ch;
        m.r_diag(row) = noise.pitch_var;
        ++row;
    }
    if (heading.source != HeadingSource::None) {
        // Heading is clockwise-positive while the z error angle is
        // right-handed about +z, hence the -1.
        m.z(row) = heading.dpsi;
        m.H(row, kAttBlock + 2) = -1.0;
        m.r_diag(row) = heading.var;
        ++row;
    }
    if (vel_resid) {
        for (int i = 0; i < 3; ++i) {
            m.z(row) = (*vel_resid)(i);
            m.H(row, kVelBlock + i) = 1.0;
            m.r_diag(row) = noise.zupt_var;
            ++row;
        }
    }
    return m;
}

std::pair<Vec15, Mat15> ekf_update(const Mat15& P, const Measurement& meas) {
    const Eigen::MatrixXd& h = meas.H;
    Eigen::MatrixXd s = h * P * h.transpose();
    s.diagonal() += meas.r_diag;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        throw NumericalError("ekf_update: innovation covariance is singular");
    }

    const Eigen::MatrixXd k = ldlt.solve(h * P).transpose();  // P H^T S^-1
    const Vec15 dx = k * meas.z;

    const Mat15 ikh = Mat15::Identity() - k * h;
    Mat15 p = ikh * P * ikh.transpose() +
              k * meas.r_diag.asDiagonal() * k.transpose();
    return {dx, 0.5 * (p + p.transpose())};
}

NavState inject_errors(const NavState& state, const Vec15& dx,
                       bool* small_angle_exceeded) {
    const Vec3 dphi = dx.segment<3>(kAttBlock);
    if (small_angle_exceeded) *small_angle_exceeded = dphi.norm() >= 0.3;

    NavState out = state;
    out.q = rotmat_to_quat(pade_attitude_correct(quat_to_rotmat(state.q), dphi));
    out.bg = state.bg + dx.segment<3>(kGyroBiasBlock);
    out.r = state.r - dx.segment<3>(kPosBlock);
    out.v = state.v - dx.segment<3>(kVelBlock);
    out.ba = state.ba + dx.segment<3>(kAccBiasBlock);
    return out;
}

}  // namespace pdr
