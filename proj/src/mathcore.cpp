#include "pdr/mathcore.hpp"

#include "pdr/errors.hpp"

#include <cmath>

namespace pdr {

const char* to_string(HeadingSource s) {
    switch (s) {
        case HeadingSource::Compass: return "Compass";
        case HeadingSource::Hdr: return "HDR";
        default: return "None";
    }
}

double wrap_pi(double angle) {
    double w = std::remainder(angle, 2.0 * M_PI);
    if (w <= -M_PI) w += 2.0 * M_PI;  // remainder may return exactly -pi
    return w;
}

Mat3 skew3(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

Mat3 small_angle_skew(const Vec3& dphi) {
    Mat3 m;
    m << 0.0, dphi.z(), -dphi.y(),
        -dphi.z(), 0.0, dphi.x(),
         dphi.y(), -dphi.x(), 0.0;
    return m;
}

Mat4 omega4(const Vec3& w) {
    Mat4 m;
    m << 0.0, -w.x(), -w.y(), -w.z(),
         w.x(), 0.0, w.z(), -w.y(),
         w.y(), -w.z(), 0.0, w.x(),
         w.z(), w.y(), -w.x(), 0.0;
    return m;
}

Quat quat_propagate(const Quat& q, const Vec3& w, double dt) {
    const double rate = w.norm();
    if (rate == 0.0) return q;

    // omega4(w)^2 = -|w|^2 I, so the exponential splits into
    // cos(a) I + sin(a)/|w| * omega4(w) with a = |w| dt / 2.
    const double a = 0.5 * rate * dt;
    const double c = std::cos(a);
    double s_over_rate;
    if (a < 1e-8) {
        s_over_rate = 0.5 * dt * (1.0 - a * a / 6.0);
    } else {
        s_over_rate = std::sin(a) / rate;
    }

    Eigen::Vector4d qv(q.w(), q.x(), q.y(), q.z());
    Eigen::Vector4d out = c * qv + s_over_rate * (omega4(w) * qv);
    Quat qn(out(0), out(1), out(2), out(3));
    qn.normalize();
    return qn;
}

Mat3 quat_to_rotmat(const Quat& q) {
    return q.normalized().toRotationMatrix();
}

Quat rotmat_to_quat(const Mat3& C) {
    const double trace = C.trace();
    double w, x, y, z;
    if (trace > 0.0) {
        double s = 0.5 / std::sqrt(trace + 1.0);
        w = 0.25 / s;
        x = (C(2, 1) - C(1, 2)) * s;
        y = (C(0, 2) - C(2, 0)) * s;
        z = (C(1, 0) - C(0, 1)) * s;
    } else if (C(0, 0) > C(1, 1) && C(0, 0) > C(2, 2)) {
        double s = 2.0 * std::sqrt(1.0 + C(0, 0) - C(1, 1) - C(2, 2));
        w = (C(2, 1) - C(1, 2)) / s;
        x = 0.25 * s;
        y = (C(0, 1) + C(1, 0)) / s;
        z = (C(0, 2) + C(2, 0)) / s;
    } else if (C(1, 1) > C(2, 2)) {
        double s = 2.0 * std::sqrt(1.0 + C(1, 1) - C(0, 0) - C(2, 2));
        w = (C(0, 2) - C(2, 0)) / s;
        x = (C(0, 1) + C(1, 0)) / s;
        y = 0.25 * s;
        z = (C(1, 2) + C(2, 1)) / s;
    } else {
        double s = 2.0 * std::sqrt(1.0 + C(2, 2) - C(0, 0) - C(1, 1));
        w = (C(1, 0) - C(0, 1)) / s;
        x = (C(0, 2) + C(2, 0)) / s;
        y = (C(1, 2) + C(2, 1)) / s;
        z = 0.25 * s;
    }
    Quat q(w, x, y, z);
    q.normalize();
    return q;
}

Mat3 pade_attitude_correct(const Mat3& C, const Vec3& dphi) {
    const Mat3 dtheta = small_angle_skew(dphi);
    const Mat3 lhs = 2.0 * Mat3::Identity() + dtheta;
    const Mat3 rhs = 2.0 * Mat3::Identity() - dtheta;
    // rhs is always invertible: the eigenvalues of a real skew matrix are
    // imaginary, so det(2I - dtheta) = 4 + |dphi|^2 > 0.
    return lhs * rhs.inverse() * C;
}

Mat3 rotmat_from_euler(const EulerAngles& e) {
    const double cr = std::cos(e.roll), sr = std::sin(e.roll);
    const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
    const double ch = std::cos(e.heading), sh = std::sin(e.heading);

    // C_n^b = M_x(roll) * M_y(pitch) * M_z(heading); heading rotates in the
    // opposite sense to roll/pitch so that the clockwise compass convention
    // and the gravity projection column come out consistent.
    Mat3 mx, my, mz;
    mx << 1.0, 0.0, 0.0,
          0.0, cr, sr,
          0.0, -sr, cr;
    my << cp, 0.0, -sp,
          0.0, 1.0, 0.0,
          sp, 0.0, cp;
    mz << ch, -sh, 0.0,
          sh, ch, 0.0,
          0.0, 0.0, 1.0;
    return (mx * my * mz).transpose();  // C_b^n
}

EulerAngles euler_from_rotmat(const Mat3& C) {
    const double s_pitch = -C(2, 0);
    if (std::abs(s_pitch) > std::cos(1e-6)) {
        throw NumericalError("euler_from_rotmat: degenerate attitude, pitch within 1e-6 of +-pi/2");
    }
    EulerAngles e;
    e.pitch = std::asin(s_pitch);
    // atan2 can return exactly -pi; the contract range is (-pi, pi].
    e.roll = wrap_pi(std::atan2(C(2, 1), C(2, 2)));
    e.heading = wrap_pi(std::atan2(-C(1, 0), C(0, 0)));
    return e;
}

}  // namespace pdr
