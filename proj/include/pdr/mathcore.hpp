#ifndef PDR_MATHCORE_HPP
#define PDR_MATHCORE_HPP

#include "pdr/types.hpp"

namespace pdr {

// Frame and sign conventions, inherited by every other module:
//
//  * Navigation frame: x = North, y = the horizontal axis the compass
//    equations call "East", z chosen so a level stationary accelerometer
//    reads (0, 0, +g).
//  * Heading psi is measured clockwise from North; psi = atan2(B_E, B_N).
//  * Quaternions are Hamilton (w, x, y, z) and encode the body-to-nav
//    attitude; quat_to_rotmat returns C_b^n.
//  * small_angle_skew is the NEGATIVE of skew3. The sign is load-bearing
//    for the attitude-error correction and is pinned by tests.

/// Wrap an angle to (-pi, pi].
double wrap_pi(double angle);

/// Conventional skew-symmetric matrix: skew3(v) * w == v x w.
Mat3 skew3(const Vec3& v);

/// Skew matrix for small attitude-error angles. Equals -skew3(dphi):
///   [ 0        dphi_z  -dphi_y ]
///   [-dphi_z   0        dphi_x ]
///   [ dphi_y  -dphi_x   0      ]
Mat3 small_angle_skew(const Vec3& dphi);

/// 4x4 angular-rate matrix driving quaternion kinematics, acting on the
/// quaternion stored as the column (w, x, y, z). Antisymmetric.
Mat4 omega4(const Vec3& w);

/// Propagate attitude over dt at constant body rate w, using the closed-form
/// exponential of 0.5 * omega4(w) * dt (cos/sinc decomposition). The result
/// is renormalized; w = 0 returns q unchanged.
Quat quat_propagate(const Quat& q, const Vec3& w, double dt);

/// Body-to-nav rotation matrix of a unit quaternion.
Mat3 quat_to_rotmat(const Quat& q);

/// Inverse of quat_to_rotmat up to sign (Shepperd's method).
Quat rotmat_to_quat(const Mat3& C);

/// Apply a small attitude-error correction to a rotation via the Cayley
/// transform (2I + dTheta)(2I - dTheta)^-1 * C with
/// dTheta = small_angle_skew(dphi). The Cayley factor is exactly orthogonal,
/// so the result stays a rotation at machine precision. Agrees with the
/// exact exponential to O(|dphi|^3); intended for |dphi| < 0.3 rad.
Mat3 pade_attitude_correct(const Mat3& C, const Vec3& dphi);

/// Build C_b^n from Euler angles (yaw-pitch-roll order). The transpose
/// projects nav vectors into the body frame; in particular
/// rotmat_from_euler(e).transpose() * (0,0,g) reproduces the gravity
/// column g * (-sin(pitch), sin(roll)cos(pitch), cos(roll)cos(pitch)).
Mat3 rotmat_from_euler(const EulerAngles& e);

/// Extract Euler angles from C_b^n. Throws NumericalError when pitch is
/// within 1e-6 rad of +-pi/2 (degenerate attitude).
EulerAngles euler_from_rotmat(const Mat3& C);

}  // namespace pdr

#endif  // PDR_MATHCORE_HPP
