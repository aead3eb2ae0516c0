#ifndef PDR_TYPES_HPP
#define PDR_TYPES_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <vector>

namespace pdr {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;
using Vec15 = Eigen::Matrix<double, 15, 1>;
using Mat15 = Eigen::Matrix<double, 15, 15>;

// Error-state layout: [attitude, gyro bias, position, velocity, accel bias].
inline constexpr int kAttBlock = 0;
inline constexpr int kGyroBiasBlock = 3;
inline constexpr int kPosBlock = 6;
inline constexpr int kVelBlock = 9;
inline constexpr int kAccBiasBlock = 12;
inline constexpr int kStateDim = 15;

/// One timestamped IMU reading: specific force (m/s^2), angular rate (rad/s)
/// and magnetic field (normalized units), all in the body frame.
struct ImuSample {
    double t = 0.0;  // seconds, strictly increasing within a stream
    Vec3 acc = Vec3::Zero();
    Vec3 gyro = Vec3::Zero();
    Vec3 mag = Vec3::Zero();
};

/// Euler angles of the body-to-nav rotation. Roll in (-pi, pi], pitch in
/// [-pi/2, pi/2], heading in (-pi, pi] measured clockwise from North.
struct EulerAngles {
    double roll = 0.0;
    double pitch = 0.0;
    double heading = 0.0;
};

/// Full navigation state. q is the body-to-nav attitude; bias estimates are
/// accumulated across filter updates.
struct NavState {
    Quat q{1.0, 0.0, 0.0, 0.0};
    Vec3 v = Vec3::Zero();   // m/s, nav frame
    Vec3 r = Vec3::Zero();   // m, nav frame
    Vec3 bg = Vec3::Zero();  // rad/s, gyro bias estimate
    Vec3 ba = Vec3::Zero();  // m/s^2, accel bias estimate
    double t = 0.0;
};

enum class HeadingSource { None, Compass, Hdr };

const char* to_string(HeadingSource s);

/// A heading-error innovation with its variance and origin.
struct HeadingMeasurement {
    double dpsi = 0.0;  // rad, wrapped to (-pi, pi]
    double var = 0.0;   // rad^2, > 0 when source != None
    HeadingSource source = HeadingSource::None;
};

struct TrajectoryPoint {
    double t = 0.0;
    Vec3 r = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    EulerAngles euler;
    bool stance = false;
    std::optional<int> qmd;  // gate decision, present only when one was made
    HeadingSource heading_source = HeadingSource::None;
};

using Trajectory = std::vector<TrajectoryPoint>;

struct RunMetrics {
    double final_position_error = 0.0;  // m, horizontal loop-closure gap
    double vertical_error = 0.0;        // m, |z| channel reported separately
    double total_distance = 0.0;        // m
    double ttd_error_pct = 0.0;         // 100 * final_position_error / total_distance
};

}  // namespace pdr

#endif  // PDR_TYPES_HPP
