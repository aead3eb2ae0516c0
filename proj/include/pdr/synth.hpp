#ifndef PDR_SYNTH_HPP
#define PDR_SYNTH_HPP

#include "pdr/types.hpp"

#include <random>
#include <span>
#include <vector>

namespace pdr {

struct GaitSpec {
    double step_length = 1.0;        // m, sensor-foot displacement per swing
    double step_duration = 1.0;      // s, swing + stance
    double stance_fraction = 0.6;    // in (0.2, 0.8)
    double swing_peak_height = 0.1;  // m
    double swing_pitch_max = 0.26179938779914941;  // rad (15 deg) foot pitch at mid-swing
    double cadence_jitter = 0.0;     // fractional step-duration perturbation
    uint64_t cadence_seed = 0;
    int turn_steps = 2;              // swings a turn is spread over, 1..3
};

struct PathSegment {
    bool is_turn = false;
    double value = 0.0;  // straight: length in m; turn: angle in rad (clockwise +)
};

struct PathSpec {
    std::vector<PathSegment> segments;
    bool closed = false;  // validated: footfalls must return to the origin
};

struct SensorErrorSpec {
    Vec3 gyro_bias = Vec3::Zero();   // rad/s
    Vec3 accel_bias = Vec3::Zero();  // m/s^2
    double gyro_noise_std = 0.0;     // rad/s, per sample
    double accel_noise_std = 0.0;    // m/s^2, per sample
    double mag_noise_std = 0.0;      // normalized units, per axis per sample
    uint64_t seed = 0;
};

struct MagDisturbance {
    enum class Type { HardOffset, Gradient };
    double s_begin = 0.0;  // m of walked arc length
    double s_end = 0.0;
    Type type = Type::HardOffset;
    Vec3 value = Vec3::Zero();  // offset (units) or gradient (units/m)
};

struct MagEnvSpec {
    // Reference field in the nav frame, normalized so |B| = 1; the vertical
    // component is negative in the z-up frame (field dips into the ground).
    Vec3 b_ref_vector{0.5, 0.0, -0.86602540378443871};
    std::vector<MagDisturbance> disturbances;
};

struct TruthSample {
    double t = 0.0;
    Vec3 r = Vec3::Zero();
    Vec3 v = Vec3::Zero();  // backward difference of r; exactly zero in stance
    Quat q{1.0, 0.0, 0.0, 0.0};
    bool stance = true;
    double arclen = 0.0;  // m walked along the path
};

/// Total ground-track length of a path (sum of straight segments).
double path_length(const PathSpec& path);

/// Ground-truth foot trajectory on the sample grid. Step boundaries are
/// snapped to the grid and velocities are defined as backward differences,
/// so stance samples carry exactly zero velocity and the stream integrates
/// back to itself under the semi-implicit mechanization. Turns are executed
/// during the swings of the following `turn_steps` steps.
std::vector<TruthSample> generate_truth(const PathSpec& path, const GaitSpec& gait,
                                        double rate_hz, double lead_in_s = 2.0,
                                        double lead_out_s = 2.0);

/// Noise-free IMU stream that reproduces the truth exactly under
/// ins::propagate from the true initial state (inverse mechanization).
/// The magnetometer channel is the clean body-frame projection of
/// b_ref_vector.
std::vector<ImuSample> ideal_imu(std::span<const TruthSample> truth,
                                 const Vec3& b_ref_vector, double g);

/// Add sensor biases, seeded Gaussian white noise, and the position-keyed
/// magnetic environment. With a zero error spec and no disturbances the
/// stream is returned bit-identical.
std::vector<ImuSample> corrupt(std::span<const ImuSample> ideal,
                               const SensorErrorSpec& err, const MagEnvSpec& env,
                               std::span<const TruthSample> truth);

/// Seeded standard-normal generator (explicit Box-Muller over mt19937_64, so
/// streams do not depend on the standard library's distribution internals).
class GaussianRng {
public:
    explicit GaussianRng(uint64_t seed) : rng_(seed) {}
    double uniform();  // [0, 1)
    double normal();

private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pdr

#endif  // PDR_SYNTH_HPP
