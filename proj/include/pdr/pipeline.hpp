#ifndef PDR_PIPELINE_HPP
#define PDR_PIPELINE_HPP

#include "pdr/detectors.hpp"
#include "pdr/ekf.hpp"
#include "pdr/heading.hpp"
#include "pdr/types.hpp"

#include <limits>
#include <span>

namespace pdr {

enum class Variant { Iez, IezClassicalQmd, Aiez };

const char* to_string(Variant v);

struct VariantConfig {
    Variant variant = Variant::Aiez;
    DetectorConfig detector;
    NoiseConfig noise;
    HdrConfig hdr;
    double declination = 0.0;  // rad
    double g = 9.81;           // m/s^2
    bool b_ref_auto = false;   // estimate b_ref from the initialization window
};

/// Per-sample detector/selection record, alongside the trajectory point.
struct StepTrace {
    double shoe_T = std::numeric_limits<double>::quiet_NaN();
    bool stance = false;
    std::optional<double> qmd_T;      // proposed GLRT statistic
    std::optional<int> qmd_flag;      // 1 = pure field, 0 = disturbance
    std::optional<double> cqmd_var;   // classical |B| variance
    std::optional<int> cqmd_flag;
    std::optional<double> psi_ins;      // predicted heading, rad
    std::optional<double> psi_compass;  // rad
    HeadingSource heading_source = HeadingSource::None;
    bool updated = false;  // an EKF update ran this sample
};

/// One estimator variant over one sample stream: mechanize every sample; on
/// stance build the gated measurement stack, update and inject. The first
/// detector-window worth of samples initializes attitude (accelerometer
/// roll/pitch plus, except for IEZ, the compass heading), so streams must
/// begin at rest.
class Pipeline {
public:
    explicit Pipeline(const VariantConfig& cfg, bool has_mag = true);

    TrajectoryPoint step(const ImuSample& sample);

    const StepTrace& last_trace() const { return trace_; }
    const NavState& state() const { return state_; }
    const Mat15& covariance() const { return cov_; }
    bool initialized() const { return initialized_; }
    double b_ref() const { return b_ref_; }
    int small_angle_warnings() const { return small_angle_warnings_; }

private:
    void initialize(double t);
    TrajectoryPoint emit(bool stance) const;

    VariantConfig cfg_;
    bool has_mag_;
    double b_ref_;

    SlidingShoe shoe_;
    SlidingQmd qmd_;
    SlidingClassicalQmd cqmd_;
    HdrTracker hdr_;

    NavState state_;
    Mat15 cov_ = Mat15::Zero();
    StepTrace trace_;

    bool initialized_ = false;
    long sample_count_ = 0;
    double prev_t_ = 0.0;
    Vec3 init_acc_sum_ = Vec3::Zero();
    Vec3 init_mag_sum_ = Vec3::Zero();
    double init_mag_norm_sum_ = 0.0;

    bool prev_stance_ = false;
    double stance_heading_sin_ = 0.0;
    double stance_heading_cos_ = 0.0;
    long stance_heading_n_ = 0;
    int small_angle_warnings_ = 0;
};

struct RunResult {
    Trajectory trajectory;
    std::vector<StepTrace> traces;
};

/// Run one variant over a time-ordered stream. Deterministic: identical
/// stream and config produce identical output.
RunResult run(std::span<const ImuSample> stream, const VariantConfig& cfg,
              bool has_mag = true);

/// Loop-closure metrics: horizontal final-position error against the origin,
/// the vertical channel reported separately, and the error as a percentage
/// of total travelled distance.
RunMetrics compute_metrics(const Trajectory& traj, double total_distance,
                           const Vec3& origin);

}  // namespace pdr

#endif  // PDR_PIPELINE_HPP
