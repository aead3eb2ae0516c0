#ifndef PDR_HEADING_HPP
#define PDR_HEADING_HPP

#include "pdr/types.hpp"

#include <vector>

namespace pdr {

struct RollPitch {
    double roll = 0.0;
    double pitch = 0.0;
};

/// Roll and pitch from the gravity direction of a (near) static specific
/// force: roll = atan2(a_y, a_z), pitch = -atan2(a_x, sqrt(a_y^2 + a_z^2)).
/// Throws NumericalError when |a| <= 0.5 g (free-fall-like input).
RollPitch roll_pitch_from_accel(const Vec3& a, double g);

/// Roll/pitch error innovations for the filter: predicted minus measured,
/// roll wrapped to (-pi, pi].
RollPitch attitude_error_meas(double roll_pred, double pitch_pred,
                              double roll_acc, double pitch_acc);

/// Tilt-compensated magnetic heading:
///   B_N = B_x cos(p) + B_y sin(p) sin(r) + B_z cos(r) sin(p)
///   B_E = B_y cos(r) - B_z sin(r)
///   psi = atan2(B_E, B_N) + declination, wrapped to (-pi, pi].
/// Throws NumericalError when both horizontal components vanish.
double compass_heading(const Vec3& b_body, double roll, double pitch,
                       double declination);

/// Heading-error innovation from the compass.
HeadingMeasurement compass_error_meas(double psi_pred, double psi_compass,
                                      double compass_var);

struct HdrConfig {
    int window = 4;            // n, heading history length
    double xi = 0.034906585039886591;  // straight-path threshold, rad (2 deg)
    double hdr_var = 1.2184696791468346e-3;  // sigma_HDR^2, rad^2 (2 deg)
    bool per_sample = false;   // feed history every in-stance sample
    bool curve_zero_innovation = true;  // emit 0 on curves instead of skipping
};

/// Straight-path heading drift reduction. Keeps a ring of recent headings
/// (one per stance event by default) and compares the current heading with
/// their circular mean: within xi the difference is the innovation
/// (straight path), beyond xi the innovation is zero (curve path).
class HdrTracker {
public:
    explicit HdrTracker(const HdrConfig& cfg) : cfg_(cfg) {}

    /// Measurement against the current history; source None until the
    /// history holds `window` entries.
    HeadingMeasurement measure(double psi) const;

    /// Append a heading to the history.
    void push(double psi);

    /// measure() followed by push(): the one-shot per-sample form.
    HeadingMeasurement update(double psi);

    const HdrConfig& config() const { return cfg_; }
    bool full() const { return static_cast<int>(history_.size()) == cfg_.window; }

private:
    double circular_mean() const;

    HdrConfig cfg_;
    std::vector<double> history_;  // ring, <= window entries
    size_t head_ = 0;
};

/// The gate of the complementary correction: the quasi-static flag selects
/// exactly one heading source per cycle (1 -> compass, 0 -> HDR). A selected
/// source of None propagates as None and the heading row is dropped
/// downstream.
HeadingMeasurement select_heading(int qmd, const HeadingMeasurement& compass,
                                  const HeadingMeasurement& hdr);

}  // namespace pdr

#endif  // PDR_HEADING_HPP
