#include "pdr/heading.hpp"

#include "pdr/errors.hpp"
#include "pdr/mathcore.hpp"

#include <cmath>

namespace pdr {

RollPitch roll_pitch_from_accel(const Vec3& a, double g) {
    if (a.norm() <= 0.5 * g) {
        throw NumericalError("roll_pitch_from_accel: low gravity, |a| <= 0.5 g");
    }
    RollPitch rp;
    rp.roll = std::atan2(a.y(), a.z());
    rp.pitch = -std::atan2(a.x(), std::sqrt(a.y() * a.y() + a.z() * a.z()));
    return rp;
}

RollPitch attitude_error_meas(double roll_pred, double pitch_pred,
                              double roll_acc, double pitch_acc) {
    return {wrap_pi(roll_pred - roll_acc), pitch_pred - pitch_acc};
}

double compass_heading(const Vec3& b, double roll, double pitch,
                       double declination) {
    const double cr = std::cos(roll), sr = std::sin(roll);
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double b_n = b.x() * cp + b.y() * sp * sr + b.z() * cr * sp;
    const double b_e = b.y() * cr - b.z() * sr;
    if (std::abs(b_n) < 1e-12 && std::abs(b_e) < 1e-12) {
        throw NumericalError("compass_heading: undefined heading, field is vertical or null");
    }
    return wrap_pi(std::atan2(b_e, b_n) + declination);
}

HeadingMeasurement compass_error_meas(double psi_pred, double psi_compass,
                                      double compass_var) {
    return {wrap_pi(psi_pred - psi_compass), compass_var, HeadingSource::Compass};
}

double HdrTracker::circular_mean() const {
    double s = 0.0, c = 0.0;
    for (double psi : history_) {
        s += std::sin(psi);
        c += std::cos(psi);
    }
    return std::atan2(s, c);
}

HeadingMeasurement HdrTracker::measure(double psi) const {
    if (!full()) return {0.0, 0.0, HeadingSource::None};
    const double dpsi = wrap_pi(psi - circular_mean());
    if (std::abs(dpsi) <= cfg_.xi) {
        return {dpsi, cfg_.hdr_var, HeadingSource::Hdr};  // straight path
    }
    if (!cfg_.curve_zero_innovation) {
        return {0.0, 0.0, HeadingSource::None};  // configured to skip the row
    }
    return {0.0, cfg_.hdr_var, HeadingSource::Hdr};  // curve path
}

void HdrTracker::push(double psi) {
    if (!full()) {
        history_.push_back(psi);
    } else {
        history_[head_] = psi;
        head_ = (head_ + 1) % history_.size();
    }
}

HeadingMeasurement HdrTracker::update(double psi) {
    HeadingMeasurement m = measure(psi);
    push(psi);
    return m;
}

HeadingMeasurement select_heading(int qmd, const HeadingMeasurement& compass,
                                  const HeadingMeasurement& hdr) {
    return qmd == 1 ? compass : hdr;
}

}  // namespace pdr
