#ifndef PDR_DETECTORS_HPP
#define PDR_DETECTORS_HPP

#include "pdr/types.hpp"

#include <span>
#include <vector>

namespace pdr {

struct DetectorConfig {
    int window = 50;                  // N, samples (0.5 s at 100 Hz)
    double accel_noise_var = 4e-4;    // sigma_a^2, (m/s^2)^2
    double gyro_noise_var = 2.25e-6;  // sigma_g^2, (rad/s)^2
    double shoe_threshold = 30.0;     // gamma_shoe
    double heading_diff_var = 7.615435494667714e-3;  // sigma_dpsi^2, rad^2 (5 deg)
    double field_mag_var = 2.5e-3;    // sigma_B^2, normalized units^2 (0.05)
    double qmd_threshold = 3.0;       // gamma'
    double b_ref = 1.0;               // reference local field magnitude
    double classical_threshold = 5e-3;  // gamma_classic, magnitude-variance gate
    double g = 9.81;                  // m/s^2, used by the SHOE gravity term
};

/// One quasi-static-field observation: the absolute INS-vs-compass heading
/// difference (wrapped to [0, pi]) and the deviation of the measured field
/// magnitude from the calibrated reference.
struct QmdObservation {
    double dpsi = 0.0;   // rad, >= 0
    double b_dev = 0.0;  // normalized units, |B| - b_ref
};

/// SHOE stance test statistic over a window of N samples:
///   T = 1/N sum_k [ |a_k - g*mean_dir|^2 / sigma_a^2 + |w_k|^2 / sigma_g^2 ]
/// where mean_dir is the direction of the window-mean acceleration.
/// Throws NumericalError when the mean acceleration is zero.
double shoe_statistic(std::span<const ImuSample> window, const DetectorConfig& cfg);

/// Stance iff T < gamma_shoe (strict; ties reject).
bool is_stance(double T, const DetectorConfig& cfg);

/// GLRT statistic for quasi-static field detection:
///   T = 1/N sum_k [ dpsi_k^2 / sigma_dpsi^2 + b_dev_k^2 / sigma_B^2 ]
double qmd_statistic(std::span<const QmdObservation> window, const DetectorConfig& cfg);

/// 1 = pure magnetic field (H1) iff T < gamma' (strict), else 0 = disturbance.
int qmd_decide(double T, const DetectorConfig& cfg);

/// Classical magnitude-stability detector: 1 (pure field) iff the sample
/// variance of |B| over the window is below gamma_classic. Deliberately
/// blind to constant offsets.
int classical_qmd(std::span<const double> field_magnitudes, const DetectorConfig& cfg);

/// Offline per-sample stance labels: a sample is stance iff it is covered by
/// at least one accepted length-N window. This is the segmentation used to
/// score detectors against ground truth; the live pipeline labels causally
/// by the window ending at the current sample.
std::vector<uint8_t> stance_labels(std::span<const ImuSample> samples,
                                   const DetectorConfig& cfg);

/// Fixed-capacity ring holding the most recent window of values.
template <typename T>
class SlidingWindow {
public:
    explicit SlidingWindow(int capacity) : capacity_(capacity) {
        buf_.reserve(static_cast<size_t>(capacity));
    }

    void push(const T& value) {
        if (static_cast<int>(buf_.size()) < capacity_) {
            buf_.push_back(value);
        } else {
            buf_[head_] = value;
            head_ = (head_ + 1) % static_cast<size_t>(capacity_);
        }
    }

    bool full() const { return static_cast<int>(buf_.size()) == capacity_; }
    std::span<const T> values() const { return buf_; }  // unordered view

private:
    int capacity_;
    size_t head_ = 0;
    std::vector<T> buf_;
};

/// Causal SHOE evaluator over the trailing window of samples.
class SlidingShoe {
public:
    explicit SlidingShoe(const DetectorConfig& cfg) : cfg_(cfg), win_(cfg.window) {}
    void push(const ImuSample& s) { win_.push(s); }
    bool ready() const { return win_.full(); }
    double statistic() const { return shoe_statistic(win_.values(), cfg_); }
    bool stance() const { return ready() && is_stance(statistic(), cfg_); }

private:
    DetectorConfig cfg_;
    SlidingWindow<ImuSample> win_;
};

/// Causal proposed-QMD evaluator over the trailing window of observations.
class SlidingQmd {
public:
    explicit SlidingQmd(const DetectorConfig& cfg) : cfg_(cfg), win_(cfg.window) {}
    void push(const QmdObservation& o) { win_.push(o); }
    bool ready() const { return win_.full(); }
    double statistic() const { return qmd_statistic(win_.values(), cfg_); }
    int decide() const { return qmd_decide(statistic(), cfg_); }

private:
    DetectorConfig cfg_;
    SlidingWindow<QmdObservation> win_;
};

/// Causal classical-QMD evaluator over the trailing window of |B| values.
class SlidingClassicalQmd {
public:
    explicit SlidingClassicalQmd(const DetectorConfig& cfg) : cfg_(cfg), win_(cfg.window) {}
    void push(double mag) { win_.push(mag); }
    bool ready() const { return win_.full(); }
    double variance() const;
    int decide() const { return classical_qmd(win_.values(), cfg_); }

private:
    DetectorConfig cfg_;
    SlidingWindow<double> win_;
};

}  // namespace pdr

#endif  // PDR_DETECTORS_HPP
