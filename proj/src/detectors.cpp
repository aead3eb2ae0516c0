#include "pdr/detectors.hpp"

#include "pdr/errors.hpp"

#include <cmath>

namespace pdr {

double shoe_statistic(std::span<const ImuSample> window, const DetectorConfig& cfg) {
    const auto n = static_cast<double>(window.size());
    Vec3 mean_acc = Vec3::Zero();
    for (const auto& s : window) mean_acc += s.acc;
    mean_acc /= n;

    const double mean_norm = mean_acc.norm();
    if (mean_norm == 0.0) {
        throw NumericalError("shoe_statistic: degenerate window, zero mean acceleration");
    }
    const Vec3 grav = cfg.g * mean_acc / mean_norm;

    double sum = 0.0;
    for (const auto& s : window) {
        sum += (s.acc - grav).squaredNorm() / cfg.accel_noise_var;
        sum += s.gyro.squaredNorm() / cfg.gyro_noise_var;
    }
    return sum / n;
}

bool is_stance(double T, const DetectorConfig& cfg) {
    return T < cfg.shoe_threshold;
}

double qmd_statistic(std::span<const QmdObservation> window, const DetectorConfig& cfg) {
    double sum = 0.0;
    for (const auto& o : window) {
        sum += o.dpsi * o.dpsi / cfg.heading_diff_var;
        sum += o.b_dev * o.b_dev / cfg.field_mag_var;
    }
    return sum / static_cast<double>(window.size());
}

int qmd_decide(double T, const DetectorConfig& cfg) {
    return T < cfg.qmd_threshold ? 1 : 0;
}

namespace {

double sample_variance(std::span<const double> xs) {
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / (n - 1.0);
}

}  // namespace

int classical_qmd(std::span<const double> field_magnitudes, const DetectorConfig& cfg) {
    return sample_variance(field_magnitudes) < cfg.classical_threshold ? 1 : 0;
}

double SlidingClassicalQmd::variance() const {
    return sample_variance(win_.values());
}

std::vector<uint8_t> stance_labels(std::span<const ImuSample> samples,
                                   const DetectorConfig& cfg) {
    const size_t n = samples.size();
    const auto win = static_cast<size_t>(cfg.window);
    std::vector<uint8_t> labels(n, 0);
    if (n < win) return labels;
    for (size_t start = 0; start + win <= n; ++start) {
        const double T = shoe_statistic(samples.subspan(start, win), cfg);
        if (is_stance(T, cfg)) {
            for (size_t k = start; k < start + win; ++k) labels[k] = 1;
        }
    }
    return labels;
}

}  // namespace pdr
