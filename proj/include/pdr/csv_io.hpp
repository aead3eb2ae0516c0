#ifndef PDR_CSV_IO_HPP
#define PDR_CSV_IO_HPP

#include "pdr/pipeline.hpp"
#include "pdr/synth.hpp"
#include "pdr/types.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pdr {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

struct ImuStream {
    std::vector<ImuSample> samples;
    bool has_mag = true;
};

/// Parse an IMU log. Lines starting with '#' are comments; the header row
/// must match the 10-column schema (or the 7-column magnetometer-free
/// variant). Malformed fields and non-monotone timestamps raise DataError
/// naming the line; gaps over twice the nominal period are flagged on
/// stderr.
ImuStream ingest(const std::string& path);
ImuStream ingest_stream(std::istream& in, const std::string& name);

void write_imu_csv(std::ostream& out, std::span<const ImuSample> samples,
                   bool has_mag = true);
void write_truth_csv(std::ostream& out, std::span<const TruthSample> truth);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Per-sample detector log of one run: the qmd columns carry the variant's
/// own gating detector (proposed GLRT for aiez, magnitude variance for
/// iez-cqmd, empty for iez).
void write_run_detector_csv(std::ostream& out, const Trajectory& traj,
                            std::span<const StepTrace> traces, Variant variant);

/// Full detection log: INS vs compass headings plus both detectors.
void write_detect_csv(std::ostream& out, const Trajectory& traj,
                      std::span<const StepTrace> traces);

void write_metrics_csv(std::ostream& out,
                       std::span<const std::pair<std::string, RunMetrics>> rows,
                       bool extended = false);

}  // namespace pdr

#endif  // PDR_CSV_IO_HPP
