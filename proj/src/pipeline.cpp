#include "pdr/pipeline.hpp"

#include "pdr/errors.hpp"
#include "pdr/ins.hpp"
#include "pdr/mathcore.hpp"

#include <cmath>

namespace pdr {

const char* to_string(Variant v) {
    switch (v) {
        case Variant::Iez: return "iez";
        case Variant::IezClassicalQmd: return "iez-cqmd";
        default: return "aiez";
    }
}

Pipeline::Pipeline(const VariantConfig& cfg, bool has_mag)
    : cfg_(cfg),
      has_mag_(has_mag),
      b_ref_(cfg.detector.b_ref),
      shoe_(cfg.detector),
      qmd_(cfg.detector),
      cqmd_(cfg.detector),
      hdr_(cfg.hdr) {
    if (!has_mag_ && cfg_.variant != Variant::Iez) {
        throw DataError("variant requires magnetometer data, stream has none");
    }
}

void Pipeline::initialize(double t) {
    const double n = static_cast<double>(cfg_.detector.window);
    const Vec3 mean_acc = init_acc_sum_ / n;
    if (mean_acc.norm() <= 0.5 * cfg_.g) {
        throw DataError("stream must begin at rest: initialization window has no gravity");
    }
    const RollPitch rp = roll_pitch_from_accel(mean_acc, cfg_.g);

    double heading = 0.0;
    // IEZ never reads the magnetometer, including at startup; its trajectory
    // is defined up to a rotation about the origin.
    if (cfg_.variant != Variant::Iez && has_mag_) {
        const Vec3 mean_mag = init_mag_sum_ / n;
        heading = compass_heading(mean_mag, rp.roll, rp.pitch, cfg_.declination);
    }
    if (cfg_.b_ref_auto && has_mag_) {
        b_ref_ = init_mag_norm_sum_ / n;
    }

    state_ = NavState{};
    state_.q = rotmat_to_quat(rotmat_from_euler({rp.roll, rp.pitch, heading}));
    state_.t = t;
    cov_ = cfg_.noise.initial_covariance();
    initialized_ = true;
}

TrajectoryPoint Pipeline::emit(bool stance) const {
    TrajectoryPoint p;
    p.t = state_.t;
    p.r = state_.r;
    p.v = state_.v;
    p.euler = euler_from_rotmat(quat_to_rotmat(state_.q));
    p.stance = stance;
    if (cfg_.variant == Variant::Aiez) {
        p.qmd = trace_.qmd_flag;
    } else if (cfg_.variant == Variant::IezClassicalQmd) {
        p.qmd = trace_.cqmd_flag;
    }
    if (!trace_.stance) p.qmd.reset();
    p.heading_source = trace_.heading_source;
    return p;
}

TrajectoryPoint Pipeline::step(const ImuSample& sample) {
    if (sample_count_ > 0 && !(sample.t > prev_t_)) {
        throw DataError("non-monotone timestamps in sample stream");
    }
    ++sample_count_;

    trace_ = StepTrace{};
    shoe_.push(sample);
    if (has_mag_) cqmd_.push(sample.mag.norm());

    if (!initialized_) {
        init_acc_sum_ += sample.acc;
        init_mag_sum_ += sample.mag;
        init_mag_norm_sum_ += sample.mag.norm();
        state_.t = sample.t;
        if (sample_count_ == cfg_.detector.window) initialize(sample.t);
        prev_t_ = sample.t;
        return emit(false);
    }

    const double dt = sample.t - prev_t_;
    prev_t_ = sample.t;

    const auto [acc, gyro] = compensate(sample, state_);
    const NavState prior = state_;
    state_ = propagate(prior, acc, gyro, dt, cfg_.g);

    const Vec3 a_nav = quat_to_rotmat(state_.q) * acc;
    const Mat15 phi = build_phi(prior, a_nav, dt);
    cov_ = ekf_predict(cov_, phi, cfg_.noise.process_noise(dt));

    if (shoe_.ready()) trace_.shoe_T = shoe_.statistic();
    const bool stance = shoe_.ready() && is_stance(trace_.shoe_T, cfg_.detector);
    trace_.stance = stance;
    if (has_mag_ && cqmd_.ready()) {
        trace_.cqmd_var = cqmd_.variance();
        trace_.cqmd_flag = cqmd_.decide();
    }

    const EulerAngles pred = euler_from_rotmat(quat_to_rotmat(state_.q));
    trace_.psi_ins = pred.heading;

    if (stance) {
        std::optional<RollPitch> rp_acc;
        if (acc.norm() > 0.5 * cfg_.g) rp_acc = roll_pitch_from_accel(acc, cfg_.g);

        std::optional<RollPitch> att_err;
        if (rp_acc) {
            att_err = attitude_error_meas(pred.roll, pred.pitch, rp_acc->roll,
                                          rp_acc->pitch);
        }

        std::optional<double> psi_compass;
        if (has_mag_ && rp_acc) {
            try {
                psi_compass = compass_heading(sample.mag, rp_acc->roll,
                                              rp_acc->pitch, cfg_.declination);
            } catch (const NumericalError&) {
                // vertical/null field: no compass this sample
            }
        }
        trace_.psi_compass = psi_compass;

        if (psi_compass) {
            qmd_.push({std::abs(wrap_pi(pred.heading - *psi_compass)),
                       sample.mag.norm() - b_ref_});
        }
        if (qmd_.ready()) {
            trace_.qmd_T = qmd_.statistic();
            trace_.qmd_flag = qmd_.decide();
        }

        HeadingMeasurement heading_meas;  // None
        switch (cfg_.variant) {
            case Variant::Iez:
                break;
            case Variant::IezClassicalQmd:
                if (trace_.cqmd_flag.value_or(0) == 1 && psi_compass) {
                    heading_meas = compass_error_meas(pred.heading, *psi_compass,
                                                      cfg_.noise.compass_var);
                }
                break;
            case Variant::Aiez: {
                HeadingMeasurement hdr_meas = cfg_.hdr.per_sample
                                                  ? hdr_.update(pred.heading)
                                                  : hdr_.measure(pred.heading);
                HeadingMeasurement compass_meas;
                if (psi_compass) {
                    compass_meas = compass_error_meas(pred.heading, *psi_compass,
                                                      cfg_.noise.compass_var);
                }
                heading_meas = select_heading(trace_.qmd_flag.value_or(0),
                                              compass_meas, hdr_meas);
                break;
            }
        }
        trace_.heading_source = heading_meas.source;

        const Measurement meas = build_measurement(att_err, heading_meas,
                                                   state_.v, pred.heading,
                                                   cfg_.noise);
        auto [dx, cov_next] = ekf_update(cov_, meas);
        cov_ = cov_next;
        bool warn = false;
        state_ = inject_errors(state_, dx, &warn);
        if (warn) ++small_angle_warnings_;
        trace_.updated = true;

        if (!cfg_.hdr.per_sample) {
            const EulerAngles post = euler_from_rotmat(quat_to_rotmat(state_.q));
            stance_heading_sin_ += std::sin(post.heading);
            stance_heading_cos_ += std::cos(post.heading);
            ++stance_heading_n_;
        }
    } else if (prev_stance_ && !cfg_.hdr.per_sample && stance_heading_n_ > 0) {
        // Stance ended: record its mean filtered heading for HDR.
        hdr_.push(std::atan2(stance_heading_sin_, stance_heading_cos_));
        stance_heading_sin_ = stance_heading_cos_ = 0.0;
        stance_heading_n_ = 0;
    }
    prev_stance_ = stance;

    return emit(stance);
}

RunResult run(std::span<const ImuSample> stream, const VariantConfig& cfg,
              bool has_mag) {
    if (stream.empty()) throw DataError("empty sample stream");
    Pipeline pipe(cfg, has_mag);
    RunResult out;
    out.trajectory.reserve(stream.size());
    out.traces.reserve(stream.size());
    for (const auto& s : stream) {
        out.trajectory.push_back(pipe.step(s));
        out.traces.push_back(pipe.last_trace());
    }
    return out;
}

RunMetrics compute_metrics(const Trajectory& traj, double total_distance,
                           const Vec3& origin) {
    if (traj.empty()) throw DataError("empty trajectory");
    if (!(total_distance > 0.0)) throw ConfigError("total_distance must be positive");
    const Vec3 gap = traj.back().r - origin;
    RunMetrics m;
    m.final_position_error = std::hypot(gap.x(), gap.y());
    m.vertical_error = std::abs(gap.z());
    m.total_distance = total_distance;
    m.ttd_error_pct = 100.0 * m.final_position_error / total_distance;
    return m;
}

}  // namespace pdr
