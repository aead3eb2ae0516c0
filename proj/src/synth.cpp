#include "pdr/synth.hpp"

#include "pdr/errors.hpp"
#include "pdr/mathcore.hpp"

#include <algorithm>
#include <cmath>

namespace pdr {

double GaussianRng::uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GaussianRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

namespace {

// Swing progress profile with zero velocity and acceleration at both ends
// and an extra-flat landing (s' = 60 t^2 (1-t)^3): the touchdown transient
// then sits on the last airborne sample instead of bleeding into stance.
double swing_progress(double tau) {
    return tau * tau * tau * (20.0 + tau * (-45.0 + tau * (36.0 - 10.0 * tau)));
}

// Matching bump (~t^3 (1-t)^4), peak 1 at tau = 3/7: sharp lift-off, soft
// touchdown.
double swing_bump(double tau) {
    const double r = 1.0 - tau;
    const double t3 = tau * tau * tau;
    const double r4 = r * r * r * r;
    return (823543.0 / 6912.0) * t3 * r4;
}

// Travel direction for a clockwise-from-North heading.
Vec3 heading_dir(double psi) {
    return {std::cos(psi), -std::sin(psi), 0.0};
}

struct Footfall {
    Vec3 pos;
    double heading;  // heading held during the following stance
    double arclen;
    int segment;     // index of the straight segment the step moved along
};

std::vector<Footfall> plan_footfalls(const PathSpec& path, const GaitSpec& gait) {
    std::vector<Footfall> steps;
    Vec3 pos = Vec3::Zero();
    double heading = 0.0;
    double arclen = 0.0;
    int seg_index = 0;

    // Footfall positions follow the path polyline exactly; per-step target
    // headings are the segment headings, eased below.
    std::vector<double> seg_heading;
    for (const auto& seg : path.segments) {
        if (seg.is_turn) {
            heading = wrap_pi(heading + seg.value);
            continue;
        }
        double remaining = seg.value;
        const Vec3 dir = heading_dir(heading);
        while (remaining > 1e-9) {
            const double step = std::min(gait.step_length, remaining);
            pos += dir * step;
            arclen += step;
            remaining -= step;
            steps.push_back({pos, heading, arclen, seg_index});
        }
        ++seg_index;
    }
    if (steps.empty()) throw ConfigError("path has zero total length");

    // Ease heading changes over the swings of up to turn_steps footfalls.
    const int turn_steps = std::clamp(gait.turn_steps, 1, 3);
    double cur = steps.front().heading;
    int ramp_left = 0;
    double ramp_step = 0.0;
    int last_seg = steps.front().segment;
    for (auto& f : steps) {
        if (f.segment != last_seg) {
            last_seg = f.segment;
            const int k = turn_steps;
            ramp_left = k;
            ramp_step = wrap_pi(f.heading - cur) / k;
        }
        if (ramp_left > 0) {
            cur = wrap_pi(cur + ramp_step);
            --ramp_left;
        }
        const double target = f.heading;
        f.heading = ramp_left > 0 ? cur : target;
        if (ramp_left == 0) cur = target;
    }
    return steps;
}

Quat attitude_of(double pitch, double heading) {
    return rotmat_to_quat(rotmat_from_euler({0.0, pitch, heading}));
}

}  // namespace

double path_length(const PathSpec& path) {
    double total = 0.0;
    for (const auto& seg : path.segments) {
        if (!seg.is_turn) total += seg.value;
    }
    return total;
}

std::vector<TruthSample> generate_truth(const PathSpec& path, const GaitSpec& gait,
                                        double rate_hz, double lead_in_s,
                                        double lead_out_s) {
    if (rate_hz <= 0.0) throw ConfigError("rate_hz must be positive");
    if (gait.stance_fraction <= 0.2 || gait.stance_fraction >= 0.8) {
        throw ConfigError("stance_fraction must lie in (0.2, 0.8)");
    }
    const double dt = 1.0 / rate_hz;
    const auto steps = plan_footfalls(path, gait);

    if (path.closed && steps.back().pos.norm() > 1e-9) {
        throw ConfigError("path declared closed but footfalls end away from the origin");
    }

    GaussianRng jitter_rng(gait.cadence_seed);

    std::vector<TruthSample> out;
    const auto n_total_estimate = static_cast<size_t>(
        (lead_in_s + lead_out_s + steps.size() * gait.step_duration * 1.1) * rate_hz);
    out.reserve(n_total_estimate + 16);

    size_t index = 0;
    auto emit = [&](const Vec3& r, double pitch, double heading, bool stance,
                    double arclen) {
        TruthSample s;
        s.t = static_cast<double>(index) * dt;
        s.r = r;
        s.q = attitude_of(pitch, heading);
        s.stance = stance;
        s.arclen = arclen;
        if (index == 0) {
            s.v = Vec3::Zero();
        } else {
            s.v = (r - out.back().r) / dt;
        }
        out.push_back(s);
        ++index;
    };

    const double h0 = steps.front().heading;
    const auto n_lead_in = std::max<long>(1, std::lround(lead_in_s * rate_hz));
    for (long k = 0; k < n_lead_in; ++k) emit(Vec3::Zero(), 0.0, h0, true, 0.0);

    Vec3 prev_pos = Vec3::Zero();
    double prev_heading = h0;
    double prev_arclen = 0.0;
    for (const auto& f : steps) {
        double duration = gait.step_duration;
        if (gait.cadence_jitter > 0.0) {
            duration *= 1.0 + gait.cadence_jitter * (2.0 * jitter_rng.uniform() - 1.0);
        }
        const auto n_step = std::max<long>(4, std::lround(duration * rate_hz));
        auto n_stance = std::lround(gait.stance_fraction * static_cast<double>(n_step));
        n_stance = std::clamp<long>(n_stance, 1, n_step - 2);
        const long n_swing = n_step - n_stance;

        const double dheading = wrap_pi(f.heading - prev_heading);
        for (long j = 1; j <= n_swing; ++j) {
            const double tau = static_cast<double>(j) / static_cast<double>(n_swing);
            const double s5 = swing_progress(tau);
            Vec3 r = prev_pos + s5 * (f.pos - prev_pos);
            r.z() += gait.swing_peak_height * swing_bump(tau);
            const double heading = wrap_pi(prev_heading + s5 * dheading);
            const double pitch = gait.swing_pitch_max * swing_bump(tau);
            emit(r, pitch, heading, false, prev_arclen + s5 * (f.arclen - prev_arclen));
        }
        for (long j = 0; j < n_stance; ++j) emit(f.pos, 0.0, f.heading, true, f.arclen);

        prev_pos = f.pos;
        prev_heading = f.heading;
        prev_arclen = f.arclen;
    }

    const auto n_lead_out = std::max<long>(1, std::lround(lead_out_s * rate_hz));
    for (long k = 0; k < n_lead_out; ++k) {
        emit(prev_pos, 0.0, prev_heading, true, prev_arclen);
    }
    return out;
}

std::vector<ImuSample> ideal_imu(std::span<const TruthSample> truth,
                                 const Vec3& b_ref_vector, double g) {
    std::vector<ImuSample> out;
    out.reserve(truth.size());
    const Vec3 gravity_up(0.0, 0.0, g);

    for (size_t k = 0; k < truth.size(); ++k) {
        const auto& cur = truth[k];
        ImuSample s;
        s.t = cur.t;
        const Mat3 c_nb = quat_to_rotmat(cur.q).transpose();
        s.mag = c_nb * b_ref_vector;
        if (k == 0) {
            s.acc = c_nb * gravity_up;
            s.gyro = Vec3::Zero();
        } else {
            const auto& prev = truth[k - 1];
            const double dt = cur.t - prev.t;

            // Body rate that carries q_{k-1} to q_k over dt.
            Quat dq = prev.q.conjugate() * cur.q;
            if (dq.w() < 0.0) dq.coeffs() = -dq.coeffs();
            const Vec3 vec(dq.x(), dq.y(), dq.z());
            const double vnorm = vec.norm();
            if (vnorm < 1e-14) {
                s.gyro = (2.0 / dt) * vec;
            } else {
                const double angle = 2.0 * std::atan2(vnorm, dq.w());
                s.gyro = (angle / (vnorm * dt)) * vec;
            }

            // Specific force consistent with v_k = v_{k-1} + (C a - g_up) dt.
            s.acc = c_nb * ((cur.v - prev.v) / dt + gravity_up);
        }
        out.push_back(s);
    }
    return out;
}

std::vector<ImuSample> corrupt(std::span<const ImuSample> ideal,
                               const SensorErrorSpec& err, const MagEnvSpec& env,
                               std::span<const TruthSample> truth) {
    if (ideal.size() != truth.size()) {
        throw DataError("corrupt: ideal and truth streams differ in length");
    }
    GaussianRng rng(err.seed);
    const bool add_gyro_bias = !err.gyro_bias.isZero(0.0);
    const bool add_accel_bias = !err.accel_bias.isZero(0.0);

    std::vector<ImuSample> out;
    out.reserve(ideal.size());
    for (size_t k = 0; k < ideal.size(); ++k) {
        ImuSample s = ideal[k];
        if (add_accel_bias) s.acc += err.accel_bias;
        if (err.accel_noise_std > 0.0) {
            s.acc += err.accel_noise_std * Vec3(rng.normal(), rng.normal(), rng.normal());
        }
        if (add_gyro_bias) s.gyro += err.gyro_bias;
        if (err.gyro_noise_std > 0.0) {
            s.gyro += err.gyro_noise_std * Vec3(rng.normal(), rng.normal(), rng.normal());
        }

        Vec3 field = env.b_ref_vector;
        const double arc = truth[k].arclen;
        bool disturbed = false;
        for (const auto& d : env.disturbances) {
            if (arc >= d.s_begin && arc < d.s_end) {
                disturbed = true;
                if (d.type == MagDisturbance::Type::HardOffset) {
                    field += d.value;
                } else {
                    field += d.value * (arc - d.s_begin);
                }
            }
        }
        if (disturbed) {
            s.mag = quat_to_rotmat(truth[k].q).transpose() * field;
        }
        if (err.mag_noise_std > 0.0) {
            s.mag += err.mag_noise_std * Vec3(rng.normal(), rng.normal(), rng.normal());
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace pdr
