#include "pdr/synth.hpp"

#include "pdr/ins.hpp"
#include "pdr/mathcore.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace pdr;
using namespace pdr::test;

namespace {

constexpr double kG = 9.81;

PathSpec straight_path(double length) {
    PathSpec p;
    p.segments.push_back({false, length});
    return p;
}

PathSpec rectangle(double a, double b, int cycles = 1) {
    PathSpec p;
    for (int c = 0; c < cycles; ++c) {
        p.segments.push_back({false, a});
        p.segments.push_back({true, M_PI / 2.0});
        p.segments.push_back({false, b});
        p.segments.push_back({true, M_PI / 2.0});
        p.segments.push_back({false, a});
        p.segments.push_back({true, M_PI / 2.0});
        p.segments.push_back({false, b});
        p.segments.push_back({true, M_PI / 2.0});
    }
    p.closed = true;
    return p;
}

}  // namespace

TEST_CASE("generate_truth: straight 10 m walk in 1 m steps") {
    GaitSpec gait;
    const auto truth = generate_truth(straight_path(10.0), gait, 100.0);
    CHECK((truth.back().r - Vec3(10, 0, 0)).norm() <= 1e-12);
    CHECK(truth.back().arclen == doctest::Approx(10.0));
    CHECK(truth.front().stance);
    CHECK(truth.back().stance);

    // 10 swing phases
    int swings = 0;
    bool in_swing = false;
    for (const auto& s : truth) {
        if (!s.stance && !in_swing) ++swings;
        in_swing = !s.stance;
    }
    CHECK(swings == 10);
}

TEST_CASE("generate_truth: closed loop returns to the origin") {
    GaitSpec gait;
    const auto truth = generate_truth(rectangle(8.0, 5.0), gait, 100.0);
    CHECK(truth.back().r.norm() <= 1e-9);
    CHECK(path_length(rectangle(8.0, 5.0)) == doctest::Approx(26.0));
}

TEST_CASE("generate_truth: velocities are consistent backward differences") {
    GaitSpec gait;
    gait.cadence_jitter = 0.04;
    gait.cadence_seed = 5;
    const auto truth = generate_truth(straight_path(6.0), gait, 100.0);
    for (size_t k = 1; k < truth.size(); ++k) {
        const Vec3 fd = (truth[k].r - truth[k - 1].r) * 100.0;
        CHECK((fd - truth[k].v).norm() <= 1e-6 * 100.0);
    }
}

TEST_CASE("generate_truth: stance labels coincide with exactly zero velocity") {
    GaitSpec gait;
    const auto truth = generate_truth(rectangle(6.0, 4.0), gait, 100.0);
    for (size_t k = 1; k < truth.size(); ++k) {
        CHECK(truth[k].stance == (truth[k].v.norm() == 0.0));
    }
}

TEST_CASE("ideal_imu: stationary and constant-velocity truth") {
    std::vector<TruthSample> truth(200);
    const Vec3 b_ref(0.5, 0, -0.8660254037844386);
    for (size_t k = 0; k < truth.size(); ++k) {
        truth[k].t = 0.01 * static_cast<double>(k);
        truth[k].r = Vec3::Zero();
        truth[k].v = Vec3::Zero();
    }
    auto imu = ideal_imu(truth, b_ref, kG);
    for (const auto& s : imu) {
        CHECK((s.acc - Vec3(0, 0, kG)).norm() <= 1e-12);
        CHECK(s.gyro.norm() == 0.0);
        CHECK((s.mag - b_ref).norm() <= 1e-12);
    }

    // Constant horizontal velocity: still only gravity on the accelerometer.
    for (size_t k = 0; k < truth.size(); ++k) {
        truth[k].r = Vec3(0.7 * truth[k].t, 0, 0);
        truth[k].v = Vec3(0.7, 0, 0);
    }
    imu = ideal_imu(truth, b_ref, kG);
    for (size_t k = 1; k < imu.size(); ++k) {
        CHECK((imu[k].acc - Vec3(0, 0, kG)).norm() <= 1e-12);
        CHECK(imu[k].gyro.norm() == 0.0);
    }
}

TEST_CASE("ideal_imu inverts the mechanization (round trip)") {
    GaitSpec gait;
    PathSpec path = rectangle(10.0, 6.0);
    const auto truth = generate_truth(path, gait, 100.0);
    const auto imu = ideal_imu(truth, {0.5, 0, -0.8660254037844386}, kG);

    NavState s;
    s.q = truth.front().q;
    s.v = truth.front().v;
    s.r = truth.front().r;
    s.t = truth.front().t;

    double max_err = 0.0;
    for (size_t k = 1; k < imu.size(); ++k) {
        const double dt = imu[k].t - imu[k - 1].t;
        s = propagate(s, imu[k].acc, imu[k].gyro, dt, kG);
        max_err = std::max(max_err, (s.r - truth[k].r).norm());
    }
    // 32 m walk; the acceptance bound is 1 mm per 100 m.
    CHECK(max_err <= 1e-3 * (path_length(path) / 100.0 + 1.0));
    CHECK(max_err <= 1e-6);  // in practice the inversion is near-exact
}

TEST_CASE("corrupt: zero spec is the identity") {
    GaitSpec gait;
    const auto truth = generate_truth(straight_path(4.0), gait, 100.0);
    const MagEnvSpec env;
    const auto imu = ideal_imu(truth, env.b_ref_vector, kG);
    const auto out = corrupt(imu, SensorErrorSpec{}, env, truth);
    REQUIRE(out.size() == imu.size());
    for (size_t k = 0; k < out.size(); ++k) {
        CHECK(out[k].acc == imu[k].acc);
        CHECK(out[k].gyro == imu[k].gyro);
        CHECK(out[k].mag == imu[k].mag);
    }
}

TEST_CASE("corrupt: hard-iron segment has constant wrong magnitude and stable wrong heading") {
    GaitSpec gait;
    const auto truth = generate_truth(straight_path(30.0), gait, 100.0);
    MagEnvSpec env;
    env.disturbances.push_back({10.0, 20.0, MagDisturbance::Type::HardOffset,
                                {0.3, 0.4, 0.0}});
    const auto imu = ideal_imu(truth, env.b_ref_vector, kG);
    const auto out = corrupt(imu, SensorErrorSpec{}, env, truth);

    const double clean_mag = env.b_ref_vector.norm();
    const Vec3 disturbed_field = env.b_ref_vector + Vec3(0.3, 0.4, 0.0);
    int inside = 0;
    for (size_t k = 0; k < out.size(); ++k) {
        const double arc = truth[k].arclen;
        if (arc >= 10.0 && arc < 20.0) {
            ++inside;
            CHECK(out[k].mag.norm() == doctest::Approx(disturbed_field.norm()).epsilon(1e-12));
            CHECK(out[k].mag.norm() != doctest::Approx(clean_mag).epsilon(1e-3));
            // Heading from the disturbed field is offset but constant: the
            // body-frame field is the rotation of a fixed nav vector.
            const Vec3 renav = quat_to_rotmat(truth[k].q) * out[k].mag;
            CHECK((renav - disturbed_field).norm() <= 1e-12);
        }
    }
    CHECK(inside > 500);
}

TEST_CASE("corrupt: empirical noise matches the spec within 5 percent") {
    std::vector<TruthSample> truth(20000);
    for (size_t k = 0; k < truth.size(); ++k) truth[k].t = 0.01 * static_cast<double>(k);
    MagEnvSpec env;
    const auto imu = ideal_imu(truth, env.b_ref_vector, kG);

    SensorErrorSpec err;
    err.accel_noise_std = 0.02;
    err.gyro_noise_std = 0.0015;
    err.mag_noise_std = 0.02;
    err.seed = 99;
    const auto out = corrupt(imu, err, env, truth);

    double acc_ss = 0.0, gyr_ss = 0.0, mag_ss = 0.0;
    for (size_t k = 0; k < out.size(); ++k) {
        acc_ss += (out[k].acc - imu[k].acc).squaredNorm();
        gyr_ss += (out[k].gyro - imu[k].gyro).squaredNorm();
        mag_ss += (out[k].mag - imu[k].mag).squaredNorm();
    }
    const double n = 3.0 * static_cast<double>(out.size());
    CHECK(std::sqrt(acc_ss / n) == doctest::Approx(err.accel_noise_std).epsilon(0.05));
    CHECK(std::sqrt(gyr_ss / n) == doctest::Approx(err.gyro_noise_std).epsilon(0.05));
    CHECK(std::sqrt(mag_ss / n) == doctest::Approx(err.mag_noise_std).epsilon(0.05));
}

TEST_CASE("corrupt: identical seeds give byte-identical streams") {
    GaitSpec gait;
    const auto truth = generate_truth(straight_path(5.0), gait, 100.0);
    MagEnvSpec env;
    const auto imu = ideal_imu(truth, env.b_ref_vector, kG);
    SensorErrorSpec err;
    err.accel_noise_std = 0.02;
    err.gyro_noise_std = 0.0015;
    err.mag_noise_std = 0.02;
    err.seed = 7;
    const auto a = corrupt(imu, err, env, truth);
    const auto b = corrupt(imu, err, env, truth);
    REQUIRE(a.size() == b.size());
    for (size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].acc == b[k].acc);
        CHECK(a[k].gyro == b[k].gyro);
        CHECK(a[k].mag == b[k].mag);
    }
}

TEST_CASE("hard-iron windows: |B| variance equals the mag-noise variance only") {
    GaitSpec gait;
    const auto truth = generate_truth(straight_path(30.0), gait, 100.0);
    MagEnvSpec env;
    env.disturbances.push_back({5.0, 25.0, MagDisturbance::Type::HardOffset,
                                {0.3, 0.4, 0.0}});
    const auto imu = ideal_imu(truth, env.b_ref_vector, kG);
    SensorErrorSpec err;
    err.mag_noise_std = 0.02;
    err.seed = 3;
    const auto out = corrupt(imu, err, env, truth);

    std::vector<double> mags;
    for (size_t k = 0; k < out.size(); ++k) {
        if (truth[k].arclen >= 5.0 && truth[k].arclen < 25.0) {
            mags.push_back(out[k].mag.norm());
        }
    }
    REQUIRE(mags.size() > 1000);
    double mean = 0.0;
    for (double m : mags) mean += m;
    mean /= static_cast<double>(mags.size());
    double var = 0.0;
    for (double m : mags) var += (m - mean) * (m - mean);
    var /= static_cast<double>(mags.size() - 1);
    // Projection of 3-axis noise onto the field direction: variance ~ sigma^2.
    CHECK(var == doctest::Approx(err.mag_noise_std * err.mag_noise_std).epsilon(0.15));
}
