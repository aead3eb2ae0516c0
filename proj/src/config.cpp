#include "pdr/config.hpp"

#include "pdr/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pdr {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

double sq(double x) { return x * x; }

/// Strict-schema accessor for one JSON object: typed getters with range
/// checks, and a final sweep that rejects unknown keys.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    double number(const std::string& key, double fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(at(key) + ": expected a number");
        return v.get<double>();
    }

    double positive(const std::string& key, double fallback) {
        const double v = number(key, fallback);
        if (!(v > 0.0)) throw ConfigError(at(key) + ": must be > 0");
        return v;
    }

    double non_negative(const std::string& key, double fallback) {
        const double v = number(key, fallback);
        if (v < 0.0) throw ConfigError(at(key) + ": must be >= 0");
        return v;
    }

    int integer(const std::string& key, int fallback, int min_value) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
        const int n = v.get<int>();
        if (n < min_value) {
            throw ConfigError(at(key) + ": must be >= " + std::to_string(min_value));
        }
        return n;
    }

    bool boolean(const std::string& key, bool fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(at(key) + ": expected a boolean");
        return v.get<bool>();
    }

    uint64_t seed(const std::string& key, uint64_t fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_unsigned() && !v.is_number_integer()) {
            throw ConfigError(at(key) + ": expected a non-negative integer");
        }
        if (v.is_number_integer() && v.get<int64_t>() < 0) {
            throw ConfigError(at(key) + ": expected a non-negative integer");
        }
        return v.get<uint64_t>();
    }

    Vec3 vec3(const std::string& key, const Vec3& fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_array() || v.size() != 3) {
            throw ConfigError(at(key) + ": expected an array of 3 numbers");
        }
        Vec3 out;
        for (int i = 0; i < 3; ++i) {
            if (!v[i].is_number()) throw ConfigError(at(key) + ": expected numbers");
            out(i) = v[i].get<double>();
        }
        return out;
    }

    const json* object(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) return nullptr;
        return &j_.at(key);
    }

    std::string at(const std::string& key) const { return path_ + "." + key; }

    void reject_unknown() const {
        for (const auto& item : j_.items()) {
            if (!seen_.contains(item.key())) {
                throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
            }
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

DetectorConfig parse_detector(const json* j, const std::string& path, double g,
                              bool* b_ref_auto) {
    DetectorConfig cfg;
    cfg.g = g;
    if (!j) return cfg;
    Node n(*j, path);
    cfg.window = n.integer("window", cfg.window, 1);
    cfg.accel_noise_var = sq(n.positive("sigma_a", std::sqrt(cfg.accel_noise_var)));
    cfg.gyro_noise_var = sq(n.positive("sigma_g", std::sqrt(cfg.gyro_noise_var)));
    cfg.shoe_threshold = n.positive("shoe_threshold", cfg.shoe_threshold);
    cfg.heading_diff_var =
        sq(n.positive("sigma_dpsi_deg", std::sqrt(cfg.heading_diff_var) / kDegToRad) * kDegToRad);
    cfg.field_mag_var = sq(n.positive("sigma_b", std::sqrt(cfg.field_mag_var)));
    cfg.qmd_threshold = n.positive("qmd_threshold", cfg.qmd_threshold);
    cfg.classical_threshold = n.positive("classical_threshold", cfg.classical_threshold);
    if (n.has("b_ref")) {
        const auto& v = j->at("b_ref");
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") {
                throw ConfigError(n.at("b_ref") + ": expected a number or \"auto\"");
            }
            *b_ref_auto = true;
        } else if (v.is_number()) {
            cfg.b_ref = v.get<double>();
            if (!(cfg.b_ref > 0.0)) throw ConfigError(n.at("b_ref") + ": must be > 0");
        } else {
            throw ConfigError(n.at("b_ref") + ": expected a number or \"auto\"");
        }
    }
    n.reject_unknown();
    return cfg;
}

NoiseConfig parse_noise(const json* j, const std::string& path) {
    NoiseConfig cfg;
    if (!j) return cfg;
    Node n(*j, path);
    cfg.gyro_noise_std = n.positive("gyro_noise_std", cfg.gyro_noise_std);
    cfg.accel_noise_std = n.positive("accel_noise_std", cfg.accel_noise_std);
    cfg.gyro_bias_walk = n.non_negative("gyro_bias_walk", cfg.gyro_bias_walk);
    cfg.accel_bias_walk = n.non_negative("accel_bias_walk", cfg.accel_bias_walk);
    cfg.roll_var = sq(n.positive("sigma_roll_deg", std::sqrt(cfg.roll_var) / kDegToRad) * kDegToRad);
    cfg.pitch_var = sq(n.positive("sigma_pitch_deg", std::sqrt(cfg.pitch_var) / kDegToRad) * kDegToRad);
    cfg.compass_var =
        sq(n.positive("sigma_compass_deg", std::sqrt(cfg.compass_var) / kDegToRad) * kDegToRad);
    cfg.hdr_var = sq(n.positive("sigma_hdr_deg", std::sqrt(cfg.hdr_var) / kDegToRad) * kDegToRad);
    cfg.zupt_var = sq(n.positive("sigma_v", std::sqrt(cfg.zupt_var)));
    if (const json* init = n.object("init")) {
        Node i(*init, n.at("init"));
        cfg.init.att_std = i.positive("att_std_deg", cfg.init.att_std / kDegToRad) * kDegToRad;
        cfg.init.heading_std =
            i.positive("heading_std_deg", cfg.init.heading_std / kDegToRad) * kDegToRad;
        cfg.init.gyro_bias_std = i.positive("gyro_bias_std", cfg.init.gyro_bias_std);
        cfg.init.accel_bias_std = i.positive("accel_bias_std", cfg.init.accel_bias_std);
        cfg.init.vel_std = i.positive("vel_std", cfg.init.vel_std);
        cfg.init.pos_std = i.positive("pos_std", cfg.init.pos_std);
        i.reject_unknown();
    }
    n.reject_unknown();
    return cfg;
}

HdrConfig parse_hdr(const json* j, const std::string& path) {
    HdrConfig cfg;
    if (!j) return cfg;
    Node n(*j, path);
    cfg.window = n.integer("window", cfg.window, 1);
    cfg.xi = n.positive("xi_deg", cfg.xi / kDegToRad) * kDegToRad;
    cfg.hdr_var = sq(n.positive("sigma_hdr_deg", std::sqrt(cfg.hdr_var) / kDegToRad) * kDegToRad);
    cfg.per_sample = n.boolean("per_sample", cfg.per_sample);
    cfg.curve_zero_innovation = n.boolean("curve_zero_innovation", cfg.curve_zero_innovation);
    n.reject_unknown();
    return cfg;
}

PathSpec parse_path(const json& j, const std::string& path) {
    PathSpec spec;
    Node n(j, path);
    spec.closed = n.boolean("closed", false);
    if (!n.has("segments")) throw ConfigError(path + ": missing 'segments'");
    const auto& segs = j.at("segments");
    if (!segs.is_array() || segs.empty()) {
        throw ConfigError(path + ".segments: expected a non-empty array");
    }
    for (size_t i = 0; i < segs.size(); ++i) {
        const std::string sp = path + ".segments[" + std::to_string(i) + "]";
        Node s(segs[i], sp);
        const bool straight = s.has("straight");
        const bool turn = s.has("turn_deg");
        if (straight == turn) {
            throw ConfigError(sp + ": expected exactly one of 'straight' or 'turn_deg'");
        }
        PathSegment seg;
        if (straight) {
            seg.is_turn = false;
            seg.value = s.positive("straight", 0.0);
        } else {
            seg.is_turn = true;
            seg.value = s.number("turn_deg", 0.0) * kDegToRad;
        }
        s.reject_unknown();
        spec.segments.push_back(seg);
    }
    n.reject_unknown();
    return spec;
}

GaitSpec parse_gait(const json* j, const std::string& path) {
    GaitSpec g;
    if (!j) return g;
    Node n(*j, path);
    g.step_length = n.positive("step_length", g.step_length);
    g.step_duration = n.positive("step_duration", g.step_duration);
    g.stance_fraction = n.positive("stance_fraction", g.stance_fraction);
    if (g.stance_fraction <= 0.2 || g.stance_fraction >= 0.8) {
        throw ConfigError(n.at("stance_fraction") + ": must lie in (0.2, 0.8)");
    }
    g.swing_peak_height = n.positive("swing_height", g.swing_peak_height);
    g.swing_pitch_max = n.non_negative("swing_pitch_deg", g.swing_pitch_max / kDegToRad) * kDegToRad;
    g.cadence_jitter = n.non_negative("cadence_jitter", g.cadence_jitter);
    g.cadence_seed = n.seed("cadence_seed", g.cadence_seed);
    g.turn_steps = n.integer("turn_steps", g.turn_steps, 1);
    if (g.turn_steps > 3) throw ConfigError(n.at("turn_steps") + ": must be <= 3");
    n.reject_unknown();
    return g;
}

SensorErrorSpec parse_errors(const json* j, const std::string& path) {
    SensorErrorSpec e;
    if (!j) return e;
    Node n(*j, path);
    e.gyro_bias = n.vec3("gyro_bias", e.gyro_bias);
    e.accel_bias = n.vec3("accel_bias", e.accel_bias);
    e.gyro_noise_std = n.non_negative("gyro_noise_std", e.gyro_noise_std);
    e.accel_noise_std = n.non_negative("accel_noise_std", e.accel_noise_std);
    e.mag_noise_std = n.non_negative("mag_noise_std", e.mag_noise_std);
    e.seed = n.seed("seed", e.seed);
    n.reject_unknown();
    return e;
}

MagEnvSpec parse_mag_env(const json* j, const std::string& path) {
    MagEnvSpec env;
    if (!j) return env;
    Node n(*j, path);
    env.b_ref_vector = n.vec3("b_ref_vector", env.b_ref_vector);
    if (env.b_ref_vector.norm() == 0.0) {
        throw ConfigError(n.at("b_ref_vector") + ": must be nonzero");
    }
    if (env.b_ref_vector.head<2>().norm() < 1e-9) {
        throw ConfigError(n.at("b_ref_vector") + ": must not be vertical");
    }
    if (n.has("disturbances")) {
        const auto& arr = j->at("disturbances");
        if (!arr.is_array()) throw ConfigError(n.at("disturbances") + ": expected an array");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string dp = n.at("disturbances") + "[" + std::to_string(i) + "]";
            Node d(arr[i], dp);
            MagDisturbance dist;
            if (!d.has("interval_m")) throw ConfigError(dp + ": missing 'interval_m'");
            const auto& iv = arr[i].at("interval_m");
            if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
                throw ConfigError(dp + ".interval_m: expected [begin, end] in meters");
            }
            dist.s_begin = iv[0].get<double>();
            dist.s_end = iv[1].get<double>();
            if (!(dist.s_end > dist.s_begin) || dist.s_begin < 0.0) {
                throw ConfigError(dp + ".interval_m: require 0 <= begin < end");
            }
            if (!d.has("type")) throw ConfigError(dp + ": missing 'type'");
            const auto& tv = arr[i].at("type");
            if (!tv.is_string()) throw ConfigError(dp + ".type: expected a string");
            const std::string type = tv.get<std::string>();
            if (type == "hard_offset") {
                dist.type = MagDisturbance::Type::HardOffset;
            } else if (type == "gradient") {
                dist.type = MagDisturbance::Type::Gradient;
            } else {
                throw ConfigError(dp + ".type: expected 'hard_offset' or 'gradient'");
            }
            dist.value = d.vec3("value", Vec3::Zero());
            d.reject_unknown();
            env.disturbances.push_back(dist);
        }
    }
    n.reject_unknown();
    return env;
}

SimulateConfig parse_simulate(const json& j, const std::string& path) {
    SimulateConfig sim;
    Node n(j, path);
    sim.rate_hz = n.positive("rate_hz", sim.rate_hz);
    sim.lead_in_s = n.positive("lead_in_s", sim.lead_in_s);
    sim.lead_out_s = n.positive("lead_out_s", sim.lead_out_s);
    if (!n.has("path")) throw ConfigError(path + ": missing 'path'");
    sim.path = parse_path(j.at("path"), n.at("path"));
    sim.gait = parse_gait(n.object("gait"), n.at("gait"));
    sim.errors = parse_errors(n.object("errors"), n.at("errors"));
    sim.mag_env = parse_mag_env(n.object("mag_env"), n.at("mag_env"));
    n.reject_unknown();
    return sim;
}

}  // namespace

double RunConfig::resolve_total_distance() const {
    if (total_distance) return *total_distance;
    if (simulate) return path_length(simulate->path);
    throw ConfigError("total_distance_m is required when the config has no simulate section");
}

RunConfig parse_run_config_string(const std::string& json_text,
                                  const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    RunConfig cfg;
    Node n(j, "$");
    cfg.variant.g = n.positive("g", cfg.variant.g);
    cfg.variant.declination = n.number("declination_deg", 0.0) * kDegToRad;
    cfg.variant.detector = parse_detector(n.object("detector"), "$.detector",
                                          cfg.variant.g, &cfg.variant.b_ref_auto);
    cfg.variant.noise = parse_noise(n.object("noise"), "$.noise");
    cfg.variant.hdr = parse_hdr(n.object("hdr"), "$.hdr");
    if (const json* sim = n.object("simulate")) {
        cfg.simulate = parse_simulate(*sim, "$.simulate");
    }
    if (n.has("total_distance_m")) {
        const double d = n.positive("total_distance_m", 0.0);
        cfg.total_distance = d;
    }
    n.reject_unknown();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config_string(ss.str(), path);
}

}  // namespace pdr
