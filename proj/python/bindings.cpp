#include "pdr/config.hpp"
#include "pdr/csv_io.hpp"
#include "pdr/errors.hpp"
#include "pdr/heading.hpp"
#include "pdr/mathcore.hpp"
#include "pdr/pipeline.hpp"
#include "pdr/synth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw pdr::DataError("cannot open output file: " + path.string());
    return out;
}

pdr::Variant variant_from_name(const std::string& name) {
    if (name == "iez") return pdr::Variant::Iez;
    if (name == "iez-cqmd") return pdr::Variant::IezClassicalQmd;
    if (name == "aiez") return pdr::Variant::Aiez;
    throw pdr::ConfigError("unknown variant '" + name + "' (iez | iez-cqmd | aiez)");
}

py::dict metrics_dict(const pdr::RunMetrics& m) {
    py::dict d;
    d["position_error_m"] = m.final_position_error;
    d["vertical_error_m"] = m.vertical_error;
    d["total_distance_m"] = m.total_distance;
    d["ttd_error_pct"] = m.ttd_error_pct;
    return d;
}

py::dict trajectory_dict(const pdr::Trajectory& traj) {
    std::vector<double> t, x, y, z, heading_deg;
    std::vector<int> stance;
    std::vector<std::string> source;
    t.reserve(traj.size());
    for (const auto& p : traj) {
        t.push_back(p.t);
        x.push_back(p.r.x());
        y.push_back(p.r.y());
        z.push_back(p.r.z());
        heading_deg.push_back(p.euler.heading * kRadToDeg);
        stance.push_back(p.stance ? 1 : 0);
        source.push_back(pdr::to_string(p.heading_source));
    }
    py::dict d;
    d["t"] = std::move(t);
    d["x"] = std::move(x);
    d["y"] = std::move(y);
    d["z"] = std::move(z);
    d["heading_deg"] = std::move(heading_deg);
    d["stance"] = std::move(stance);
    d["heading_source"] = std::move(source);
    return d;
}

py::dict run_variant(const std::string& variant, const std::string& config_json,
                     const std::string& imu_csv_path) {
    auto cfg = pdr::parse_run_config_string(config_json);
    cfg.variant.variant = variant_from_name(variant);
    const auto stream = pdr::ingest(imu_csv_path);
    const auto result = pdr::run(stream.samples, cfg.variant, stream.has_mag);
    const auto metrics = pdr::compute_metrics(
        result.trajectory, cfg.resolve_total_distance(), pdr::Vec3::Zero());

    py::dict d = trajectory_dict(result.trajectory);
    d["metrics"] = metrics_dict(metrics);
    return d;
}

py::list compare(const std::string& config_json, const std::string& imu_csv_path) {
    const auto cfg = pdr::parse_run_config_string(config_json);
    const auto stream = pdr::ingest(imu_csv_path);
    py::list rows;
    for (const auto variant : {pdr::Variant::Iez, pdr::Variant::IezClassicalQmd,
                               pdr::Variant::Aiez}) {
        auto vcfg = cfg.variant;
        vcfg.variant = variant;
        const auto result = pdr::run(stream.samples, vcfg, stream.has_mag);
        const auto metrics = pdr::compute_metrics(
            result.trajectory, cfg.resolve_total_distance(), pdr::Vec3::Zero());
        py::dict row = metrics_dict(metrics);
        row["variant"] = pdr::to_string(variant);
        rows.append(row);
    }
    return rows;
}

void simulate_to_dir(const std::string& config_json, const std::string& out_dir) {
    const auto cfg = pdr::parse_run_config_string(config_json);
    if (!cfg.simulate) throw pdr::ConfigError("config has no 'simulate' section");
    const auto& sim = *cfg.simulate;
    const auto truth = pdr::generate_truth(sim.path, sim.gait, sim.rate_hz,
                                           sim.lead_in_s, sim.lead_out_s);
    const auto ideal = pdr::ideal_imu(truth, sim.mag_env.b_ref_vector, cfg.variant.g);
    const auto imu = pdr::corrupt(ideal, sim.errors, sim.mag_env, truth);

    fs::create_directories(out_dir);
    auto truth_out = open_out(fs::path(out_dir) / "truth.csv");
    pdr::write_truth_csv(truth_out, truth);
    auto imu_out = open_out(fs::path(out_dir) / "imu.csv");
    pdr::write_imu_csv(imu_out, imu);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Foot-mounted pedestrian dead reckoning: strapdown INS with "
              "zero-velocity updates and magnetically gated heading correction";

    py::register_exception<pdr::ConfigError>(m, "ConfigError");
    py::register_exception<pdr::DataError>(m, "DataError");
    py::register_exception<pdr::NumericalError>(m, "NumericalError");

    m.def("simulate_to_dir", &simulate_to_dir, py::arg("config_json"), py::arg("out_dir"),
          "Generate truth.csv and imu.csv for the config's simulate section");
    m.def("run_variant", &run_variant, py::arg("variant"), py::arg("config_json"),
          py::arg("imu_csv_path"),
          "Run one variant (iez | iez-cqmd | aiez) over an IMU log; returns the "
          "trajectory arrays and loop-closure metrics");
    m.def("compare", &compare, py::arg("config_json"), py::arg("imu_csv_path"),
          "Run all three variants; returns one metrics row per variant");

    m.def("wrap_pi", &pdr::wrap_pi, py::arg("angle"), "Wrap an angle to (-pi, pi]");
    m.def(
        "compass_heading",
        [](double bx, double by, double bz, double roll, double pitch, double declination) {
            return pdr::compass_heading({bx, by, bz}, roll, pitch, declination);
        },
        py::arg("bx"), py::arg("by"), py::arg("bz"), py::arg("roll"), py::arg("pitch"),
        py::arg("declination") = 0.0,
        "Tilt-compensated magnetic heading (radians, clockwise from North)");
    m.def(
        "roll_pitch_from_accel",
        [](double ax, double ay, double az, double g) {
            const auto rp = pdr::roll_pitch_from_accel({ax, ay, az}, g);
            return py::make_tuple(rp.roll, rp.pitch);
        },
        py::arg("ax"), py::arg("ay"), py::arg("az"), py::arg("g") = 9.81,
        "Roll and pitch (radians) from a static specific-force reading");

#ifdef PDR_VERSION
    m.attr("__version__") = PDR_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
