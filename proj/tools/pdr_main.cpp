#include "pdr/config.hpp"
#include "pdr/csv_io.hpp"
#include "pdr/errors.hpp"
#include "pdr/pipeline.hpp"
#include "pdr/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw pdr::DataError("cannot open output file: " + path.string());
    return out;
}

struct SynthData {
    std::vector<pdr::TruthSample> truth;
    std::vector<pdr::ImuSample> imu;
};

SynthData run_synthesis(const pdr::RunConfig& cfg) {
    if (!cfg.simulate) {
        throw pdr::ConfigError("config has no 'simulate' section");
    }
    const auto& sim = *cfg.simulate;
    SynthData data;
    data.truth = pdr::generate_truth(sim.path, sim.gait, sim.rate_hz,
                                     sim.lead_in_s, sim.lead_out_s);
    auto ideal = pdr::ideal_imu(data.truth, sim.mag_env.b_ref_vector, cfg.variant.g);
    data.imu = pdr::corrupt(ideal, sim.errors, sim.mag_env, data.truth);
    return data;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const auto cfg = pdr::load_run_config(config_path);
    const auto data = run_synthesis(cfg);

    fs::create_directories(out_dir);
    auto truth_out = open_out(fs::path(out_dir) / "truth.csv");
    pdr::write_truth_csv(truth_out, data.truth);
    auto imu_out = open_out(fs::path(out_dir) / "imu.csv");
    pdr::write_imu_csv(imu_out, data.imu);

    std::cout << "simulate: " << data.imu.size() << " samples, "
              << pdr::format_double(pdr::path_length(cfg.simulate->path))
              << " m path -> " << out_dir << "/{truth.csv,imu.csv}\n";
    return 0;
}

pdr::RunMetrics run_one(const pdr::RunConfig& cfg, pdr::Variant variant,
                        const pdr::ImuStream& stream, const std::string& out_dir) {
    pdr::VariantConfig vcfg = cfg.variant;
    vcfg.variant = variant;
    const auto result = pdr::run(stream.samples, vcfg, stream.has_mag);
    const auto metrics = pdr::compute_metrics(
        result.trajectory, cfg.resolve_total_distance(), pdr::Vec3::Zero());

    const std::string tag = pdr::to_string(variant);
    auto traj_out = open_out(fs::path(out_dir) / ("trajectory_" + tag + ".csv"));
    pdr::write_trajectory_csv(traj_out, result.trajectory);
    auto det_out = open_out(fs::path(out_dir) / ("detector_" + tag + ".csv"));
    pdr::write_run_detector_csv(det_out, result.trajectory, result.traces, variant);
    return metrics;
}

int cmd_run(const std::string& variant_name, const std::string& config_path,
            const std::string& input, const std::string& out_dir) {
    static const std::map<std::string, pdr::Variant> names{
        {"iez", pdr::Variant::Iez},
        {"iez-cqmd", pdr::Variant::IezClassicalQmd},
        {"aiez", pdr::Variant::Aiez},
    };
    const auto cfg = pdr::load_run_config(config_path);
    const auto stream = pdr::ingest(input);
    fs::create_directories(out_dir);

    const pdr::Variant variant = names.at(variant_name);
    const auto metrics = run_one(cfg, variant, stream, out_dir);

    std::vector<std::pair<std::string, pdr::RunMetrics>> rows{{variant_name, metrics}};
    auto metrics_out = open_out(fs::path(out_dir) / ("metrics_" + variant_name + ".csv"));
    pdr::write_metrics_csv(metrics_out, rows, /*extended=*/true);

    std::cout << variant_name << ": position_error_m="
              << pdr::format_double(metrics.final_position_error)
              << " ttd_error_pct=" << pdr::format_double(metrics.ttd_error_pct)
              << " vertical_error_m=" << pdr::format_double(metrics.vertical_error)
              << '\n';
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& input,
                const std::string& out_dir) {
    const auto cfg = pdr::load_run_config(config_path);
    const auto stream = pdr::ingest(input);
    fs::create_directories(out_dir);

    std::vector<std::pair<std::string, pdr::RunMetrics>> rows;
    for (const auto variant : {pdr::Variant::Iez, pdr::Variant::IezClassicalQmd,
                               pdr::Variant::Aiez}) {
        rows.emplace_back(pdr::to_string(variant),
                          run_one(cfg, variant, stream, out_dir));
    }
    auto metrics_out = open_out(fs::path(out_dir) / "metrics.csv");
    pdr::write_metrics_csv(metrics_out, rows);

    for (const auto& [name, m] : rows) {
        std::cout << name << ": position_error_m="
                  << pdr::format_double(m.final_position_error)
                  << " ttd_error_pct=" << pdr::format_double(m.ttd_error_pct) << '\n';
    }
    return 0;
}

int cmd_detect(const std::string& config_path, const std::string& input,
               const std::string& out_file) {
    const auto cfg = pdr::load_run_config(config_path);
    const auto stream = pdr::ingest(input);

    pdr::VariantConfig vcfg = cfg.variant;
    vcfg.variant = pdr::Variant::Aiez;
    const auto result = pdr::run(stream.samples, vcfg, stream.has_mag);

    if (out_file.empty()) {
        pdr::write_detect_csv(std::cout, result.trajectory, result.traces);
    } else {
        auto out = open_out(out_file);
        pdr::write_detect_csv(out, result.trajectory, result.traces);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdr: foot-mounted pedestrian dead reckoning (IEZ / IEZ+classical-QMD / AIEZ)"};
    app.require_subcommand(1);

    std::string config_path, input, out_dir, variant, detect_out;

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic walk (truth + corrupted IMU log)");
    sim->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sim->add_option("--out", out_dir, "Output directory")->required();

    auto* runc = app.add_subcommand("run", "Run one estimator variant on an IMU log");
    runc->add_option("--variant", variant, "Estimator variant")
        ->required()
        ->check(CLI::IsMember({"iez", "iez-cqmd", "aiez"}));
    runc->add_option("--config", config_path, "Run configuration (JSON)")->required();
    runc->add_option("--input", input, "IMU log (CSV)")->required();
    runc->add_option("--out", out_dir, "Output directory")->required();

    auto* cmp = app.add_subcommand("compare", "Run all three variants and tabulate their errors");
    cmp->add_option("--config", config_path, "Run configuration (JSON)")->required();
    cmp->add_option("--input", input, "IMU log (CSV)")->required();
    cmp->add_option("--out", out_dir, "Output directory")->required();

    auto* det = app.add_subcommand("detect", "Emit detector logs only (stance + both QMD variants)");
    det->add_option("--config", config_path, "Run configuration (JSON)")->required();
    det->add_option("--input", input, "IMU log (CSV)")->required();
    det->add_option("--out", detect_out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(config_path, out_dir);
        if (runc->parsed()) return cmd_run(variant, config_path, input, out_dir);
        if (cmp->parsed()) return cmd_compare(config_path, input, out_dir);
        if (det->parsed()) return cmd_detect(config_path, input, detect_out);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
    } catch (const pdr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const pdr::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const pdr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
