#include "pdr/csv_io.hpp"

#include "pdr/errors.hpp"
#include "pdr/mathcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pdr {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

constexpr const char* kImuHeader =
    "t_s,acc_x,acc_y,acc_z,gyr_x,gyr_y,gyr_z,mag_x,mag_y,mag_z";
constexpr const char* kImuHeaderNoMag = "t_s,acc_x,acc_y,acc_z,gyr_x,gyr_y,gyr_z";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

double parse_field(const std::string& field, const std::string& name, long line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw DataError(name + ":" + std::to_string(line_no) +
                        ": malformed numeric field '" + field + "'");
    }
    if (!std::isfinite(value)) {
        throw DataError(name + ":" + std::to_string(line_no) + ": non-finite field");
    }
    return value;
}

std::string opt_double(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

std::string opt_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string{};
}

std::string opt_deg(const std::optional<double>& v) {
    return v ? format_double(*v * kRadToDeg) : std::string{};
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

ImuStream ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    return ingest_stream(in, path);
}

ImuStream ingest_stream(std::istream& in, const std::string& name) {
    ImuStream stream;
    std::string line;
    long line_no = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line == kImuHeader) {
                stream.has_mag = true;
            } else if (line == kImuHeaderNoMag) {
                stream.has_mag = false;
            } else {
                throw DataError(name + ":" + std::to_string(line_no) +
                                ": header row does not match the IMU schema");
            }
            header_seen = true;
            continue;
        }

        const auto fields = split_csv(line);
        const size_t expected = stream.has_mag ? 10 : 7;
        if (fields.size() != expected) {
            throw DataError(name + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(expected) + " columns, got " +
                            std::to_string(fields.size()));
        }
        ImuSample s;
        s.t = parse_field(fields[0], name, line_no);
        for (int i = 0; i < 3; ++i) s.acc(i) = parse_field(fields[1 + i], name, line_no);
        for (int i = 0; i < 3; ++i) s.gyro(i) = parse_field(fields[4 + i], name, line_no);
        if (stream.has_mag) {
            for (int i = 0; i < 3; ++i) s.mag(i) = parse_field(fields[7 + i], name, line_no);
        }
        if (!stream.samples.empty() && !(s.t > stream.samples.back().t)) {
            throw DataError(name + ":" + std::to_string(line_no) +
                            ": non-monotone timestamp");
        }
        stream.samples.push_back(s);
    }
    if (!header_seen) throw DataError(name + ": missing header row");

    // Flag gaps over twice the nominal (median) sample period.
    if (stream.samples.size() > 2) {
        std::vector<double> gaps(stream.samples.size() - 1);
        for (size_t k = 1; k < stream.samples.size(); ++k) {
            gaps[k - 1] = stream.samples[k].t - stream.samples[k - 1].t;
        }
        std::vector<double> sorted = gaps;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        const double nominal = sorted[sorted.size() / 2];
        const auto big = std::count_if(gaps.begin(), gaps.end(),
                                       [&](double g) { return g > 2.0 * nominal; });
        if (big > 0) {
            std::cerr << "warning: " << name << ": " << big << " gap(s) exceed 2x the nominal period of "
                      << format_double(nominal) << " s\n";
        }
    }
    return stream;
}

void write_imu_csv(std::ostream& out, std::span<const ImuSample> samples, bool has_mag) {
    out << "# units: t_s=s acc=m/s^2 gyr=rad/s mag=normalized\n";
    out << (has_mag ? kImuHeader : kImuHeaderNoMag) << "\n";
    for (const auto& s : samples) {
        out << format_double(s.t);
        for (int i = 0; i < 3; ++i) out << ',' << format_double(s.acc(i));
        for (int i = 0; i < 3; ++i) out << ',' << format_double(s.gyro(i));
        if (has_mag) {
            for (int i = 0; i < 3; ++i) out << ',' << format_double(s.mag(i));
        }
        out << '\n';
    }
}

void write_truth_csv(std::ostream& out, std::span<const TruthSample> truth) {
    out << "# units: t_s=s pos=m vel=m/s angles=deg arclen=m\n";
    out << "t_s,pos_x_m,pos_y_m,pos_z_m,vel_x_mps,vel_y_mps,vel_z_mps,"
           "roll_deg,pitch_deg,heading_deg,stance,arclen_m\n";
    for (const auto& s : truth) {
        const EulerAngles e = euler_from_rotmat(quat_to_rotmat(s.q));
        out << format_double(s.t);
        for (int i = 0; i < 3; ++i) out << ',' << format_double(s.r(i));
        for (int i = 0; i < 3; ++i) out << ',' << format_double(s.v(i));
        out << ',' << format_double(e.roll * kRadToDeg)
            << ',' << format_double(e.pitch * kRadToDeg)
            << ',' << format_double(e.heading * kRadToDeg)
            << ',' << (s.stance ? 1 : 0)
            << ',' << format_double(s.arclen) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "# units: t_s=s pos=m vel=m/s angles=deg\n";
    out << "t_s,pos_x_m,pos_y_m,pos_z_m,vel_x_mps,vel_y_mps,vel_z_mps,"
           "roll_deg,pitch_deg,heading_deg,stance,qmd,heading_source\n";
    for (const auto& p : traj) {
        out << format_double(p.t);
        for (int i = 0; i < 3; ++i) out << ',' << format_double(p.r(i));
        for (int i = 0; i < 3; ++i) out << ',' << format_double(p.v(i));
        out << ',' << format_double(p.euler.roll * kRadToDeg)
            << ',' << format_double(p.euler.pitch * kRadToDeg)
            << ',' << format_double(p.euler.heading * kRadToDeg)
            << ',' << (p.stance ? 1 : 0)
            << ',' << opt_int(p.qmd)
            << ',' << to_string(p.heading_source) << '\n';
    }
}

void write_run_detector_csv(std::ostream& out, const Trajectory& traj,
                            std::span<const StepTrace> traces, Variant variant) {
    out << "# units: t_s=s shoe_T,qmd_T=unitless flags=0/1\n";
    out << "t_s,shoe_T,stance,qmd_T,qmd_flag,heading_source\n";
    for (size_t k = 0; k < traj.size(); ++k) {
        const auto& tr = traces[k];
        std::optional<double> stat;
        std::optional<int> flag;
        if (variant == Variant::Aiez) {
            stat = tr.qmd_T;
            flag = tr.qmd_flag;
        } else if (variant == Variant::IezClassicalQmd) {
            stat = tr.cqmd_var;
            flag = tr.cqmd_flag;
        }
        out << format_double(traj[k].t) << ','
            << (std::isnan(tr.shoe_T) ? std::string{} : format_double(tr.shoe_T)) << ','
            << (tr.stance ? 1 : 0) << ','
            << opt_double(stat) << ','
            << opt_int(flag) << ','
            << to_string(tr.heading_source) << '\n';
    }
}

void write_detect_csv(std::ostream& out, const Trajectory& traj,
                      std::span<const StepTrace> traces) {
    out << "# units: t_s=s headings=deg statistics=unitless flags=0/1\n";
    out << "t_s,psi_ins_deg,psi_compass_deg,shoe_T,stance,qmd_T,qmd_flag,"
           "cqmd_var,cqmd_flag,heading_source\n";
    for (size_t k = 0; k < traj.size(); ++k) {
        const auto& tr = traces[k];
        out << format_double(traj[k].t) << ','
            << opt_deg(tr.psi_ins) << ','
            << opt_deg(tr.psi_compass) << ','
            << (std::isnan(tr.shoe_T) ? std::string{} : format_double(tr.shoe_T)) << ','
            << (tr.stance ? 1 : 0) << ','
            << opt_double(tr.qmd_T) << ','
            << opt_int(tr.qmd_flag) << ','
            << opt_double(tr.cqmd_var) << ','
            << opt_int(tr.cqmd_flag) << ','
            << to_string(tr.heading_source) << '\n';
    }
}

void write_metrics_csv(std::ostream& out,
                       std::span<const std::pair<std::string, RunMetrics>> rows,
                       bool extended) {
    if (extended) {
        out << "variant,position_error_m,ttd_error_pct,vertical_error_m,total_distance_m\n";
    } else {
        out << "variant,position_error_m,ttd_error_pct\n";
    }
    for (const auto& [name, m] : rows) {
        out << name << ',' << format_double(m.final_position_error) << ','
            << format_double(m.ttd_error_pct);
        if (extended) {
            out << ',' << format_double(m.vertical_error) << ','
                << format_double(m.total_distance);
        }
        out << '\n';
    }
}

}  // namespace pdr
