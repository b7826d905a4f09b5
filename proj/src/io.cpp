#include "halphen_lab/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace hl {

using nlohmann::ordered_json;

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted)
        fail(ErrorCode::ParseError, "unterminated quoted CSV field");
    fields.push_back(cur);
    return fields;
}

namespace {

const char* const kTrajectoryHeader[] = {"T", "Omega1", "Omega2", "Omega3", "Omega1_dot", "Omega2_dot", "Omega3_dot"};

double parse_number(const std::string& s, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

ordered_json num(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return x;
}

ordered_json vec(const Vec3& v) { return ordered_json::array({num(v[0]), num(v[1]), num(v[2])}); }

std::string dump(const ordered_json& j) { return j.dump(2); }

} // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    for (int c = 0; c < 7; ++c)
        os << (c ? "," : "") << kTrajectoryHeader[c];
    os << "\n";
    for (const auto& s : traj.samples) {
        os << format_double(s.T);
        for (double v : s.Omega)
            os << "," << format_double(v);
        for (double v : s.Omega_dot)
            os << "," << format_double(v);
        os << "\n";
    }
}

Trajectory read_trajectory_csv(std::istream& is, System sys)
{
    std::string line;
    if (!std::getline(is, line))
        fail(ErrorCode::ParseError, "empty trajectory file");
    auto header = split_csv_line(line);
    if (header.size() != 7)
        fail(ErrorCode::ParseError, "trajectory header must have 7 columns");
    for (int c = 0; c < 7; ++c)
        if (header[std::size_t(c)] != kTrajectoryHeader[c])
            fail(ErrorCode::ParseError, "unexpected trajectory column '" + header[std::size_t(c)] + "'");
    std::vector<RealTriAxial> states;
    std::vector<Vec3> dots;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        auto f = split_csv_line(line);
        if (f.size() != 7)
            fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 7 fields");
        double v[7];
        for (int c = 0; c < 7; ++c)
            v[c] = parse_number(f[std::size_t(c)], lineno);
        states.push_back({{v[1], v[2], v[3]}, v[0]});
        dots.push_back({v[4], v[5], v[6]});
    }
    Trajectory traj = trajectory_from_states(sys, states);
    for (std::size_t i = 0; i < dots.size(); ++i)
        traj.samples[i].Omega_dot = dots[i];
    return traj;
}

void write_flow_csv(std::ostream& os, const FlowRun& run)
{
    os << "T,t,Omega1,Omega2,Omega3,volume,scalar_curvature\n";
    for (std::size_t i = 0; i < run.traj.samples.size(); ++i) {
        const auto& s = run.traj.samples[i];
        bool positive = s.Omega[0] > 0 && s.Omega[1] > 0 && s.Omega[2] > 0;
        os << format_double(s.T) << "," << format_double(run.t[i]);
        for (double v : s.Omega)
            os << "," << format_double(v);
        os << "," << format_double(run.volume[i]) << ","
           << format_double(positive ? flow_scalar_curvature(s.Omega) : NAN) << "\n";
    }
}

std::string trajectory_json(const Trajectory& traj)
{
    ordered_json j;
    j["system"] = system_name(traj.system);
    j["tol"] = traj.tol;
    j["accepted_steps"] = traj.accepted;
    j["rejected_steps"] = traj.rejected;
    j["termination"] = termination_name(traj.reason);
    j["root_times"] = traj.root_times;
    ordered_json samples = ordered_json::array();
    for (const auto& s : traj.samples)
        samples.push_back({{"T", num(s.T)}, {"Omega", vec(s.Omega)}, {"Omega_dot", vec(s.Omega_dot)}, {"tau", num(s.tau)}});
    j["samples"] = std::move(samples);
    return dump(j);
}

namespace {

ordered_json endpoint_json(const Trajectory& traj, EndpointSide side)
{
    ordered_json j;
    try {
        EndpointClass c = classify_endpoint(traj, side);
        j["kind"] = endpoint_kind_name(c.kind);
        j["n"] = num(c.n);
        j["zeta"] = num(c.zeta);
        j["fit_quality"] = num(c.fit_quality);
        j["exponents"] = vec(c.exponents);
    } catch (const Error& e) {
        j["kind"] = endpoint_kind_name(EndpointKind::Undetermined);
        j["error"] = error_name(e.code());
        j["message"] = e.what();
    }
    return j;
}

} // namespace

std::string curvature_report_json(const Trajectory& traj)
{
    ordered_json j;
    j["system"] = system_name(traj.system);
    ordered_json samples = ordered_json::array();
    for (const auto& s : traj.samples) {
        ordered_json row;
        row["T"] = num(s.T);
        try {
            CurvatureDecomp d = curvature_on_system(traj.system, {s.Omega, s.T});
            const double scale = std::max(1.0, d.riemann_norm());
            GeometryFlags f = classify_geometry(d, 1e-8 * scale);
            row["Wplus"] = num(d.Wplus.norm());
            row["Wminus"] = num(d.Wminus.norm());
            row["C"] = num(d.Cplus.norm());
            row["s"] = num(std::abs(d.s));
            row["flags"] = {{"einstein", f.einstein},
                            {"ricci_flat", f.ricci_flat},
                            {"self_dual", f.self_dual},
                            {"anti_self_dual", f.anti_self_dual},
                            {"conformally_self_dual", f.conformally_self_dual},
                            {"conformally_anti_self_dual", f.conformally_anti_self_dual},
                            {"conformally_flat", f.conformally_flat}};
        } catch (const Error& e) {
            row["error"] = error_name(e.code());
        }
        samples.push_back(std::move(row));
    }
    j["samples"] = std::move(samples);
    j["endpoints"] = {{"lower", endpoint_json(traj, EndpointSide::Lower)},
                      {"upper", endpoint_json(traj, EndpointSide::Upper)}};
    return dump(j);
}

std::string flow_summary_json(const FlowRun& run)
{
    const auto& first = run.traj.samples.front();
    const auto& last = run.traj.samples.back();
    ordered_json j;
    j["initial"] = {{"T", num(first.T)}, {"Omega", vec(first.Omega)}};
    j["final"] = {{"T", num(last.T)}, {"t", num(run.t.back())}, {"Omega", vec(last.Omega)}};
    j["trapped"] = run.stayed_positive;
    j["root_times"] = run.traj.root_times;
    j["termination"] = termination_name(run.traj.reason);
    double dev = 0.0;
    for (double w : last.Omega)
        dev = std::max(dev, std::abs(last.T * w - 1.0));
    j["asymptote_deviation"] = num(dev);
    j["isotropy_at_end"] = num(isotropy_ratio(run, last.T));
    j["volume_initial"] = num(run.volume.front());
    j["volume_final"] = num(run.volume.back());
    return dump(j);
}

} // namespace hl
