#include "spinlab/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spinlab/dynamics.hpp"
#include "spinlab/error.hpp"

namespace spinlab::io {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* field) {
    if (!j.contains(field))
        throw ValidationError(field, "missing required field");
    if (!j[field].is_number())
        throw ValidationError(field, "must be a number");
    return j[field].get<double>();
}

char* fmt9(char* buf, std::size_t cap, double v) {
    std::snprintf(buf, cap, "%.9g", v);
    return buf;
}

}  // namespace

SystemConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("not valid JSON: ") +
                                            e.what());
    }
    if (!j.is_object())
        throw ValidationError("config", "top level must be an object");

    SystemConfig cfg;
    cfg.spin.ixx = require_number(j, "ixx");
    cfg.spin.iyy = require_number(j, "iyy");
    cfg.spin.izz = require_number(j, "izz");
    cfg.spin.ixy = require_number(j, "ixy");
    cfg.platform.ibr = require_number(j, "ibr");
    cfg.platform.iby = require_number(j, "iby");
    if (j.contains("omega_mag"))
        cfg.omega_mag = require_number(j, "omega_mag");
    if (j.contains("initial_omega")) {
        const auto& w = j["initial_omega"];
        if (!w.is_array() || w.size() != 3 || !w[0].is_number() ||
            !w[1].is_number() || !w[2].is_number())
            throw ValidationError("initial_omega",
                                  "must be an array of three numbers");
        cfg.initial_omega = {w[0].get<double>(), w[1].get<double>(),
                             w[2].get<double>()};
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config",
                              "cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SystemConfig& cfg) {
    json j;
    j["ixx"] = cfg.spin.ixx;
    j["iyy"] = cfg.spin.iyy;
    j["izz"] = cfg.spin.izz;
    j["ixy"] = cfg.spin.ixy;
    j["ibr"] = cfg.platform.ibr;
    j["iby"] = cfg.platform.iby;
    j["omega_mag"] = cfg.omega_mag;
    j["initial_omega"] = {cfg.initial_omega.x, cfg.initial_omega.y,
                          cfg.initial_omega.z};
    return j.dump(2) + "\n";
}

void save_config(const SystemConfig& cfg, const std::filesystem::path& path) {
    write_text_atomic(path, config_to_json(cfg));
}

std::string trajectory_csv_header() {
    return "tau, wx, wy, wz, qw, qx, qy, qz, th_x, th_y, th_z, Hx, Hy, Hz";
}

void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path) {
    std::string out;
    out.reserve(traj.size() * 160 + 64);
    out += trajectory_csv_header();
    out += '\n';
    char b[32];
    for (const auto& s : traj.samples) {
        const Vec3 h = angular_momentum_inertial(s.tau, s.omega, s.quat,
                                                 traj.meta.config);
        const double cols[14] = {s.tau,    s.omega.x, s.omega.y, s.omega.z,
                                 s.quat.w, s.quat.x,  s.quat.y,  s.quat.z,
                                 s.euler.x, s.euler.y, s.euler.z,
                                 h.x,      h.y,       h.z};
        for (int i = 0; i < 14; ++i) {
            if (i) out += ", ";
            out += fmt9(b, sizeof b, cols[i]);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_error_table_csv(std::span<const ErrorReport> reports,
                           const std::filesystem::path& path) {
    std::string out =
        "window_lo, window_hi, n_samples, mre, mse, rmse, r2, r2_wx, r2_wy, "
        "r2_wz\n";
    char b[32];
    for (const auto& r : reports) {
        out += fmt9(b, sizeof b, r.window.lo);
        out += ", ";
        out += fmt9(b, sizeof b, r.window.hi);
        out += ", ";
        out += std::to_string(r.n_samples);
        for (double v : {r.mre, r.mse, r.rmse, r.r2, r.r2_components[0],
                         r.r2_components[1], r.r2_components[2]}) {
            out += ", ";
            out += fmt9(b, sizeof b, v);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_sweep_csv(const SweepResult& sweep,
                     const std::filesystem::path& path) {
    std::string out = "ixx_aug, iyy, izz_aug, sigma, lambda, eps_n\n";
    char b[32];
    for (const auto& r : sweep.rows) {
        const double cols[6] = {r.ixx_aug, r.iyy,    r.izz_aug,
                                r.sigma,   r.lambda, r.eps_n};
        for (int i = 0; i < 6; ++i) {
            if (i) out += ", ";
            out += fmt9(b, sizeof b, cols[i]);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace spinlab::io
