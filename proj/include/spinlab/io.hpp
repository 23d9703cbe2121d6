#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "spinlab/analysis.hpp"
#include "spinlab/integrate.hpp"
#include "spinlab/model.hpp"

namespace spinlab::io {

/// JSON config schema: ixx, iyy, izz, ixy, ibr, iby (kg m^2), optional
/// omega_mag (rad/s, default 1) and initial_omega ([3] dimensionless,
/// default zero).
SystemConfig load_config(const std::filesystem::path& path);
SystemConfig parse_config(const std::string& json_text);
std::string config_to_json(const SystemConfig& cfg);
void save_config(const SystemConfig& cfg, const std::filesystem::path& path);

/// Exact trajectory CSV header; the H columns carry the inertial-frame
/// angular momentum for conservation audits.
std::string trajectory_csv_header();

void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path);

void write_error_table_csv(std::span<const ErrorReport> reports,
                           const std::filesystem::path& path);

void write_sweep_csv(const SweepResult& sweep,
                     const std::filesystem::path& path);

/// Writes via a temp file in the same directory, then renames into place.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace spinlab::io
