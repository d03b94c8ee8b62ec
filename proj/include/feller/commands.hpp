#pragma once

#include <filesystem>

#include "feller/config.hpp"

namespace feller {

inline constexpr const char* kToolVersion = "0.1.0";

// Each command validates its inputs, writes a JSON report (embedding the
// config hash and tool version) plus any CSV artifacts into out_dir, and
// returns the process exit code: 0 pass, 1 property failure. Missing
// upstream artifacts throw MissingInput; the CLI maps that (and any
// validation error) to exit 2.

int cmd_verify_semigroup(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_bounds(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_corrupt(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_regularize(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_audit(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
              bool diagnostic = false);
int cmd_fdd(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace feller
