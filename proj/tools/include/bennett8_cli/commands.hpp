#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace bennett8::cli {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitVerifyFailed = 2 };

struct PoseOptions {
  double phi = 0.0;
  std::optional<std::filesystem::path> out;  // scene JSON; stdout when absent
  std::optional<std::filesystem::path> obj;  // OBJ polylines
  int segments = 128;
};

struct SweepOptions {
  double from = -3.0;
  double to = 3.0;
  int samples = 101;
  std::optional<std::filesystem::path> out;  // CSV; stdout when absent
  bool uniform_angle = false;
  unsigned threads = 0;
};

struct VerifyOptions {
  int grid = 25;
  double tol = 1e-8;
};

// Each command writes its result to `out` and structured diagnostics to `err`.
int run_validate(const std::filesystem::path& spec, std::ostream& out, std::ostream& err);
int run_pose(const std::filesystem::path& spec, const PoseOptions& opt, std::ostream& out, std::ostream& err);
int run_sweep(const std::filesystem::path& spec, const SweepOptions& opt, std::ostream& out, std::ostream& err);
int run_verify(const std::filesystem::path& spec, const VerifyOptions& opt, std::ostream& out, std::ostream& err);
int run_derive(const std::filesystem::path& spec, std::ostream& out, std::ostream& err);

}  // namespace bennett8::cli
