#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bennett8_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace bennett8::cli;

  CLI::App app{"Spherical and spatial eight-bar linkages built from isogram cells"};
  app.require_subcommand(1);

  std::string spec;
  auto* validate = app.add_subcommand("validate", "Check a spec and print it with derived quantities");
  validate->add_option("spec", spec, "Spec file (JSON)")->required();

  auto* derive = app.add_subcommand("derive", "Fill in the third isogram and offsets");
  derive->add_option("spec", spec, "Spec file (JSON)")->required();

  PoseOptions pose_opt;
  std::string pose_out, pose_obj;
  auto* pose = app.add_subcommand("pose", "Assemble one pose and write a scene");
  pose->add_option("spec", spec, "Spec file (JSON)")->required();
  pose->add_option("--phi", pose_opt.phi, "Driving angle in radians")->required();
  pose->add_option("--out", pose_out, "Scene JSON path (default: stdout)");
  pose->add_option("--obj", pose_obj, "OBJ polyline export path");
  pose->add_option("--segments", pose_opt.segments, "Samples per circle in OBJ export")->capture_default_str();

  SweepOptions sweep_opt;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Sample the motion and write a CSV");
  sweep->add_option("spec", spec, "Spec file (JSON)")->required();
  sweep->add_option("--from", sweep_opt.from, "First driving angle")->capture_default_str();
  sweep->add_option("--to", sweep_opt.to, "Last driving angle")->capture_default_str();
  sweep->add_option("--samples", sweep_opt.samples, "Number of samples (>= 2)")->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
  sweep->add_flag("--uniform-angle", sweep_opt.uniform_angle, "Space samples uniformly in the angle");
  sweep->add_option("--threads", sweep_opt.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "Check every invariant family on a grid of poses");
  verify->add_option("spec", spec, "Spec file (JSON)")->required();
  verify->add_option("--phi-grid", verify_opt.grid, "Number of grid angles")->capture_default_str();
  verify->add_option("--tol", verify_opt.tol, "Pass tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  if (*validate) return run_validate(spec, std::cout, std::cerr);
  if (*derive) return run_derive(spec, std::cout, std::cerr);
  if (*pose) {
    if (!pose_out.empty()) pose_opt.out = pose_out;
    if (!pose_obj.empty()) pose_opt.obj = pose_obj;
    return run_pose(spec, pose_opt, std::cout, std::cerr);
  }
  if (*sweep) {
    if (!sweep_out.empty()) sweep_opt.out = sweep_out;
    return run_sweep(spec, sweep_opt, std::cout, std::cerr);
  }
  return run_verify(spec, verify_opt, std::cout, std::cerr);
}
