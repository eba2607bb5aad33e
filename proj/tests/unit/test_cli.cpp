#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "json.hpp"

#include "bennett8_cli/commands.hpp"
#include "bennett8_cli/spec_file.hpp"

namespace bennett8::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kSpecs = BENNETT8_SPEC_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bennett8_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const json& doc) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump(2);
    return p;
  }

  static json load(const std::string& name) {
    std::ifstream in(kSpecs / name);
    return json::parse(in);
  }

  fs::path dir_;
};

TEST_F(CliTest, BundledSpecsValidate) {
  for (const char* name : {"spherical8_figure.json", "spherical8_mixed.json", "spatial8_figure.json",
                           "spherical_isogram.json", "bennett_isogram.json"}) {
    std::ostringstream out, err;
    EXPECT_EQ(run_validate(kSpecs / name, out, err), kExitOk) << name << ": " << err.str();
    EXPECT_TRUE(json::accept(out.str())) << name;
  }
}

TEST_F(CliTest, OverlongBasisIsRejectedWithItsConstraint) {
  json doc = load("spherical8_figure.json");
  doc["u3"] = 3.2;
  std::ostringstream out, err;
  EXPECT_EQ(run_validate(write("bad.json", doc), out, err), kExitInvalid);
  const json diag = json::parse(err.str());
  EXPECT_EQ(diag["error"], "InvalidSpec");
  EXPECT_EQ(diag["constraint"], "alpha1 + alpha2 < pi");
}

TEST_F(CliTest, UnknownFieldsAndVersionsAreRejected) {
  json doc = load("spherical_isogram.json");
  doc["gamma"] = 1.0;
  std::ostringstream out, err;
  EXPECT_EQ(run_validate(write("extra.json", doc), out, err), kExitInvalid);
  EXPECT_NE(err.str().find("gamma"), std::string::npos);

  doc = load("spherical_isogram.json");
  doc["schema_version"] = 2;
  std::ostringstream out2, err2;
  EXPECT_EQ(run_validate(write("version.json", doc), out2, err2), kExitInvalid);

  std::ostringstream out3, err3;
  EXPECT_EQ(run_validate(dir_ / "missing.json", out3, err3), kExitInvalid);
}

TEST_F(CliTest, SpatialProportionViolationIsRejected) {
  json doc = load("spatial8_figure.json");
  doc["b1"] = doc["b1"].get<double>() * 1.01;
  std::ostringstream out, err;
  EXPECT_EQ(run_validate(write("b1.json", doc), out, err), kExitInvalid);
  EXPECT_EQ(json::parse(err.str())["constraint"], "isogram 1 proportion");
}

TEST_F(CliTest, AlignedPoseSceneLiesOnTheFixedCircle) {
  std::ostringstream out, err;
  PoseOptions opt;
  opt.phi = 0.0;
  ASSERT_EQ(run_pose(kSpecs / "spherical8_figure.json", opt, out, err), kExitOk) << err.str();
  const json scene = json::parse(out.str());
  EXPECT_TRUE(scene["collapsed"].get<bool>());
  EXPECT_TRUE(scene["symmetry"].is_null());
  std::set<std::string> labels;
  for (const json& j : scene["joints"]) {
    labels.insert(j["label"].get<std::string>());
    EXPECT_LT(std::abs(j["point"][2].get<double>()), 1e-12) << j["label"];
  }
  EXPECT_EQ(labels.size(), 12u);
  EXPECT_EQ(scene["joints"].size(), 12u);
}

TEST_F(CliTest, SpatialSceneCarriesSymmetryElements) {
  std::ostringstream out, err;
  PoseOptions opt;
  opt.phi = 0.8;
  opt.obj = dir_ / "scene.obj";
  opt.segments = 16;
  ASSERT_EQ(run_pose(kSpecs / "spatial8_figure.json", opt, out, err), kExitOk) << err.str();
  const json scene = json::parse(out.str());
  EXPECT_FALSE(scene["collapsed"].get<bool>());
  EXPECT_FALSE(scene["symmetry"].is_null());
  std::set<std::string> labels;
  for (const json& j : scene["joints"]) labels.insert(j["label"].get<std::string>());
  EXPECT_EQ(labels.size(), 12u);
  EXPECT_TRUE(labels.count("I01") && labels.count("I32"));

  std::ifstream obj(*opt.obj);
  std::string text((std::istreambuf_iterator<char>(obj)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("o g0"), std::string::npos);
  EXPECT_NE(text.find("\nv "), std::string::npos);
  EXPECT_NE(text.find("\nl "), std::string::npos);
}

TEST_F(CliTest, SweepIsDeterministicAndWellFormed) {
  SweepOptions opt;
  opt.samples = 17;
  opt.threads = 4;
  std::ostringstream a, b, err;
  ASSERT_EQ(run_sweep(kSpecs / "spatial8_figure.json", opt, a, err), kExitOk) << err.str();
  opt.threads = 1;
  ASSERT_EQ(run_sweep(kSpecs / "spatial8_figure.json", opt, b, err), kExitOk) << err.str();
  EXPECT_EQ(a.str(), b.str());

  std::istringstream rows(a.str());
  std::string line;
  std::getline(rows, line);
  const auto columns = std::count(line.begin(), line.end(), ',');
  EXPECT_EQ(line.rfind("phi1,", 0), 0u);
  int count = 0;
  while (std::getline(rows, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns);
    ++count;
  }
  EXPECT_EQ(count, 17);
}

TEST_F(CliTest, SweepWritesTheRequestedFile) {
  SweepOptions opt;
  opt.samples = 5;
  opt.out = dir_ / "sweep.csv";
  std::ostringstream out, err;
  ASSERT_EQ(run_sweep(kSpecs / "spherical_isogram.json", opt, out, err), kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(*opt.out));
  EXPECT_GT(fs::file_size(*opt.out), 100u);
}

TEST_F(CliTest, VerifyPassesOnEveryBundledSpec) {
  for (const char* name : {"spherical8_figure.json", "spherical8_mixed.json", "spatial8_figure.json",
                           "spherical_isogram.json", "bennett_isogram.json"}) {
    std::ostringstream out, err;
    EXPECT_EQ(run_verify(kSpecs / name, VerifyOptions{}, out, err), kExitOk) << name << "\n" << out.str() << err.str();
  }
}

TEST_F(CliTest, VerifyFailsUnderAnImpossibleTolerance) {
  VerifyOptions opt;
  opt.grid = 5;
  opt.tol = 1e-30;
  std::ostringstream out, err;
  EXPECT_EQ(run_verify(kSpecs / "spherical8_figure.json", opt, out, err), kExitVerifyFailed);
}

TEST_F(CliTest, DeriveOutputRevalidates) {
  json doc = load("spatial8_figure.json");
  doc.erase("beta3");
  doc.erase("branch3");
  doc.erase("b3");
  doc.erase("b2");
  doc["derive"] = true;
  std::ostringstream out, err;
  ASSERT_EQ(run_derive(write("partial.json", doc), out, err), kExitOk) << err.str();
  const json derived = json::parse(out.str());
  EXPECT_TRUE(derived.contains("beta3"));
  EXPECT_TRUE(derived.contains("b3"));
  EXPECT_NEAR(derived["beta3"].get<double>(), load("spatial8_figure.json")["beta3"].get<double>(), 1e-12);
  std::ostringstream out2, err2;
  EXPECT_EQ(run_validate(write("derived.json", derived), out2, err2), kExitOk) << err2.str();
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string cli = BENNETT8_CLI_PATH;
  const std::string quiet = " > /dev/null 2>&1";
  auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
  EXPECT_EQ(status(std::system((cli + " validate " + (kSpecs / "spherical8_figure.json").string() + quiet).c_str())), 0);
  EXPECT_EQ(status(std::system((cli + " pose " + (kSpecs / "spherical8_figure.json").string() + quiet).c_str())), 1);
  EXPECT_EQ(status(std::system((cli + " frobnicate" + quiet).c_str())), 1);
  EXPECT_EQ(status(std::system((cli + " verify --phi-grid 3 --tol 1e-30 " +
                                (kSpecs / "spherical_isogram.json").string() + quiet)
                                   .c_str())),
            2);
}

}  // namespace
}  // namespace bennett8::cli
