#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "roesser/roesser.h"

using json = nlohmann::json;

namespace {

std::string model_path(const char* name) { return std::string(ROESSER_MODELS_DIR) + "/" + name; }

roesser_model* load(const char* name) {
  roesser_model* m = nullptr;
  EXPECT_EQ(roesser_model_load_file(model_path(name).c_str(), &m), ROESSER_OK) << roesser_last_error();
  return m;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_file(const char* stem) {
  return (std::filesystem::temp_directory_path() / (std::string(stem) + "_" + std::to_string(::getpid()))).string();
}

}  // namespace

TEST(Capi, Version) { EXPECT_STRNE(roesser_version(), ""); }

TEST(Capi, LoadErrors) {
  roesser_model* m = reinterpret_cast<roesser_model*>(0x1);
  EXPECT_EQ(roesser_model_load_string("{\"n\": 2}", &m), ROESSER_E_PARSE);
  EXPECT_EQ(m, nullptr);
  EXPECT_NE(std::string(roesser_last_error()).find("kinds"), std::string::npos) << roesser_last_error();
  EXPECT_EQ(roesser_model_load_file("/nonexistent.json", &m), ROESSER_E_IO);
  EXPECT_EQ(roesser_model_load_string(nullptr, &m), ROESSER_E_INVALID_ARGUMENT);
  EXPECT_EQ(roesser_model_load_string("{}", nullptr), ROESSER_E_INVALID_ARGUMENT);
  // bad arguments to run functions
  roesser_report* r = nullptr;
  EXPECT_EQ(roesser_run_oracle(nullptr, nullptr, &r), ROESSER_E_INVALID_ARGUMENT);
  roesser_model_free(nullptr);
  roesser_report_free(nullptr);
}

TEST(Capi, LastErrorClearedOnSuccess) {
  roesser_model* m = nullptr;
  ASSERT_NE(roesser_model_load_string("[", &m), ROESSER_OK);
  EXPECT_STRNE(roesser_last_error(), "");
  m = load("s1.json");
  EXPECT_STREQ(roesser_last_error(), "");
  roesser_model_free(m);
}

TEST(Capi, ModelRoundTrip) {
  roesser_model* m = load("needs_degree1.json");
  ASSERT_NE(m, nullptr);
  EXPECT_EQ(roesser_model_dimensions(m), 2u);
  roesser_model* back = nullptr;
  ASSERT_EQ(roesser_model_load_string(roesser_model_json(m), &back), ROESSER_OK);
  EXPECT_STREQ(roesser_model_json(back), roesser_model_json(m));
  EXPECT_EQ(json::parse(roesser_model_json(m))["blocks"], json::parse(slurp(model_path("needs_degree1.json")))["blocks"]);
  roesser_model_free(back);
  roesser_model_free(m);
}

TEST(Capi, OracleVerdicts) {
  roesser_oracle_options o;
  roesser_oracle_options_init(&o);
  EXPECT_EQ(o.samples_per_dim, 2048u);
  EXPECT_EQ(o.include_infinity, 1);
  struct Case {
    const char* file;
    roesser_verdict v;
    const char* name;
  };
  for (const Case& c : {Case{"s1.json", ROESSER_VERDICT_STABLE, "stable"},
                        Case{"s2.json", ROESSER_VERDICT_UNSTABLE, "unstable"},
                        Case{"decoupled3d.json", ROESSER_VERDICT_STABLE, "stable"}}) {
    roesser_model* m = load(c.file);
    roesser_report* r = nullptr;
    if (roesser_model_dimensions(m) > 2) o.samples_per_dim = 64;
    ASSERT_EQ(roesser_run_oracle(m, &o, &r), ROESSER_OK) << roesser_last_error();
    EXPECT_EQ(roesser_report_verdict(r), c.v) << c.file;
    EXPECT_STREQ(roesser_report_verdict_name(r), c.name);
    const json j = json::parse(roesser_report_json(r));
    EXPECT_EQ(j["verdict"], c.name);
    EXPECT_STRNE(roesser_report_text(r), "");
    EXPECT_EQ(roesser_report_write_csv(r, tmp_file("oracle_csv").c_str()), ROESSER_E_INVALID_ARGUMENT);
    roesser_report_free(r);
    roesser_model_free(m);
  }
}

TEST(Capi, OracleConfigErrors) {
  roesser_model* m = load("s1.json");
  roesser_oracle_options o;
  roesser_oracle_options_init(&o);
  o.samples_per_dim = 1;
  roesser_report* r = nullptr;
  EXPECT_EQ(roesser_run_oracle(m, &o, &r), ROESSER_E_INVALID_ARGUMENT);
  EXPECT_EQ(r, nullptr);
  roesser_model_free(m);

  m = load("decoupled3d.json");
  roesser_oracle_options_init(&o);
  o.samples_per_dim = 100000;
  EXPECT_EQ(roesser_run_oracle(m, &o, &r), ROESSER_E_CONFIG_TOO_LARGE);
  roesser_model_free(m);
}

TEST(Capi, Certify) {
  roesser_certify_options o;
  roesser_certify_options_init(&o);
  EXPECT_EQ(o.basis, ROESSER_BASIS_AUTO);
  o.samples_per_dim = 1024;
  roesser_model* m = load("s1.json");
  roesser_report* r = nullptr;
  ASSERT_EQ(roesser_run_certify(m, &o, &r), ROESSER_OK) << roesser_last_error();
  EXPECT_EQ(roesser_report_verdict(r), ROESSER_VERDICT_STABLE);
  EXPECT_STREQ(roesser_report_verdict_name(r), "certified_stable");
  EXPECT_EQ(json::parse(roesser_report_json(r))["certifying_degree"], 0);
  roesser_report_free(r);
  roesser_model_free(m);

  m = load("needs_degree1.json");
  o.max_degree = 0;
  ASSERT_EQ(roesser_run_certify(m, &o, &r), ROESSER_OK);
  EXPECT_EQ(roesser_report_verdict(r), ROESSER_VERDICT_INDETERMINATE);
  EXPECT_NE(std::string(roesser_report_text(r)).find("increase max-degree"), std::string::npos);
  roesser_report_free(r);
  roesser_model_free(m);

  m = load("mixed.json");
  roesser_certify_options_init(&o);
  o.basis = ROESSER_BASIS_MOEBIUS;
  roesser_model* s1 = load("s1.json");
  EXPECT_EQ(roesser_run_certify(s1, &o, &r), ROESSER_E_INVALID_ARGUMENT);
  EXPECT_NE(std::string(roesser_last_error()).find("moebius"), std::string::npos) << roesser_last_error();
  roesser_model_free(s1);
  o.samples_per_dim = 1024;
  ASSERT_EQ(roesser_run_certify(m, &o, &r), ROESSER_OK) << roesser_last_error();
  EXPECT_EQ(roesser_report_verdict(r), ROESSER_VERDICT_STABLE);
  roesser_report_free(r);
  roesser_model_free(m);
}

TEST(Capi, SimulateAndCsv) {
  roesser_sim_options o;
  roesser_sim_options_init(&o);
  o.j1 = o.j2 = 60;
  o.decay_window = 20;
  o.trials = 1;
  roesser_model* m = load("s1.json");
  roesser_report* r = nullptr;
  ASSERT_EQ(roesser_run_simulate(m, &o, &r), ROESSER_OK) << roesser_last_error();
  EXPECT_EQ(roesser_report_verdict(r), ROESSER_VERDICT_STABLE);
  EXPECT_STREQ(roesser_report_verdict_name(r), "decaying");
  const std::string path = tmp_file("sim_csv");
  ASSERT_EQ(roesser_report_write_csv(r, path.c_str()), ROESSER_OK);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "d,s");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 60 + 60 - 1);
  std::remove(path.c_str());
  EXPECT_EQ(roesser_report_write_csv(r, "/nonexistent/dir/x.csv"), ROESSER_E_IO);
  roesser_report_free(r);
  roesser_model_free(m);

  m = load("mixed.json");
  EXPECT_EQ(roesser_run_simulate(m, &o, &r), ROESSER_E_UNSUPPORTED_KIND);
  roesser_model_free(m);
}

TEST(Capi, DumpSdp) {
  roesser_certify_options o;
  roesser_certify_options_init(&o);
  roesser_model* m = load("s1.json");
  const std::string path = tmp_file("dump_sdp");
  ASSERT_EQ(roesser_dump_sdp(m, &o, 0, path.c_str()), ROESSER_OK) << roesser_last_error();
  const std::string text = slurp(path);
  EXPECT_FALSE(text.empty());
  std::remove(path.c_str());
  EXPECT_EQ(roesser_dump_sdp(m, &o, 0, "/nonexistent/dir/x.sdp"), ROESSER_E_IO);
  roesser_model_free(m);
}
