#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qimg/cli.hpp"
#include "qimg/pgm.hpp"
#include "qimg/rng.hpp"

using namespace qimg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "qimg_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string make_image(const std::string& name, int side,
                       std::uint64_t seed) {
  Pgm img;
  img.width = side;
  img.height = side;
  img.maxval = 255;
  img.pixels.resize(static_cast<std::size_t>(side) * side);
  RandomStream rs(seed, 0, 0);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rs.next_u64() % 256);
  const fs::path p = temp_dir() / name;
  write_pgm(p.string(), img);
  return p.string();
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("encode writes the full report schema") {
  const std::string img = make_image("enc_in.pgm", 4, 1);
  const std::string report = (temp_dir() / "enc.json").string();
  const std::string out = (temp_dir() / "enc_round.pgm").string();
  const int rc = run_cli({"encode", "--carrier", img, "--out", out,
                          "--report", report, "--epsilon", "0.02"});
  REQUIRE(rc == kExitOk);
  const json r = load_json(report);
  CHECK(r["config"]["command"] == "encode");
  CHECK(r["config"]["epsilon"] == 0.02);
  CHECK(r["config"]["embedder"].is_null());
  CHECK(r["per_pixel"].size() == 16);
  CHECK(r["per_pixel"][0].contains("gray"));
  CHECK(r["per_pixel"][0].contains("phase"));
  CHECK(r["aggregate"]["n"] == 2);
  CHECK(r["aggregate"]["pixel_count"] == 16);
  CHECK(r["aggregate"]["round_trip_exact"] == true);
  // the round-trip image equals the input
  CHECK(read_pgm(out).pixels == read_pgm(img).pixels);
}

TEST_CASE("synthesize emits records, aggregate and null comparison") {
  const std::string car = make_image("syn_car.pgm", 4, 2);
  const std::string emb = make_image("syn_emb.pgm", 4, 3);
  const std::string report = (temp_dir() / "syn.json").string();
  const int rc =
      run_cli({"synthesize", "--carrier", car, "--embedder", emb, "--report",
               report, "--n1", "16", "--n2", "16", "--seed", "5"});
  REQUIRE(rc == kExitOk);
  const json r = load_json(report);
  CHECK(r["config"]["operator"] == "corrected");
  CHECK(r["config"]["mode"] == "analytic");
  CHECK(r["per_pixel"].size() == 16);
  const json& rec = r["per_pixel"][0];
  CHECK(rec.contains("input_sum"));
  CHECK(rec.contains("output_phase"));
  CHECK(rec.contains("delta"));
  CHECK(rec.contains("pointwise_ratio"));
  CHECK(rec.contains("overflow_class"));
  CHECK(r["aggregate"].contains("interval_ratio"));
  CHECK(r["aggregate"].contains("fidelity"));
  CHECK_FALSE(r["aggregate"]["uncertainty"].is_null());
  CHECK(r["comparison"].is_null());
}

TEST_CASE("synthesize with both kinds writes two images and a comparison") {
  const std::string car = make_image("both_car.pgm", 4, 4);
  const std::string emb = make_image("both_emb.pgm", 4, 5);
  const std::string report = (temp_dir() / "both.json").string();
  const std::string out = (temp_dir() / "both_out.pgm").string();
  const int rc = run_cli({"synthesize", "--carrier", car, "--embedder", emb,
                          "--out", out, "--report", report, "--operator",
                          "both", "--seed", "9"});
  REQUIRE(rc == kExitOk);
  CHECK(fs::exists(temp_dir() / "both_out.corrected.pgm"));
  CHECK(fs::exists(temp_dir() / "both_out.naive.pgm"));
  CHECK_FALSE(fs::exists(out));
  const json r = load_json(report);
  CHECK(r["comparison"].contains("corrected"));
  CHECK(r["comparison"].contains("naive"));
  CHECK(r["comparison"]["naive"].contains("exception_rate"));
  const double corrected = r["comparison"]["corrected"]["exception_rate"];
  const double naive = r["comparison"]["naive"]["exception_rate"];
  CHECK(corrected >= 0.0);
  CHECK(naive <= 1.0);
}

TEST_CASE("a single-kind run writes the plain output path") {
  const std::string car = make_image("one_car.pgm", 2, 6);
  const std::string emb = make_image("one_emb.pgm", 2, 7);
  const std::string report = (temp_dir() / "one.json").string();
  const std::string out = (temp_dir() / "one_out.pgm").string();
  const int rc = run_cli({"synthesize", "--carrier", car, "--embedder", emb,
                          "--out", out, "--report", report, "--operator",
                          "naive"});
  REQUIRE(rc == kExitOk);
  CHECK(fs::exists(out));
  const json r = load_json(report);
  CHECK(r["per_pixel"][0]["delta"].is_null());
  CHECK(r["aggregate"]["uncertainty"].is_null());
}

TEST_CASE("analyze always compares both kinds") {
  const std::string car = make_image("ana_car.pgm", 4, 8);
  const std::string emb = make_image("ana_emb.pgm", 4, 9);
  const std::string report = (temp_dir() / "ana.json").string();
  const int rc = run_cli(
      {"analyze", "--carrier", car, "--embedder", emb, "--report", report});
  REQUIRE(rc == kExitOk);
  const json r = load_json(report);
  CHECK(r["config"]["operator"] == "both");
  CHECK(r["config"]["out"].is_null());
  CHECK(r["comparison"].contains("corrected"));
  CHECK(r["comparison"].contains("naive"));
}

TEST_CASE("bench reports trend rows and the uncertainty block") {
  const std::string report = (temp_dir() / "bench.json").string();
  const int rc = run_cli({"mpe-bench", "--report", report, "--resources",
                          "4,16", "--trials", "2000", "--mode", "povm",
                          "--seed", "11"});
  REQUIRE(rc == kExitOk);
  const json r = load_json(report);
  REQUIRE(r["single"].size() == 2);
  REQUIRE(r["joint"].size() == 4);
  CHECK(r["single"][0]["resource"] == 4);
  CHECK(r["single"][0].contains("product_se"));
  CHECK(r["joint"][0].contains("joint_lhs_se"));
  CHECK(r["uncertainty"]["joint_bound"] == 1.2615941559557649);
  CHECK(r["config"]["resources"] == json::array({4, 16}));
}

TEST_CASE("high-resource estimation leaves no overflow") {
  const std::string car = make_image("hi_car.pgm", 4, 30);
  const std::string emb = make_image("hi_emb.pgm", 4, 31);
  const std::string report = (temp_dir() / "hi.json").string();
  const int rc = run_cli({"synthesize", "--carrier", car, "--embedder", emb,
                          "--report", report, "--n1", "1000000", "--n2",
                          "1000000"});
  REQUIRE(rc == kExitOk);
  const json r = load_json(report);
  CHECK(r["aggregate"]["overflow_rate"] == 0.0);
  CHECK(r["aggregate"]["underflow_rate"] == 0.0);
  // at sigma = 1e-3 the estimates track the truth to a few parts in 1e3
  const double fid = r["aggregate"]["fidelity"];
  CHECK(fid > 0.999);
}

TEST_CASE("reports are byte identical across reruns") {
  const std::string car = make_image("det_car.pgm", 4, 10);
  const std::string emb = make_image("det_emb.pgm", 4, 11);
  const std::string report = (temp_dir() / "det.json").string();
  const std::vector<std::string> args = {
      "synthesize", "--carrier", car,      "--embedder", emb,
      "--report",   report,      "--mode", "povm",       "--operator",
      "both",       "--seed",    "13"};
  REQUIRE(run_cli(args) == kExitOk);
  const std::string first = slurp(report);
  REQUIRE(run_cli(args) == kExitOk);
  CHECK(first == slurp(report));
  CHECK_FALSE(first.empty());
}

TEST_CASE("environment variables stand in for flags") {
  const std::string img = make_image("env_in.pgm", 2, 12);
  const std::string report = (temp_dir() / "env.json").string();
  setenv("QIMG_SEED", "777", 1);
  setenv("QIMG_EPSILON", "0.015", 1);
  const int rc = run_cli({"encode", "--carrier", img, "--report", report});
  unsetenv("QIMG_SEED");
  unsetenv("QIMG_EPSILON");
  REQUIRE(rc == kExitOk);
  const json r = load_json(report);
  CHECK(r["config"]["seed"] == 777);
  CHECK(r["config"]["epsilon"] == 0.015);
}

TEST_CASE("exit codes sort the failure families") {
  const std::string img = make_image("err_in.pgm", 2, 13);
  const std::string report = (temp_dir() / "err.json").string();
  // missing input file
  CHECK(run_cli({"encode", "--carrier",
                 (temp_dir() / "nope.pgm").string(), "--report", report}) ==
        kExitIo);
  // guard band out of range
  CHECK(run_cli({"encode", "--carrier", img, "--report", report, "--epsilon",
                 "0.9"}) == kExitValidation);
  // oversized image
  const std::string big = make_image("err_big.pgm", 128, 14);
  CHECK(run_cli({"encode", "--carrier", big, "--report", report}) ==
        kExitResourceCap);
  // unknown subcommand and missing required flag
  CHECK(run_cli({"bogus"}) == kExitValidation);
  CHECK(run_cli({"encode"}) == kExitValidation);
  // mismatched shapes
  const std::string small = make_image("err_small.pgm", 4, 15);
  const std::string other = make_image("err_other.pgm", 2, 16);
  CHECK(run_cli({"synthesize", "--carrier", small, "--embedder", other,
                 "--report", report}) == kExitValidation);
  // bench guards
  CHECK(run_cli({"mpe-bench", "--report", report, "--trials", "10"}) ==
        kExitValidation);
  CHECK(run_cli({"mpe-bench", "--report", report, "--resources", "0"}) ==
        kExitValidation);
  // povm resource past the sampler cap
  CHECK(run_cli({"mpe-bench", "--report", report, "--resources", "8192",
                 "--mode", "povm"}) == kExitValidation);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli({"--help"}) == kExitOk);
  CHECK(run_cli({"synthesize", "--help"}) == kExitOk);
}

}  // TEST_SUITE
