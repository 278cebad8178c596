#include "qimg/cli.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qimg/analysis.hpp"
#include "qimg/pgm.hpp"
#include "qimg/phase_image.hpp"
#include "qimg/report.hpp"
#include "qimg/synthesis.hpp"

namespace qimg {

namespace {

GrayImage load_gray(const std::string& path) {
  const Pgm raw = read_pgm(path);
  const int n = image_exponent(raw.width, raw.height);
  return make_gray_image(n, raw.pixels);
}

Pgm to_pgm(const GrayImage& img) {
  Pgm out;
  out.width = img.side();
  out.height = img.side();
  out.maxval = 255;
  out.pixels = img.pixels;
  return out;
}

// "img.pgm" + "corrected" -> "img.corrected.pgm"
std::string suffixed_path(const std::string& path, const std::string& tag) {
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of("/\\");
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return path + "." + tag;
  }
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < kPi / 8.0)) {
    throw ValidationError("--epsilon must lie in (0, pi/8)");
  }
  if (cfg.n1 < 1 || cfg.n2 < 1) {
    throw ValidationError("--n1 and --n2 must be >= 1");
  }
  if (cfg.command == "mpe-bench") {
    if (cfg.resources.empty()) {
      throw ValidationError("--resources must list at least one N");
    }
    for (int r : cfg.resources) {
      if (r < 1) throw ValidationError("--resources entries must be >= 1");
    }
    if (cfg.trials < 1000) {
      throw ValidationError("--trials must be >= 1000");
    }
  }
}

void write_config(JsonWriter& w, const RunConfig& cfg) {
  auto path_or_null = [&w](const std::string& p) {
    if (p.empty()) {
      w.null();
    } else {
      w.value(p);
    }
  };
  w.key("config").begin_object();
  w.key("command").value(cfg.command);
  w.key("carrier");
  path_or_null(cfg.carrier_path);
  w.key("embedder");
  path_or_null(cfg.embedder_path);
  w.key("out");
  path_or_null(cfg.output_path);
  w.key("report");
  path_or_null(cfg.report_path);
  w.key("n1").value(cfg.n1);
  w.key("n2").value(cfg.n2);
  w.key("mode").value(noise_mode_name(cfg.mode));
  w.key("operator").value(cfg.operator_kind);
  w.key("seed").value(cfg.seed);
  w.key("epsilon").value(cfg.epsilon);
  w.key("resources").begin_array();
  for (int r : cfg.resources) w.value(r);
  w.end_array();
  w.key("trials").value(cfg.trials);
  w.end_object();
}

void write_uncertainty(JsonWriter& w,
                       const std::optional<UncertaintyBlock>& u) {
  if (!u) {
    w.null();
    return;
  }
  w.begin_object();
  w.key("delta_phi").value(u->delta_phi);
  w.key("delta_theta").value(u->delta_theta);
  w.key("delta_n1").value(u->delta_n1);
  w.key("delta_n2").value(u->delta_n2);
  w.key("product1").value(u->product1);
  w.key("product2").value(u->product2);
  w.key("joint_lhs").value(u->joint_lhs);
  w.key("joint_bound").value(u->joint_bound);
  w.end_object();
}

void write_metrics(JsonWriter& w, const MetricsReport& m) {
  w.key("per_pixel").begin_array();
  for (const PixelRecord& rec : m.per_pixel) {
    w.begin_object();
    w.key("pixel").value(rec.pixel);
    w.key("input_sum").value(rec.input_sum);
    w.key("output_phase").value(rec.output_phase);
    w.key("delta");
    if (rec.delta) {
      w.value(*rec.delta);
    } else {
      w.null();
    }
    w.key("pointwise_ratio").value(rec.pointwise_ratio);
    w.key("overflow_class").value(overflow_class_name(rec.overflow_class));
    w.end_object();
  }
  w.end_array();

  const AggregateMetrics& a = m.aggregate;
  w.key("aggregate").begin_object();
  w.key("interval_ratio");
  if (a.interval_ratio) {
    w.value(*a.interval_ratio);
  } else {
    w.null();
  }
  w.key("overflow_rate").value(a.overflow_rate);
  w.key("underflow_rate").value(a.underflow_rate);
  w.key("ok_rate").value(a.ok_rate);
  w.key("mean_pointwise_ratio").value(a.mean_pointwise_ratio);
  w.key("fidelity");
  if (a.fidelity) {
    w.value(*a.fidelity);
  } else {
    w.null();
  }
  w.key("uncertainty");
  write_uncertainty(w, a.uncertainty);
  w.end_object();
}

void write_rate_summary(JsonWriter& w, const MetricsReport& m) {
  const AggregateMetrics& a = m.aggregate;
  w.begin_object();
  w.key("overflow_rate").value(a.overflow_rate);
  w.key("underflow_rate").value(a.underflow_rate);
  w.key("exception_rate").value(a.overflow_rate + a.underflow_rate);
  w.end_object();
}

int cmd_encode(const RunConfig& cfg) {
  const GrayImage img = load_gray(cfg.carrier_path);
  const PhaseImage phases = encode_image(img, cfg.epsilon);
  const GrayImage round_trip = decode_image(phases, cfg.epsilon);
  const bool exact = round_trip.pixels == img.pixels;

  if (!cfg.output_path.empty()) {
    write_pgm(cfg.output_path, to_pgm(round_trip));
  }

  JsonWriter w;
  w.begin_object();
  write_config(w, cfg);
  w.key("per_pixel").begin_array();
  for (std::size_t j = 0; j < img.pixel_count(); ++j) {
    w.begin_object();
    w.key("pixel").value(j);
    w.key("gray").value(static_cast<std::int64_t>(img.pixels[j]));
    w.key("phase").value(phases.phases[j]);
    w.end_object();
  }
  w.end_array();
  w.key("aggregate").begin_object();
  w.key("n").value(img.n);
  w.key("pixel_count").value(img.pixel_count());
  w.key("round_trip_exact").value(exact);
  w.end_object();
  w.end_object();
  write_file_atomic(cfg.report_path, w.str() + "\n");
  return kExitOk;
}

// Shared by synthesize (images + report) and analyze (report only).
int run_synthesis(const RunConfig& cfg, bool write_images) {
  const GrayImage carrier_gray = load_gray(cfg.carrier_path);
  const GrayImage embedder_gray = load_gray(cfg.embedder_path);
  if (carrier_gray.n != embedder_gray.n) {
    throw ValidationError("carrier and embedder dimensions differ: " +
                          std::to_string(carrier_gray.side()) + " vs " +
                          std::to_string(embedder_gray.side()));
  }
  const PhaseImage carrier = encode_image(carrier_gray, cfg.epsilon);
  const PhaseImage embedder = encode_image(embedder_gray, cfg.epsilon);

  std::vector<OperatorKind> kinds;
  if (cfg.operator_kind == "corrected") {
    kinds = {OperatorKind::Corrected};
  } else if (cfg.operator_kind == "naive") {
    kinds = {OperatorKind::Naive};
  } else if (cfg.operator_kind == "both") {
    kinds = {OperatorKind::Corrected, OperatorKind::Naive};
  } else {
    throw ValidationError("--operator must be corrected, naive or both");
  }

  std::vector<SynthesisRun> runs;
  runs.reserve(kinds.size());
  for (OperatorKind kind : kinds) {
    runs.push_back(synthesize(carrier, embedder, cfg.n1, cfg.n2, cfg.mode,
                              cfg.seed, kind));
  }

  if (write_images && !cfg.output_path.empty()) {
    for (const SynthesisRun& run : runs) {
      const GrayImage out_img = decode_image(run.result_image, cfg.epsilon);
      const std::string path =
          runs.size() == 1
              ? cfg.output_path
              : suffixed_path(cfg.output_path,
                              operator_kind_name(run.operator_kind));
      write_pgm(path, to_pgm(out_img));
    }
  }

  JsonWriter w;
  w.begin_object();
  write_config(w, cfg);
  write_metrics(w, runs.front().metrics);
  w.key("comparison");
  if (runs.size() == 2) {
    w.begin_object();
    w.key(operator_kind_name(runs[0].operator_kind));
    write_rate_summary(w, runs[0].metrics);
    w.key(operator_kind_name(runs[1].operator_kind));
    write_rate_summary(w, runs[1].metrics);
    w.end_object();
  } else {
    w.null();
  }
  w.end_object();
  write_file_atomic(cfg.report_path, w.str() + "\n");
  return kExitOk;
}

int cmd_mpe_bench(const RunConfig& cfg) {
  const TrendTable table =
      trend_table(cfg.resources, cfg.trials, cfg.seed, cfg.mode);

  constexpr std::uint64_t kBenchPhiStream = 0x40000000ull;
  constexpr std::uint64_t kBenchThetaStream = 0x41000000ull;
  const auto phi = sample_readings(0.0, cfg.n1, cfg.mode, cfg.seed,
                                   kBenchPhiStream, cfg.trials);
  const auto theta = sample_readings(0.0, cfg.n2, cfg.mode, cfg.seed,
                                     kBenchThetaStream, cfg.trials);
  const UncertaintyBlock u = uncertainty_report(phi, theta, cfg.n1, cfg.n2);

  JsonWriter w;
  w.begin_object();
  write_config(w, cfg);
  w.key("single").begin_array();
  for (const SingleTrend& row : table.single) {
    w.begin_object();
    w.key("resource").value(row.resource);
    w.key("spread").value(row.spread);
    w.key("product").value(row.product);
    w.key("product_se").value(row.product_se);
    w.end_object();
  }
  w.end_array();
  w.key("joint").begin_array();
  for (const JointTrend& row : table.joint) {
    w.begin_object();
    w.key("n1").value(row.n1);
    w.key("n2").value(row.n2);
    w.key("product1").value(row.product1);
    w.key("product2").value(row.product2);
    w.key("joint_spread").value(row.joint_spread);
    w.key("joint_lhs").value(row.joint_lhs);
    w.key("joint_lhs_se").value(row.joint_lhs_se);
    w.end_object();
  }
  w.end_array();
  w.key("uncertainty");
  write_uncertainty(w, u);
  w.end_object();
  write_file_atomic(cfg.report_path, w.str() + "\n");
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Phase-encoded quantum image synthesis simulator"};
  app.require_subcommand(1);

  const std::map<std::string, NoiseMode> mode_map{
      {"analytic", NoiseMode::Analytic}, {"povm", NoiseMode::PovmOracle}};

  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--n1", cfg.n1, "Carrier estimation resource N1")
        ->envname("QIMG_N1");
    sub->add_option("--n2", cfg.n2, "Embedder estimation resource N2")
        ->envname("QIMG_N2");
    sub->add_option("--mode", cfg.mode, "Noise model: analytic or povm")
        ->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case))
        ->envname("QIMG_MODE");
    sub->add_option("--seed", cfg.seed, "Random stream seed")
        ->envname("QIMG_SEED");
    sub->add_option("--epsilon", cfg.epsilon,
                    "Guard band of the gray-to-phase map, in (0, pi/8)")
        ->envname("QIMG_EPSILON");
  };

  CLI::App* enc = app.add_subcommand(
      "encode", "Encode a grayscale PGM into pixel phases");
  enc->add_option("--carrier", cfg.carrier_path, "Input PGM")
      ->required()
      ->envname("QIMG_CARRIER");
  enc->add_option("--out", cfg.output_path, "Round-trip PGM output")
      ->envname("QIMG_OUT");
  enc->add_option("--report", cfg.report_path, "JSON report path")
      ->required()
      ->envname("QIMG_REPORT");
  add_shared(enc);

  CLI::App* syn = app.add_subcommand(
      "synthesize", "Embed one image's phases into a carrier image");
  syn->add_option("--carrier", cfg.carrier_path, "Carrier PGM")
      ->required()
      ->envname("QIMG_CARRIER");
  syn->add_option("--embedder", cfg.embedder_path, "Embedder PGM")
      ->required()
      ->envname("QIMG_EMBEDDER");
  syn->add_option("--out", cfg.output_path, "Synthesized PGM output")
      ->envname("QIMG_OUT");
  syn->add_option("--report", cfg.report_path, "JSON report path")
      ->required()
      ->envname("QIMG_REPORT");
  syn->add_option("--operator", cfg.operator_kind,
                  "Operator kind: corrected, naive or both")
      ->check(CLI::IsMember({"corrected", "naive", "both"}))
      ->envname("QIMG_OPERATOR");
  add_shared(syn);

  CLI::App* ana = app.add_subcommand(
      "analyze", "Run both operator kinds and report metrics only");
  ana->add_option("--carrier", cfg.carrier_path, "Carrier PGM")
      ->required()
      ->envname("QIMG_CARRIER");
  ana->add_option("--embedder", cfg.embedder_path, "Embedder PGM")
      ->required()
      ->envname("QIMG_EMBEDDER");
  ana->add_option("--report", cfg.report_path, "JSON report path")
      ->required()
      ->envname("QIMG_REPORT");
  add_shared(ana);

  CLI::App* ben = app.add_subcommand(
      "mpe-bench", "Benchmark estimation precision against the bounds");
  ben->add_option("--report", cfg.report_path, "JSON report path")
      ->required()
      ->envname("QIMG_REPORT");
  ben->add_option("--resources", cfg.resources,
                  "Comma-separated resource list for the trend table")
      ->delimiter(',')
      ->envname("QIMG_RESOURCES");
  ben->add_option("--trials", cfg.trials, "Draws per trend row (>= 1000)")
      ->envname("QIMG_TRIALS");
  add_shared(ben);

  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("qimg");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (enc->parsed()) {
      cfg.command = "encode";
    } else if (syn->parsed()) {
      cfg.command = "synthesize";
    } else if (ana->parsed()) {
      cfg.command = "analyze";
      cfg.operator_kind = "both";
    } else {
      cfg.command = "mpe-bench";
    }
    validate_config(cfg);

    if (cfg.command == "encode") return cmd_encode(cfg);
    if (cfg.command == "synthesize") return run_synthesis(cfg, true);
    if (cfg.command == "analyze") return run_synthesis(cfg, false);
    return cmd_mpe_bench(cfg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  } catch (const ResourceCapError& e) {
    std::fprintf(stderr, "qimg: %s\n", e.what());
    return kExitResourceCap;
  } catch (const IoError& e) {
    std::fprintf(stderr, "qimg: %s\n", e.what());
    return kExitIo;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "qimg: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qimg: %s\n", e.what());
    return kExitValidation;
  }
}

}  // namespace qimg
