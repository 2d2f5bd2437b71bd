#include "mixop/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "mixop/json_io.hpp"

namespace mixop::cli {
namespace {

std::string fmt(const char* spec, double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvariantViolation("cannot write '" + path + "'");
  f << text;
}

struct Options {
  std::string input;
  std::string input_b;
  std::string out;
  std::string metric = "w1";
  std::string plan;
  double epsilon = 1e-3;
  int max_iter = 100000;
  std::size_t n_quantiles = kDefaultQuantiles;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  unsigned threads = 1;
};

int cmd_mix(const Options& o, std::ostream& out) {
  const MetaMeasure nu = parse_meta_measure(read_file(o.input));
  const DiscreteMeasure mixed = mix(nu);
  write_text(o.out, to_json(mixed) + "\n");
  out << fmt("%.12g", mass(mixed)) << '\n';
  return kOk;
}

int cmd_parametric_mix(const Options& o, std::ostream& out) {
  const ThetaMeasure lambda = parse_theta_measure(read_file(o.input));
  const DiscreteMeasure mixed = mix_theta(lambda, o.n_quantiles);
  write_text(o.out, to_json(mixed) + "\n");
  out << fmt("%.12g", mass(mixed)) << '\n';
  return kOk;
}

int cmd_dist(const Options& o, std::ostream& out) {
  const DiscreteMeasure a = parse_measure(read_file(o.input));
  const DiscreteMeasure b = parse_measure(read_file(o.input_b));
  double value = 0.0;
  if (o.metric == "w1") {
    W1Result r = w1_exact(a, b);
    value = r.cost;
    if (!o.plan.empty()) {
      std::ofstream f(o.plan, std::ios::binary);
      if (!f) throw InvariantViolation("cannot write '" + o.plan + "'");
      write_plan_csv(f, r.plan);
    }
  } else if (o.metric == "bl") {
    value = bl_distance(a, b);
  } else {
    SinkhornOptions opt;
    opt.epsilon = o.epsilon;
    opt.max_iter = o.max_iter;
    value = w1_sinkhorn(a, b, opt).value;
  }
  out << fmt("%.12g", value) << '\n';
  return kOk;
}

int cmd_converge(const Options& o, std::ostream& out, std::ostream& err) {
  ConvergenceConfig cfg = parse_convergence_config(read_file(o.input));
  if (o.seed) cfg.spec.seed = *o.seed;
  if (o.steps) cfg.spec.steps = *o.steps;
  cfg.options.threads = o.threads;
  const ConvergenceRun run = run_convergence(cfg.spec, cfg.sets, cfg.options);

  {
    std::ofstream csv(o.out + ".csv", std::ios::binary);
    if (!csv) throw InvariantViolation("cannot write '" + o.out + ".csv'");
    write_report_csv(csv, run.report);
  }
  write_text(o.out + ".json", summary_json(run));

  bool inconclusive = false;
  for (std::size_t a = 0; a < run.report.set_ids.size(); ++a) {
    out << run.report.set_ids[a] << ' ' << to_string(run.report.verdicts[a]) << '\n';
    inconclusive = inconclusive || run.report.verdicts[a] == Verdict::Inconclusive;
  }
  out << "final d_meta " << fmt("%.12g", run.certificate.final_d_meta) << ", final d_mixed "
      << fmt("%.12g", run.certificate.final_d_mixed) << '\n';
  if (inconclusive) {
    err << "at least one test set is inconclusive\n";
    return kInconclusive;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixing operator on spaces of discrete measures", "mixop"};
  app.require_subcommand(1);
  Options o;

  auto* mix_cmd = app.add_subcommand("mix", "Flatten a meta-measure into its mixture");
  mix_cmd->add_option("input", o.input, "MetaMeasure JSON file")->required();
  mix_cmd->add_option("--out", o.out, "Output measure JSON path")->required();

  auto* pmix_cmd = app.add_subcommand("parametric-mix", "Mixture of quantized normals from a theta measure");
  pmix_cmd->add_option("input", o.input, "ThetaMeasure JSON file")->required();
  pmix_cmd->add_option("--out", o.out, "Output measure JSON path")->required();
  pmix_cmd->add_option("--n-quantiles", o.n_quantiles, "Atoms per normal component")->check(CLI::PositiveNumber);

  auto* dist_cmd = app.add_subcommand("dist", "Distance between two measures");
  dist_cmd->add_option("a", o.input, "First measure JSON file")->required();
  dist_cmd->add_option("b", o.input_b, "Second measure JSON file")->required();
  dist_cmd->add_option("--metric", o.metric, "w1, bl or sinkhorn")
      ->check(CLI::IsMember({"w1", "bl", "sinkhorn"}));
  dist_cmd->add_option("--epsilon", o.epsilon, "Entropic regularization for sinkhorn")
      ->check(CLI::PositiveNumber);
  dist_cmd->add_option("--max-iter", o.max_iter, "Iteration cap for sinkhorn")->check(CLI::PositiveNumber);
  dist_cmd->add_option("--plan", o.plan, "Write the optimal plan as CSV (w1 only)");

  auto* conv_cmd = app.add_subcommand("converge", "Run a convergence experiment");
  conv_cmd->add_option("spec", o.input, "Sequence spec JSON file")->required();
  conv_cmd->add_option("--out", o.out, "Output prefix for <out>.csv and <out>.json")->required();
  conv_cmd->add_option("--seed", o.seed, "Override the spec seed");
  conv_cmd->add_option("--steps", o.steps, "Override the number of steps");
  conv_cmd->add_option("--threads", o.threads, "Workers evaluating steps (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "mixop: " << e.what() << '\n';
    return kMalformedInput;
  }

  try {
    if (*mix_cmd) return cmd_mix(o, out);
    if (*pmix_cmd) return cmd_parametric_mix(o, out);
    if (*dist_cmd) return cmd_dist(o, out);
    return cmd_converge(o, out, err);
  } catch (const FormatError& e) {
    err << "mixop: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const MassMismatch& e) {
    err << "mixop: " << e.what() << "; use --metric bl for measures of different mass\n";
    return kMassMismatch;
  } catch (const NonexpansiveViolation& e) {
    err << "mixop: " << e.what() << '\n';
    return kNonexpansiveViolation;
  } catch (const std::exception& e) {
    err << "mixop: " << e.what() << '\n';
    return kInvariantViolation;
  }
}

}  // namespace mixop::cli
