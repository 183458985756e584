#include "sprt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "sprt/batch_strategy.hpp"
#include "sprt/errors.hpp"
#include "sprt/montecarlo.hpp"
#include "sprt/unambiguous.hpp"

#ifndef SPRT_COHERENT_VERSION
#define SPRT_COHERENT_VERSION "0.0.0"
#endif

namespace sprt::cli {

using json = nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

namespace {

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file '" + path + "'");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing output file '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Flags shared by every command that describes a two-coherent-state problem.
struct ProblemFlags {
  std::size_t n = 0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  void add_to(CLI::App& app) {
    app.add_option("--n", n, "Total number of copies N")->required();
    app.add_option("--theta0", theta0, "Quadrature mean Re(gamma_0) under H0")->required();
    app.add_option("--theta1", theta1, "Quadrature mean Re(gamma_1) under H1")->required();
    app.add_option("--alpha", alpha, "Type-I error bound")->required();
    app.add_option("--beta", beta, "Type-II error bound")->required();
  }

  BatchProblem problem() const {
    BatchProblem p{n, theta0, theta1, {alpha, beta}};
    p.validate();
    return p;
  }

  void record(json& params) const {
    params["n"] = n;
    params["theta0"] = theta0;
    params["theta1"] = theta1;
    params["alpha"] = alpha;
    params["beta"] = beta;
  }
};

// Everything needed to re-execute one invocation.
struct Manifest {
  std::string command;
  json parameters = json::object();  // flag name -> value (bool true means bare flag)
  json outputs = json::object();     // flag name -> path
  std::optional<std::string> manifest_out;

  bool has_outputs() const { return !outputs.empty(); }

  void add_output(const std::string& flag, const std::string& path) {
    if (!path.empty()) outputs[flag] = path;
  }

  void write(double seconds) const {
    if (!has_outputs() && !manifest_out) return;
    std::string path = manifest_out ? *manifest_out : outputs.begin().value().get<std::string>() + ".manifest.json";
    json m;
    m["schema_version"] = kSchemaVersion;
    m["tool"] = "sprt_coherent";
    m["tool_version"] = SPRT_COHERENT_VERSION;
    m["command"] = command;
    m["parameters"] = parameters;
    if (parameters.contains("seed")) m["seed"] = parameters["seed"];
    m["outputs"] = outputs;
    m["wall_clock_seconds"] = seconds;
    write_file(path, m.dump(2) + "\n");
  }
};

// Parses "a:b" into an inclusive integer range.
std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ParameterError("--l-range must look like FIRST:LAST");
  try {
    const long a = std::stol(s.substr(0, colon));
    const long b = std::stol(s.substr(colon + 1));
    if (a < 1 || b < a) throw ParameterError("--l-range needs 1 <= FIRST <= LAST");
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ParameterError*>(&e)) throw;
    throw ParameterError("--l-range must look like FIRST:LAST");
  }
}

class Driver {
 public:
  Driver(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Sequential probability ratio tests for coherent-state discrimination", "sprt_coherent"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SPRT_COHERENT_VERSION);

    ProblemFlags closed_flags, opt_flags, sim_flags;
    Manifest manifest;
    std::function<void()> action;
    std::string manifest_out;

    // closed-form
    auto* closed = app.add_subcommand("closed-form", "Stopping probabilities p0, p1, p_s per batch size l");
    closed_flags.add_to(*closed);
    std::size_t closed_l = 0;
    std::string l_range, closed_out;
    bool closed_json = false;
    auto* l_opt = closed->add_option("--l", closed_l, "Single batch size l");
    closed->add_option("--l-range", l_range, "Inclusive range FIRST:LAST (default 1:N)")->excludes(l_opt);
    closed->add_option("--out", closed_out, "Write the table to FILE instead of stdout");
    closed->add_flag("--json", closed_json, "Emit JSON instead of CSV");
    closed->add_option("--manifest-out", manifest_out, "Manifest path (default: <out>.manifest.json)");
    closed->callback([&] {
      action = [&] { closed_form(closed_flags, closed_l, l_range, closed_out, closed_json, manifest); };
    });

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Optimal batch size, case class and closed-form estimates");
    opt_flags.add_to(*optimize);
    std::string opt_out;
    optimize->add_option("--out", opt_out, "Write the JSON report to FILE instead of stdout");
    optimize->add_flag("--json", "Accepted for symmetry; the report is always JSON");
    optimize->add_option("--manifest-out", manifest_out, "Manifest path (default: <out>.manifest.json)");
    optimize->callback([&] { action = [&] { optimize_cmd(opt_flags, opt_out, manifest); }; });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo batched SPRT trajectories");
    sim_flags.add_to(*simulate);
    std::size_t sim_l = 1, trajectories = 1000;
    int truth = 0;
    std::uint64_t seed = 0;
    std::string mean_out, paths_out, summary_out;
    bool sim_json = false;
    simulate->add_option("--l", sim_l, "Batch size l")->required();
    simulate->add_option("--truth", truth, "Hypothesis generating the data")->required()->check(CLI::IsMember({0, 1}));
    simulate->add_option("--trajectories", trajectories, "Number of trajectories")->required();
    simulate->add_option("--seed", seed, "64-bit seed")->required();
    simulate->add_option("--mean-out", mean_out, "Mean path CSV (n,z_mean); stdout if absent");
    simulate->add_option("--paths-out", paths_out, "Per-trajectory paths CSV (trajectory,n,z)");
    simulate->add_option("--summary-out", summary_out, "JSON summary with both estimators");
    simulate->add_flag("--json", sim_json, "Print the JSON summary to stdout instead of the mean path");
    simulate->add_option("--manifest-out", manifest_out, "Manifest path (default: first of summary, mean, paths output + .manifest.json)");
    simulate->callback([&] {
      action = [&] {
        simulate_cmd(sim_flags, sim_l, truth, trajectories, seed, mean_out, paths_out, summary_out, sim_json,
                     manifest);
      };
    });

    // unambiguous
    auto* unamb = app.add_subcommand("unambiguous", "Unambiguous qubit discrimination, global vs batched");
    double overlap = -1.0, angle = -1.0;
    std::size_t un_n = 0, un_l = 1;
    std::string un_out;
    bool un_json = false;
    auto* ov = unamb->add_option("--overlap", overlap, "Overlap c = <psi0|psi1> in [0,1]");
    unamb->add_option("--theta-angle", angle, "State angle theta in [0, pi/4]; c = cos(2 theta)")->excludes(ov);
    unamb->add_option("--n", un_n, "Number of copies N")->required();
    unamb->add_option("--l", un_l, "Batch size l (must divide N)")->required();
    unamb->add_option("--out", un_out, "Write the table to FILE instead of stdout");
    unamb->add_flag("--json", un_json, "Emit JSON instead of CSV");
    unamb->add_option("--manifest-out", manifest_out, "Manifest path (default: <out>.manifest.json)");
    unamb->callback([&] {
      action = [&] { unambiguous_cmd(overlap, angle, un_n, un_l, un_out, un_json, manifest); };
    });

    // replay
    auto* replay = app.add_subcommand("replay", "Re-run the invocation recorded in a manifest");
    std::string replay_manifest, output_dir;
    replay->add_option("--manifest", replay_manifest, "Manifest JSON file")->required();
    replay->add_option("--output-dir", output_dir, "Redirect outputs into DIR (same file names)");
    replay->callback([&] { action = [&] { replay_cmd(replay_manifest, output_dir); }; });

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out_ << SPRT_COHERENT_VERSION << "\n";
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitParameter;
    }

    if (!manifest_out.empty()) manifest.manifest_out = manifest_out;
    const auto start = std::chrono::steady_clock::now();
    try {
      action();
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      manifest.write(elapsed.count());
    } catch (const ParameterError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitParameter;
    } catch (const IoError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitIo;
    }
    return exit_code_;
  }

 private:
  void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
      out_ << content;
    } else {
      write_file(path, content);
    }
  }

  void closed_form(const ProblemFlags& f, std::size_t l, const std::string& range, const std::string& out_path,
                   bool as_json, Manifest& m) {
    const BatchProblem prob = f.problem();
    std::size_t first = 1, last = prob.n_total;
    if (l != 0) {
      first = last = l;
    } else if (!range.empty()) {
      std::tie(first, last) = parse_range(range);
    }
    if (last > prob.n_total) throw ParameterError("batch size l must lie in [1, n]");

    m.command = "closed-form";
    f.record(m.parameters);
    if (l != 0) m.parameters["l"] = l;
    if (!range.empty()) m.parameters["l-range"] = range;
    if (as_json) m.parameters["json"] = true;
    m.add_output("out", out_path);

    std::string body;
    if (as_json) {
      json doc;
      doc["schema_version"] = kSchemaVersion;
      doc["command"] = "closed-form";
      doc["rows"] = json::array();
      for (std::size_t k = first; k <= last; ++k) {
        const SuccessReport r = success_probability(k, prob);
        doc["rows"].push_back({{"l", r.l}, {"p0", r.p0}, {"p1", r.p1}, {"ps", r.p_s}});
      }
      body = doc.dump(2) + "\n";
    } else {
      body = "l,p0,p1,ps\n";
      for (std::size_t k = first; k <= last; ++k) {
        const SuccessReport r = success_probability(k, prob);
        body += std::to_string(r.l) + "," + format_number(r.p0) + "," + format_number(r.p1) + "," +
                format_number(r.p_s) + "\n";
      }
    }
    emit(out_path, body);
  }

  void optimize_cmd(const ProblemFlags& f, const std::string& out_path, Manifest& m) {
    const BatchProblem prob = f.problem();
    m.command = "optimize";
    f.record(m.parameters);
    m.add_output("out", out_path);

    const BatchAnalysis a = analyze(prob);
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "optimize";
    doc["case"] = to_string(a.case_class);
    doc["l_argmax"] = a.best.l;
    doc["p_s_max"] = a.best.p_s;
    doc["p0"] = a.best.p0;
    doc["p1"] = a.best.p1;
    doc["l_opt_closed_form"] = nullable(a.l_opt);
    doc["l_opt_rounded"] = a.l_opt ? json(round_batch_size(*a.l_opt, prob.n_total)) : json(nullptr);
    doc["l_min"] = nullable(a.bounds.l_min);
    doc["l_max"] = nullable(a.bounds.l_max);
    doc["l_min_rounded"] = a.bounds.l_min ? json(round_batch_size(*a.bounds.l_min, prob.n_total)) : json(nullptr);
    doc["l_max_rounded"] = a.bounds.l_max ? json(round_batch_size(*a.bounds.l_max, prob.n_total)) : json(nullptr);
    doc["l_invariant"] = a.l_invariant;
    doc["closed_form_agrees"] = a.closed_form_agrees ? json(*a.closed_form_agrees) : json(nullptr);
    doc["note"] = a.l_invariant ? "l-invariant" : "";
    std::string rec;
    if (a.case_class == CaseClass::CaseI) {
      rec = "random guess";
    } else if (a.l_invariant) {
      rec = "any l";
    } else if (a.case_class == CaseClass::CaseIII) {
      rec = "any l in plateau [l_min, l_max]";
    } else {
      rec = "l = " + std::to_string(a.best.l);
    }
    doc["recommendation"] = rec;
    emit(out_path, doc.dump(2) + "\n");
  }

  void simulate_cmd(const ProblemFlags& f, std::size_t l, int truth, std::size_t trajectories, std::uint64_t seed,
                    const std::string& mean_out, const std::string& paths_out, const std::string& summary_out,
                    bool as_json, Manifest& m) {
    SimulationConfig cfg;
    cfg.seed = seed;
    cfg.trajectories = trajectories;
    cfg.truth = truth == 0 ? Hypothesis::H0 : Hypothesis::H1;
    cfg.prob = f.problem();
    cfg.l = l;
    cfg.validate();

    m.command = "simulate";
    f.record(m.parameters);
    m.parameters["l"] = l;
    m.parameters["truth"] = truth;
    m.parameters["trajectories"] = trajectories;
    m.parameters["seed"] = seed;
    if (as_json) m.parameters["json"] = true;
    m.add_output("summary-out", summary_out);
    m.add_output("mean-out", mean_out);
    m.add_output("paths-out", paths_out);

    const SimulationResult res = simulate(cfg, !paths_out.empty());
    const WaldThresholds t = cfg.effective_thresholds();

    std::string mean_csv = "n,z_mean\n";
    for (std::size_t n = 0; n < res.mean_path.size(); ++n) {
      mean_csv += std::to_string(n + 1) + "," + format_number(res.mean_path[n]) + "\n";
    }

    const SuccessReport closed = success_probability(l, cfg.prob);
    const GaussianHypotheses model = cfg.batched_model();
    const double n0 = static_cast<double>(cfg.prob.n_total) / static_cast<double>(l);
    const double horizon_d = static_cast<double>(cfg.horizon());
    const bool h0 = cfg.truth == Hypothesis::H0;

    auto estimate_json = [](const EstimateWithCI& e) {
      return json{{"point", e.point}, {"stderr", e.std_error}, {"n_trials", e.n_trials}};
    };
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "simulate";
    doc["seed"] = seed;
    doc["truth"] = truth;
    doc["l"] = l;
    doc["horizon_batches"] = cfg.horizon();
    doc["leftover_copies"] = cfg.leftover_copies();
    doc["thresholds"] = {{"log_a", t.log_a}, {"log_b", t.log_b}};
    doc["horizon_estimate"] = estimate_json(res.horizon_estimate);
    doc["first_crossing_estimate"] = estimate_json(res.first_crossing_estimate);
    doc["closed_form"] = {{"n0", n0},
                          {"p0", closed.p0},
                          {"p1", closed.p1},
                          {"ps", closed.p_s},
                          {"p_truth", h0 ? closed.p0 : closed.p1}};
    doc["exact_horizon"] = {
        {"n0", horizon_d},
        {"p_truth", h0 ? exact_horizon_prob_h0(model, horizon_d, t.log_a) : exact_horizon_prob_h1(model, horizon_d, t.log_b)}};
    doc["drift"] = {{"slope", res.drift.slope}, {"stderr", res.drift.std_error}, {"expected", res.drift.expected}};
    const std::string summary = doc.dump(2) + "\n";

    if (!summary_out.empty()) write_file(summary_out, summary);
    if (!mean_out.empty()) write_file(mean_out, mean_csv);
    if (!paths_out.empty()) {
      std::string csv = "trajectory,n,z\n";
      for (std::size_t i = 0; i < res.paths.size(); ++i) {
        for (std::size_t n = 0; n < res.paths[i].size(); ++n) {
          csv += std::to_string(i) + "," + std::to_string(n + 1) + "," + format_number(res.paths[i][n]) + "\n";
        }
      }
      write_file(paths_out, csv);
    }
    if (as_json) {
      out_ << summary;
    } else if (mean_out.empty()) {
      out_ << mean_csv;
    }
  }

  void unambiguous_cmd(double overlap, double angle, std::size_t n, std::size_t l, const std::string& out_path,
                       bool as_json, Manifest& m) {
    m.command = "unambiguous";
    if (angle >= 0.0) {
      QubitPair pair{angle};
      pair.validate();
      m.parameters["theta-angle"] = angle;
      overlap = pair.overlap();
    } else {
      if (overlap < 0.0) throw ParameterError("one of --overlap or --theta-angle is required");
      m.parameters["overlap"] = overlap;
    }
    m.parameters["n"] = n;
    m.parameters["l"] = l;
    if (as_json) m.parameters["json"] = true;
    m.add_output("out", out_path);

    const double global = success_unambiguous(overlap, n);
    const double batched = batched_success_unambiguous(overlap, n, l);
    const bool equal = global == batched;

    std::string body;
    if (as_json) {
      json doc;
      doc["schema_version"] = kSchemaVersion;
      doc["command"] = "unambiguous";
      doc["overlap"] = overlap;
      doc["n"] = n;
      doc["l"] = l;
      doc["ps_global"] = global;
      doc["ps_batched"] = batched;
      doc["equal"] = equal;
      body = doc.dump(2) + "\n";
    } else {
      body = "n,l,overlap,ps_global,ps_batched,equal\n" + std::to_string(n) + "," + std::to_string(l) + "," +
             format_number(overlap) + "," + format_number(global) + "," + format_number(batched) + "," +
             (equal ? "true" : "false") + "\n";
    }
    emit(out_path, body);
    if (!equal) {
      err_ << "error: batched and global success probabilities differ\n";
      exit_code_ = 1;
    }
  }

  void replay_cmd(const std::string& manifest_path, const std::string& output_dir) {
    json m;
    try {
      m = json::parse(read_file(manifest_path));
    } catch (const json::parse_error& e) {
      throw ParameterError("manifest is not valid JSON: " + std::string(e.what()));
    }
    if (!m.contains("command") || !m.contains("parameters")) throw ParameterError("manifest lacks command/parameters");
    std::vector<std::string> args{m["command"].get<std::string>()};
    for (const auto& [key, value] : m["parameters"].items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back("--" + key);
        continue;
      }
      args.push_back("--" + key);
      args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    if (m.contains("outputs")) {
      for (const auto& [key, value] : m["outputs"].items()) {
        std::filesystem::path p = value.get<std::string>();
        if (!output_dir.empty()) p = std::filesystem::path(output_dir) / p.filename();
        args.push_back("--" + key);
        args.push_back(p.string());
      }
    }
    Driver inner(out_, err_);
    exit_code_ = inner.run(args);
  }

  std::ostream& out_;
  std::ostream& err_;
  int exit_code_ = kExitOk;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Driver(out, err).run(args);
}

}  // namespace sprt::cli
