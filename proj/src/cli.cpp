#include "trains/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "trains/report.hpp"

namespace trains {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << text;
}

void write_report(const std::string& path, const ordered_json& report) {
  write_text(path, report.dump(2));
}

SequenceFamily parse_family_arg(const std::string& text, const char* what) {
  try {
    // Reuse the spec parser by wrapping the family as an l-sequence.
    const TrainSpec probe = parse_spec(R"({"l": )" + text +
                                       R"(, "r": {"kind": "constant", "value": 0}, "n_max": 1})");
    return probe.l;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("bad ") + what + ": " + e.what());
  }
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("bad integer in ") + what + ": '" + tok + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + " must be non-empty");
  return out;
}

struct AnalyzeArgs {
  std::string spec_path;
  std::string kind = "full";
  int n_max = 0;  // 0: use the spec horizon
  int h_grid = kDefaultGrid;
  double h_floor = 0.0;
  double cap = kDefaultCap;
  int jobs = 0;
  std::string out = "-";
};

void add_analyze_flags(CLI::App* cmd, AnalyzeArgs& a) {
  cmd->add_option("--spec", a.spec_path, "train spec JSON file")->required();
  cmd->add_option("--kind", a.kind, "gamma variant: full|star|zero");
  cmd->add_option("--n-max", a.n_max, "horizon (default: the spec's n_max)");
  cmd->add_option("--h-grid", a.h_grid, "uniform h samples per n");
  cmd->add_option("--h-floor", a.h_floor, "restrict heights to [l0, l_n]");
  cmd->add_option("--cap", a.cap, "saturation cap");
  cmd->add_option("--jobs", a.jobs, "worker cap (0 = all cores; results identical)");
  cmd->add_option("--out", a.out, "report path ('-' = stdout)");
}

KEstimate run_k_estimate(const TrainSpec& spec, const AnalyzeArgs& a) {
  const int n_limit = a.n_max > 0 ? a.n_max : spec.n_max;
  if (n_limit > spec.n_max) {
    throw std::invalid_argument("--n-max exceeds the spec horizon");
  }
  const Train train(spec);
  const GammaEngine engine(train, gamma_kind_from_name(a.kind), a.cap);
  return engine.k_estimate(n_limit, a.h_grid, a.h_floor, a.jobs);
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"hyperbolicity diagnostics for trains and flute surfaces"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand("analyze", "estimate the K functional");
  add_analyze_flags(analyze, analyze_args);

  AnalyzeArgs classify_args;
  bool fail_on_not_hyperbolic = false;
  bool with_necessary = false;
  CLI::App* classify_cmd = app.add_subcommand("classify", "derive a hyperbolicity verdict");
  add_analyze_flags(classify_cmd, classify_args);
  classify_cmd->add_flag("--fail-on-not-hyperbolic", fail_on_not_hyperbolic,
                         "exit 1 on a not-hyperbolic verdict");
  classify_cmd->add_flag("--necessary-checks", with_necessary,
                         "also run the necessary-condition checkers");

  AnalyzeArgs profile_args;
  int profile_n = 1;
  CLI::App* profile = app.add_subcommand("profile", "export h -> min_m Gamma as CSV");
  add_analyze_flags(profile, profile_args);
  profile->add_option("--n", profile_n, "row index n")->required();

  // transform subcommands
  CLI::App* transform = app.add_subcommand("transform", "sequence transforms with bounds");
  transform->require_subcommand(1);
  std::string t_spec_path, t_out = "-", t_out_spec;
  std::string t_dl = R"({"kind":"constant","value":0})";
  std::string t_dr = R"({"kind":"constant","value":0})";
  double t_lambda = 1.0, t_mu = 1.0;
  std::vector<std::string> t_parts;
  std::string t_assign;
  std::string t_sigma;
  int t_displacement = 1;
  std::string t_positions;
  std::string t_filler = R"({"kind":"constant","value":1})";
  int t_gap = 1;
  bool t_with_k = false;
  AnalyzeArgs t_k_args;  // grid parameters for --with-k / --measure
  t_k_args.kind.clear();  // empty: full, except union/permute default to zero
  bool t_measure = false;

  auto add_transform_common = [&](CLI::App* cmd, bool needs_spec) {
    if (needs_spec) cmd->add_option("--spec", t_spec_path, "input spec")->required();
    cmd->add_option("--out", t_out, "report path");
    cmd->add_option("--out-spec", t_out_spec, "write the transformed spec here");
    cmd->add_flag("--with-k", t_with_k, "estimate K of the input for the bound");
    cmd->add_flag("--measure", t_measure, "also estimate K of the output");
    cmd->add_option("--kind", t_k_args.kind, "gamma variant for the estimates");
    cmd->add_option("--n-max", t_k_args.n_max, "horizon for the estimates");
    cmd->add_option("--h-grid", t_k_args.h_grid, "uniform h samples per n");
    cmd->add_option("--jobs", t_k_args.jobs, "worker cap");
  };
  CLI::App* t_perturb = transform->add_subcommand("perturb", "l+dl, r+dr");
  add_transform_common(t_perturb, true);
  t_perturb->add_option("--dl", t_dl, "perturbation family for l (JSON)");
  t_perturb->add_option("--dr", t_dr, "perturbation family for r (JSON)");
  CLI::App* t_scale = transform->add_subcommand("scale", "lambda*l, mu*r");
  add_transform_common(t_scale, true);
  t_scale->add_option("--lambda", t_lambda, "factor for l (>= 1)")->required();
  t_scale->add_option("--mu", t_mu, "factor for r (in [0, lambda])")->required();
  CLI::App* t_union = transform->add_subcommand("union", "merge flute sequences");
  add_transform_common(t_union, false);
  t_union->add_option("--spec", t_parts, "part specs (repeat)")->required();
  t_union->add_option("--interleave", t_assign,
                      "comma list: part index supplying each output position "
                      "(default: round robin)");
  CLI::App* t_permute = transform->add_subcommand("permute", "bounded-displacement reorder");
  add_transform_common(t_permute, true);
  t_permute->add_option("--sigma", t_sigma, "comma list: sigma(1),sigma(2),...")->required();
  t_permute->add_option("--displacement", t_displacement, "max |sigma(n)-n|");
  CLI::App* t_embed = transform->add_subcommand("embed", "base terms at gap-bounded positions");
  add_transform_common(t_embed, true);
  t_embed->add_option("--positions", t_positions, "comma list of output positions")->required();
  t_embed->add_option("--filler", t_filler, "filler family (JSON)");
  t_embed->add_option("--gap", t_gap, "max gap between positions");
  CLI::App* t_companion = transform->add_subcommand("companion", "running-max sequence");
  add_transform_common(t_companion, true);

  // verify
  std::string v_check;
  long long v_samples = 1000000;
  std::uint64_t v_seed = 1;
  RegionSpec v_region;
  int v_jobs = 0;
  std::string v_out = "-";
  CLI::App* verify_cmd = app.add_subcommand("verify", "fuzz one inequality");
  verify_cmd->add_option("--check", v_check, "check id")->required();
  verify_cmd->add_option("--samples", v_samples, "sample count");
  verify_cmd->add_option("--seed", v_seed, "master seed");
  verify_cmd->add_option("--c", v_region.c, "sandwich constant c");
  verify_cmd->add_option("--l-max", v_region.l_max, "length range cap");
  verify_cmd->add_option("--r-max", v_region.r_max, "twist range cap");
  verify_cmd->add_option("--l0", v_region.l0, "lower cutoff for fitted checks");
  verify_cmd->add_option("--density", v_region.density, "grid density for fitted checks");
  verify_cmd->add_option("--jobs", v_jobs, "worker cap");
  verify_cmd->add_option("--out", v_out, "report path");

  // fit-constants
  int f_prop = 48;
  double f_l0 = 1.0;
  int f_density = 40;
  std::string f_out = "-";
  std::string f_report;
  CLI::App* fit_cmd = app.add_subcommand("fit-constants", "grid-fit comparison constants");
  fit_cmd->add_option("--prop", f_prop, "48 or 49")->required();
  fit_cmd->add_option("--l0", f_l0, "lower length cutoff");
  fit_cmd->add_option("--density", f_density, "grid density");
  fit_cmd->add_option("--out", f_out, "CSV path");
  fit_cmd->add_option("--report", f_report, "optional JSON report path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Timer timer;
  try {
    if (*analyze) {
      const TrainSpec spec = load_spec_file(analyze_args.spec_path);
      const KEstimate est = run_k_estimate(spec, analyze_args);
      ordered_json results;
      results["k_estimate"] = to_json(est);
      write_report(analyze_args.out,
                   make_report("analyze", spec_digest(spec), results, timer.ms()));
      return 0;
    }
    if (*classify_cmd) {
      const TrainSpec spec = load_spec_file(classify_args.spec_path);
      const KEstimate est = run_k_estimate(spec, classify_args);
      const Verdict verdict = classify(spec, est);
      ordered_json results;
      results["k_estimate"] = to_json(est);
      results["verdict"] = to_json(verdict);
      if (with_necessary && !est.saturated) {
        const Train train(spec);
        results["necessary_checks"] =
            to_json(necessary_checks(spec, est, quasi_increasing_c1(train).c1));
      }
      write_report(classify_args.out,
                   make_report("classify", spec_digest(spec), results, timer.ms()));
      return (fail_on_not_hyperbolic && verdict.outcome == Verdict::Outcome::NotHyperbolic)
                 ? 1
                 : 0;
    }
    if (*profile) {
      const TrainSpec spec = load_spec_file(profile_args.spec_path);
      const Train train(spec);
      const GammaEngine engine(train, gamma_kind_from_name(profile_args.kind),
                               profile_args.cap);
      const SupResult sup =
          engine.sup_over_h(profile_n, profile_args.h_grid, profile_args.h_floor, true);
      write_text(profile_args.out, profile_to_csv(sup));
      return 0;
    }
    if (*transform) {
      TransformRecord rec;
      std::string digest = "";
      std::optional<double> input_k;
      // The union and permutation bounds speak about the Zero functional.
      const std::string resolved_kind =
          !t_k_args.kind.empty() ? t_k_args.kind
                                 : ((*t_union || *t_permute) ? "zero" : "full");
      auto measure_k = [&](const TrainSpec& s) {
        AnalyzeArgs a = t_k_args;
        a.kind = resolved_kind;
        if (a.n_max == 0 || a.n_max > s.n_max) a.n_max = s.n_max;
        return run_k_estimate(s, a);
      };
      if (*t_union) {
        std::vector<TrainSpec> parts;
        for (const std::string& p : t_parts) parts.push_back(load_spec_file(p));
        long long total = 0;
        for (const TrainSpec& p : parts) total += p.n_max;
        std::vector<int> assignment;
        if (t_assign.empty()) {
          std::vector<int> used(parts.size(), 0);
          std::size_t turn = 0;
          while (static_cast<long long>(assignment.size()) < total) {
            if (used[turn] < parts[turn].n_max) {
              assignment.push_back(static_cast<int>(turn));
              ++used[turn];
            }
            turn = (turn + 1) % parts.size();
          }
        } else {
          assignment = parse_int_list(t_assign, "--interleave");
        }
        std::vector<double> k0;
        if (t_with_k) {
          for (const TrainSpec& p : parts) k0.push_back(measure_k(p).value);
        }
        rec = union_trains(parts, assignment, k0);
        digest = spec_digest(parts.front());
      } else {
        const TrainSpec spec = load_spec_file(t_spec_path);
        digest = spec_digest(spec);
        if (t_with_k) input_k = measure_k(spec).value;
        if (*t_perturb) {
          rec = perturb(spec, parse_family_arg(t_dl, "--dl"), parse_family_arg(t_dr, "--dr"),
                        input_k);
        } else if (*t_scale) {
          rec = scale(spec, t_lambda, t_mu, input_k);
        } else if (*t_permute) {
          rec = permute_bounded(spec, parse_int_list(t_sigma, "--sigma"), t_displacement,
                                input_k);
        } else if (*t_embed) {
          rec = embed_subsequence(spec, parse_int_list(t_positions, "--positions"),
                                  parse_family_arg(t_filler, "--filler"), t_gap);
        } else if (*t_companion) {
          const Train train(spec);
          const auto [companion, c] = companion_nondecreasing(train);
          rec.transform = "companion";
          rec.params.emplace_back("c", c);
          rec.output = TrainSpec{ExplicitSeq{companion}, spec.r, spec.n_max};
        }
      }
      ordered_json results;
      results["transform"] = to_json(rec);
      if (t_measure) {
        const KEstimate measured = measure_k(rec.output);
        results["measured_output_k"] = to_json(measured);
      }
      if (!t_out_spec.empty()) write_text(t_out_spec, dump_spec(rec.output));
      write_report(t_out, make_report("transform " + rec.transform, digest, results,
                                      timer.ms()));
      return 0;
    }
    if (*verify_cmd) {
      const InequalityReport rep = run_check(v_check, v_samples, v_seed, v_region, v_jobs);
      ordered_json results;
      results["inequality_report"] = to_json(rep);
      write_report(v_out, make_report("verify " + v_check, "", results, timer.ms()));
      return rep.violations > 0 ? 1 : 0;
    }
    if (*fit_cmd) {
      if (f_prop != 48 && f_prop != 49) throw std::invalid_argument("--prop must be 48 or 49");
      const std::string id = f_prop == 48 ? "prop48" : "prop49";
      const InequalityReport rep = fit_constants(id, f_l0, f_density);
      write_text(f_out, fit_to_csv(rep));
      if (!f_report.empty()) {
        ordered_json results;
        results["inequality_report"] = to_json(rep);
        write_report(f_report, make_report("fit-constants " + id, "", results, timer.ms()));
      }
      return rep.violations > 0 ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace trains
