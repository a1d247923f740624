#include "trains/report.hpp"

#include <sstream>

#include "trains/version.hpp"

namespace trains {

namespace {

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string join_witness(const std::vector<double>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ';';
    out += csv_number(w[i]);
  }
  return out;
}

}  // namespace

ordered_json to_json(const KEstimate& est) {
  ordered_json j;
  j["kind"] = gamma_kind_name(est.kind);
  j["value"] = est.value;
  j["witness"] = {{"n", est.witness_n}, {"h", est.witness_h}, {"m", est.witness_m}};
  j["n_max"] = est.n_max;
  j["h_grid"] = est.h_grid;
  j["h_floor"] = est.h_floor;
  j["cap"] = est.cap;
  j["saturated"] = est.saturated;
  ordered_json traj = ordered_json::array();
  for (const auto& [n, k] : est.trajectory) traj.push_back({n, k});
  j["trajectory"] = traj;
  return j;
}

ordered_json to_json(const Verdict& verdict) {
  ordered_json j;
  j["outcome"] = verdict_outcome_name(verdict.outcome);
  j["pathway"] = verdict.pathway;
  ordered_json constants;
  for (const auto& [k, v] : verdict.constants) constants[k] = v;
  j["constants"] = constants;
  j["diagnostics"] = verdict.diagnostics;
  return j;
}

ordered_json to_json(const NecessaryChecks& checks) {
  ordered_json j;
  j["twist_gates_fired"] = checks.twist_gates_fired;
  j["tail_gates_fired"] = checks.tail_gates_fired;
  ordered_json v = ordered_json::array();
  for (const auto& viol : checks.violations) {
    v.push_back({{"n", viol.n}, {"check", viol.check}, {"lhs", viol.lhs}, {"rhs", viol.rhs}});
  }
  j["violations"] = v;
  return j;
}

ordered_json to_json(const TransformRecord& rec) {
  ordered_json j;
  j["transform"] = rec.transform;
  ordered_json params;
  for (const auto& [k, v] : rec.params) params[k] = v;
  j["params"] = params;
  if (rec.predicted_bound) {
    j["predicted_bound"] = *rec.predicted_bound;
    j["predicted_bound_ref"] = rec.predicted_bound_ref;
  }
  j["notes"] = rec.notes;
  j["output_spec"] = spec_to_json(rec.output);
  return j;
}

ordered_json to_json(const InequalityReport& rep) {
  ordered_json j;
  j["check"] = rep.check;
  j["samples"] = rep.samples;
  j["violations"] = rep.violations;
  j["worst_margin"] = rep.worst_margin;
  j["worst_witness"] = rep.worst_witness;
  if (!rep.fitted_argmax.empty()) j["fitted_argmax"] = rep.fitted_argmax;
  if (!rep.fitted.empty()) {
    ordered_json f;
    for (const auto& [k, v] : rep.fitted) f[k] = v;
    j["fitted"] = f;
  }
  j["seed"] = rep.seed;
  j["region"] = rep.region;
  return j;
}

ordered_json spec_to_json(const TrainSpec& spec) {
  return ordered_json::parse(dump_spec(spec));
}

ordered_json make_report(const std::string& command, const std::string& digest,
                         ordered_json results, double wall_time_ms) {
  ordered_json j;
  j["command"] = command;
  j["tool_version"] = kToolVersion;
  j["spec_digest"] = digest;
  j["results"] = std::move(results);
  j["wall_time_ms"] = wall_time_ms;
  return j;
}

std::string profile_to_csv(const SupResult& sup) {
  std::string out = "h,min_gamma,argmin_m\n";
  for (const HProbe& p : sup.profile) {
    out += csv_number(p.h);
    out += ',';
    out += csv_number(p.value);
    out += ',';
    out += std::to_string(p.argmin);
    out += '\n';
  }
  return out;
}

std::string fit_to_csv(const InequalityReport& rep) {
  std::string out = "region,l0,c_lower,c_upper,argmin,argmax\n";
  out += '"' + rep.region + '"';
  out += ',';
  const auto l0 = rep.fitted.find("l0");
  out += csv_number(l0 == rep.fitted.end() ? 0.0 : l0->second);
  out += ',';
  out += csv_number(rep.fitted.at("c_lower"));
  out += ',';
  out += csv_number(rep.fitted.at("c_upper"));
  out += ',';
  out += '"' + join_witness(rep.worst_witness) + '"';
  out += ',';
  out += '"' + join_witness(rep.fitted_argmax) + '"';
  out += '\n';
  return out;
}

}  // namespace trains
