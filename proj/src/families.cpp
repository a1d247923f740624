#include "trains/families.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace trains {

namespace {

using ordered_json = nlohmann::ordered_json;

double require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
  return x;
}

double json_number(const ordered_json& j, const char* key) {
  if (!j.contains(key)) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw std::invalid_argument(std::string("field '") + key + "' must be a number");
  }
  return require_finite(v.get<double>(), key);
}

SequenceFamily family_from_json(const ordered_json& j, const char* which) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument(std::string("sequence '") + which +
                                "' must be an object with a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "explicit") {
    if (!j.contains("values") || !j.at("values").is_array()) {
      throw std::invalid_argument("explicit sequence needs a 'values' array");
    }
    ExplicitSeq seq;
    for (const auto& v : j.at("values")) {
      if (!v.is_number()) throw std::invalid_argument("explicit values must be numbers");
      seq.values.push_back(require_finite(v.get<double>(), "values[]"));
    }
    if (seq.values.empty()) throw std::invalid_argument("explicit values must be non-empty");
    return seq;
  }
  if (kind == "constant") {
    return ConstantSeq{json_number(j, "value")};
  }
  if (kind == "power") {
    return PowerSeq{json_number(j, "a"), json_number(j, "b"), json_number(j, "c")};
  }
  if (kind == "log") {
    return LogSeq{json_number(j, "a"), json_number(j, "c")};
  }
  throw std::invalid_argument("unknown sequence kind '" + kind + "'");
}

ordered_json family_to_json(const SequenceFamily& f) {
  ordered_json j;
  if (const auto* e = std::get_if<ExplicitSeq>(&f)) {
    j["kind"] = "explicit";
    j["values"] = e->values;
  } else if (const auto* c = std::get_if<ConstantSeq>(&f)) {
    j["kind"] = "constant";
    j["value"] = c->value;
  } else if (const auto* p = std::get_if<PowerSeq>(&f)) {
    j["kind"] = "power";
    j["a"] = p->a;
    j["b"] = p->b;
    j["c"] = p->c;
  } else {
    const auto& lg = std::get<LogSeq>(f);
    j["kind"] = "log";
    j["a"] = lg.a;
    j["c"] = lg.c;
  }
  return j;
}

int explicit_length(const SequenceFamily& f) {
  if (const auto* e = std::get_if<ExplicitSeq>(&f)) {
    return static_cast<int>(e->values.size());
  }
  return -1;
}

}  // namespace

double family_term(const SequenceFamily& family, int n) {
  if (n < 1) throw std::out_of_range("sequence index must be >= 1");
  if (const auto* e = std::get_if<ExplicitSeq>(&family)) {
    if (n > static_cast<int>(e->values.size())) {
      throw std::out_of_range("explicit sequence index past end");
    }
    return e->values[static_cast<std::size_t>(n - 1)];
  }
  if (const auto* c = std::get_if<ConstantSeq>(&family)) return c->value;
  if (const auto* p = std::get_if<PowerSeq>(&family)) {
    return p->a * std::pow(static_cast<double>(n), p->b) + p->c;
  }
  const auto& lg = std::get<LogSeq>(family);
  return lg.a * std::log(static_cast<double>(n) + 1.0) + lg.c;
}

bool family_is_closed_form(const SequenceFamily& family) {
  return !std::holds_alternative<ExplicitSeq>(family);
}

bool family_has_monotone_divergent_tail(const SequenceFamily& family) {
  if (const auto* p = std::get_if<PowerSeq>(&family)) return p->a > 0.0 && p->b > 0.0;
  if (const auto* lg = std::get_if<LogSeq>(&family)) return lg->a > 0.0;
  return false;
}

std::string family_to_string(const SequenceFamily& family) {
  return family_to_json(family).dump();
}

void validate_spec(const TrainSpec& spec) {
  if (spec.n_max < 1) throw std::invalid_argument("n_max must be a positive integer");
  for (const auto* f : {&spec.l, &spec.r}) {
    const int len = explicit_length(*f);
    if (len == 0) throw std::invalid_argument("explicit values must be non-empty");
    if (len > 0 && len < spec.n_max) {
      throw std::invalid_argument("explicit sequence shorter than n_max");
    }
  }
  for (int n = 1; n <= spec.n_max; ++n) {
    const double l = family_term(spec.l, n);
    const double r = family_term(spec.r, n);
    if (!std::isfinite(l) || l <= 0.0) {
      throw std::invalid_argument("l_" + std::to_string(n) + " must be > 0");
    }
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("r_" + std::to_string(n) + " must be >= 0");
    }
  }
}

std::pair<double, double> materialize(const TrainSpec& spec, int n) {
  if (n < 1 || n > spec.n_max) throw std::out_of_range("index outside [1, n_max]");
  return {family_term(spec.l, n), family_term(spec.r, n)};
}

TrainSpec parse_spec(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spec parse failure: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("spec must be a JSON object");
  if (!j.contains("l") || !j.contains("r")) {
    throw std::invalid_argument("spec needs 'l' and 'r' sequences");
  }
  TrainSpec spec;
  spec.l = family_from_json(j.at("l"), "l");
  spec.r = family_from_json(j.at("r"), "r");
  if (j.contains("n_max")) {
    if (!j.at("n_max").is_number_integer() || j.at("n_max").get<long long>() < 1) {
      throw std::invalid_argument("n_max must be a positive integer");
    }
    spec.n_max = j.at("n_max").get<int>();
  } else if (const int len = explicit_length(spec.l); len > 0) {
    spec.n_max = len;  // default horizon: the explicit list itself
  } else {
    throw std::invalid_argument("missing field 'n_max'");
  }
  validate_spec(spec);
  return spec;
}

TrainSpec load_spec(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

TrainSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
  return load_spec(in);
}

std::string dump_spec(const TrainSpec& spec) {
  ordered_json j;
  j["l"] = family_to_json(spec.l);
  j["r"] = family_to_json(spec.r);
  j["n_max"] = spec.n_max;
  return j.dump();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string spec_digest(const TrainSpec& spec) {
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(fnv1a64(dump_spec(spec))));
  return out;
}

Train::Train(const TrainSpec& spec) : n_max_(spec.n_max) {
  validate_spec(spec);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  l_.assign(static_cast<std::size_t>(n_max_) + 1, nan);
  r_.assign(static_cast<std::size_t>(n_max_) + 1, nan);
  for (int n = 1; n <= n_max_; ++n) {
    l_[static_cast<std::size_t>(n)] = family_term(spec.l, n);
    r_[static_cast<std::size_t>(n)] = family_term(spec.r, n);
  }
}

Train::Train(const std::vector<double>& l_values, const std::vector<double>& r_values)
    : n_max_(static_cast<int>(l_values.size())) {
  if (l_values.empty() || l_values.size() != r_values.size()) {
    throw std::invalid_argument("term lists must be non-empty and equally long");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  l_.assign(static_cast<std::size_t>(n_max_) + 1, nan);
  r_.assign(static_cast<std::size_t>(n_max_) + 1, nan);
  for (int n = 1; n <= n_max_; ++n) {
    const double l = l_values[static_cast<std::size_t>(n - 1)];
    const double r = r_values[static_cast<std::size_t>(n - 1)];
    if (!std::isfinite(l) || l <= 0.0) throw std::invalid_argument("l terms must be > 0");
    if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("r terms must be >= 0");
    l_[static_cast<std::size_t>(n)] = l;
    r_[static_cast<std::size_t>(n)] = r;
  }
}

}  // namespace trains
