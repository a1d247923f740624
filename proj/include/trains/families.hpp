#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace trains {

// Sequences are 1-based throughout: {l_n}_{n>=1}, {r_n}_{n>=1}.

struct ExplicitSeq {
  std::vector<double> values;  // term(n) = values[n-1]
};

struct ConstantSeq {
  double value = 0.0;
};

/// term(n) = a * n^b + c
struct PowerSeq {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;
};

/// term(n) = a * log(n + 1) + c
struct LogSeq {
  double a = 1.0;
  double c = 0.0;
};

using SequenceFamily = std::variant<ExplicitSeq, ConstantSeq, PowerSeq, LogSeq>;

double family_term(const SequenceFamily& family, int n);

/// True when terms can be evaluated past any finite horizon (everything but
/// an explicit list).
bool family_is_closed_form(const SequenceFamily& family);

/// True when terms are provably non-decreasing and divergent for all n.
/// This is what certifies tail-sum remainder bounds.
bool family_has_monotone_divergent_tail(const SequenceFamily& family);

std::string family_to_string(const SequenceFamily& family);

/// A train given by the half-lengths {l_n} (> 0) of its fundamental geodesics
/// and {r_n} (>= 0) of the second fundamental ones (r_n = 0 is a puncture, so
/// r == 0 is a flute surface), truncated at horizon n_max.
struct TrainSpec {
  SequenceFamily l;
  SequenceFamily r;
  int n_max = 0;
};

/// Throws std::invalid_argument when an invariant fails within the horizon:
/// l_n <= 0, r_n < 0, non-finite terms, empty or too-short explicit lists.
void validate_spec(const TrainSpec& spec);

/// n-th terms (l_n, r_n); throws std::out_of_range outside [1, n_max].
std::pair<double, double> materialize(const TrainSpec& spec, int n);

TrainSpec parse_spec(const std::string& text);
TrainSpec load_spec(std::istream& in);
TrainSpec load_spec_file(const std::string& path);

/// Canonical JSON form; two specs have equal dumps iff they have equal
/// content.
std::string dump_spec(const TrainSpec& spec);

/// 16-hex-digit FNV-1a digest of the canonical form.
std::string spec_digest(const TrainSpec& spec);

std::uint64_t fnv1a64(const std::string& bytes);

/// Materialized prefix of a spec. Index 0 is unused padding.
class Train {
 public:
  explicit Train(const TrainSpec& spec);

  /// Builds directly from 0-based term lists (l_values[i] = l_{i+1}).
  Train(const std::vector<double>& l_values, const std::vector<double>& r_values);

  int size() const { return n_max_; }
  double l(int n) const { return l_[static_cast<std::size_t>(n)]; }
  double r(int n) const { return r_[static_cast<std::size_t>(n)]; }

 private:
  int n_max_ = 0;
  std::vector<double> l_;
  std::vector<double> r_;
};

}  // namespace trains
