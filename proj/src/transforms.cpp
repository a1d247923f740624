#include "trains/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trains/rng.hpp"

namespace trains {

TransformRecord perturb(const TrainSpec& spec, const SequenceFamily& dl,
                        const SequenceFamily& dr, std::optional<double> input_k) {
  validate_spec(spec);
  TransformRecord rec;
  rec.transform = "perturb";
  ExplicitSeq l2, r2;
  double c = 0.0;
  for (int n = 1; n <= spec.n_max; ++n) {
    const double dln = family_term(dl, n);
    const double drn = family_term(dr, n);
    c = std::max({c, std::fabs(dln), std::fabs(drn)});
    const double ln = family_term(spec.l, n) + dln;
    const double rn = family_term(spec.r, n) + drn;
    if (!(ln > 0.0)) throw std::invalid_argument("perturbed l_" + std::to_string(n) + " <= 0");
    if (rn < 0.0) throw std::invalid_argument("perturbed r_" + std::to_string(n) + " < 0");
    l2.values.push_back(ln);
    r2.values.push_back(rn);
  }
  rec.output = TrainSpec{l2, r2, spec.n_max};
  rec.params.emplace_back("c", c);
  if (input_k) {
    const double K = *input_k;
    rec.predicted_bound = c + 2.0 + (1.0 + 2.0 * c + K) * std::exp(c) * std::exp(0.5 * K) +
                          (1.0 + 3.0 * c) * std::exp(1.5 * c) * K;
    rec.predicted_bound_ref = "perturbation-proof-bound";
    rec.params.emplace_back("K", K);
  }
  return rec;
}

TransformRecord scale(const TrainSpec& spec, double lambda, double mu,
                      std::optional<double> input_k) {
  validate_spec(spec);
  if (!(lambda >= 1.0)) throw std::invalid_argument("lambda must be >= 1");
  if (!(mu >= 0.0) || mu > lambda) throw std::invalid_argument("mu must lie in [0, lambda]");
  TransformRecord rec;
  rec.transform = "scale";
  rec.params.emplace_back("lambda", lambda);
  rec.params.emplace_back("mu", mu);
  TrainSpec out = spec;
  // Scaling keeps every family closed form.
  if (auto* e = std::get_if<ExplicitSeq>(&out.l)) {
    for (double& v : e->values) v *= lambda;
  } else if (auto* cst = std::get_if<ConstantSeq>(&out.l)) {
    cst->value *= lambda;
  } else if (auto* p = std::get_if<PowerSeq>(&out.l)) {
    p->a *= lambda;
    p->c *= lambda;
  } else {
    auto& lg = std::get<LogSeq>(out.l);
    lg.a *= lambda;
    lg.c *= lambda;
  }
  if (auto* e = std::get_if<ExplicitSeq>(&out.r)) {
    for (double& v : e->values) v *= mu;
  } else if (auto* cst = std::get_if<ConstantSeq>(&out.r)) {
    cst->value *= mu;
  } else if (auto* p = std::get_if<PowerSeq>(&out.r)) {
    p->a *= mu;
    p->c *= mu;
  } else {
    auto& lg = std::get<LogSeq>(out.r);
    lg.a *= mu;
    lg.c *= mu;
  }
  validate_spec(out);
  rec.output = out;
  if (input_k) {
    const double K = *input_k;
    rec.predicted_bound = lambda * K + (1.0 + lambda) * std::pow(K, lambda);
    rec.predicted_bound_ref = "scaling-bound";
    rec.params.emplace_back("K", K);
  }
  return rec;
}

TransformRecord union_trains(const std::vector<TrainSpec>& parts,
                             const std::vector<int>& assignment,
                             const std::vector<double>& part_k0) {
  if (parts.empty()) throw std::invalid_argument("union needs at least one part");
  long long total = 0;
  for (const TrainSpec& p : parts) {
    validate_spec(p);
    for (int n = 1; n <= p.n_max; ++n) {
      if (family_term(p.r, n) != 0.0) {
        throw std::invalid_argument("union parts must carry r == 0");
      }
    }
    total += p.n_max;
  }
  if (static_cast<long long>(assignment.size()) != total) {
    throw std::invalid_argument("assignment length must equal the sum of part horizons");
  }
  std::vector<int> used(parts.size(), 0);
  ExplicitSeq merged;
  merged.values.reserve(static_cast<std::size_t>(total));
  for (const int part : assignment) {
    if (part < 0 || part >= static_cast<int>(parts.size())) {
      throw std::invalid_argument("assignment names a missing part");
    }
    const std::size_t p = static_cast<std::size_t>(part);
    if (used[p] >= parts[p].n_max) {
      throw std::invalid_argument("assignment is not a bijection: part exhausted");
    }
    ++used[p];
    merged.values.push_back(family_term(parts[p].l, used[p]));
  }
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (used[p] != parts[p].n_max) {
      throw std::invalid_argument("assignment is not a bijection: part not exhausted");
    }
  }
  TransformRecord rec;
  rec.transform = "union";
  rec.params.emplace_back("parts", static_cast<double>(parts.size()));
  rec.output = TrainSpec{merged, ConstantSeq{0.0}, static_cast<int>(total)};
  if (!part_k0.empty()) {
    if (part_k0.size() != parts.size()) {
      throw std::invalid_argument("need one K0 per part");
    }
    // Pairwise fold: two parts cost 2 K0_a + 2 K0_b, applied N - 1 times.
    double bound = part_k0[0];
    for (std::size_t i = 1; i < part_k0.size(); ++i) {
      bound = 2.0 * bound + 2.0 * part_k0[i];
    }
    rec.predicted_bound = bound;
    rec.predicted_bound_ref = "union-proof-bound";
  }
  return rec;
}

TransformRecord permute_bounded(const TrainSpec& spec, const std::vector<int>& sigma,
                                int displacement, std::optional<double> input_k0) {
  validate_spec(spec);
  if (displacement < 0) throw std::invalid_argument("displacement must be >= 0");
  if (static_cast<int>(sigma.size()) != spec.n_max) {
    throw std::invalid_argument("sigma must have n_max entries");
  }
  std::vector<char> seen(static_cast<std::size_t>(spec.n_max) + 1, 0);
  for (int n = 1; n <= spec.n_max; ++n) {
    const int s = sigma[static_cast<std::size_t>(n - 1)];
    if (s < 1 || s > spec.n_max || seen[static_cast<std::size_t>(s)]) {
      throw std::invalid_argument("sigma is not a permutation of 1..n_max");
    }
    seen[static_cast<std::size_t>(s)] = 1;
    if (std::abs(s - n) > displacement) {
      throw std::invalid_argument("sigma displaces index " + std::to_string(n) +
                                  " beyond the bound");
    }
  }
  ExplicitSeq l2, r2;
  for (int n = 1; n <= spec.n_max; ++n) {
    const int s = sigma[static_cast<std::size_t>(n - 1)];
    l2.values.push_back(family_term(spec.l, s));
    r2.values.push_back(family_term(spec.r, s));
  }
  TransformRecord rec;
  rec.transform = "permute";
  rec.params.emplace_back("displacement", static_cast<double>(displacement));
  rec.output = TrainSpec{l2, r2, spec.n_max};
  if (input_k0) {
    rec.predicted_bound = 4.0 * displacement + 1.0 + *input_k0;
    rec.predicted_bound_ref = "permutation-proof-bound";
    rec.params.emplace_back("K0", *input_k0);
  }
  return rec;
}

TransformRecord embed_subsequence(const TrainSpec& base, const std::vector<int>& positions,
                                  const SequenceFamily& filler, int gap_bound) {
  validate_spec(base);
  if (positions.empty()) throw std::invalid_argument("need at least one position");
  if (gap_bound < 1) throw std::invalid_argument("gap bound must be >= 1");
  if (static_cast<int>(positions.size()) > base.n_max) {
    throw std::invalid_argument("more positions than base terms");
  }
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (positions[k] < 1) throw std::invalid_argument("positions must be >= 1");
    if (k > 0) {
      const int gap = positions[k] - positions[k - 1];
      if (gap <= 0) throw std::invalid_argument("positions must be strictly increasing");
      if (gap > gap_bound) {
        throw std::invalid_argument("gap " + std::to_string(gap) + " exceeds the bound");
      }
    }
  }
  const int out_n = positions.back();
  ExplicitSeq l2;
  l2.values.assign(static_cast<std::size_t>(out_n), 0.0);
  std::vector<char> is_base(static_cast<std::size_t>(out_n) + 1, 0);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    is_base[static_cast<std::size_t>(positions[k])] = 1;
    l2.values[static_cast<std::size_t>(positions[k] - 1)] =
        family_term(base.l, static_cast<int>(k) + 1);
  }
  for (int m = 1; m <= out_n; ++m) {
    if (!is_base[static_cast<std::size_t>(m)]) {
      l2.values[static_cast<std::size_t>(m - 1)] = family_term(filler, m);
    }
  }
  // Height condition, validated for interior filler positions only.
  for (std::size_t k = 0; k + 1 < positions.size(); ++k) {
    const double peak = std::max(l2.values[static_cast<std::size_t>(positions[k] - 1)],
                                 l2.values[static_cast<std::size_t>(positions[k + 1] - 1)]);
    for (int m = positions[k] + 1; m < positions[k + 1]; ++m) {
      if (peak > l2.values[static_cast<std::size_t>(m - 1)] + gap_bound) {
        throw std::invalid_argument("height condition fails at filler index " +
                                    std::to_string(m));
      }
    }
  }
  TransformRecord rec;
  rec.transform = "embed";
  rec.params.emplace_back("gap_bound", static_cast<double>(gap_bound));
  rec.params.emplace_back("base_terms", static_cast<double>(positions.size()));
  rec.output = TrainSpec{l2, ConstantSeq{0.0}, out_n};
  validate_spec(rec.output);
  rec.notes.push_back(
      "membership in the hyperbolic class transfers from the base sequence by construction");
  return rec;
}

std::pair<std::vector<double>, double> companion_nondecreasing(const Train& train) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(train.size()));
  double run_max = -std::numeric_limits<double>::infinity();
  double c = 0.0;
  for (int n = 1; n <= train.size(); ++n) {
    run_max = std::max(run_max, train.l(n));
    out.push_back(run_max);
    c = std::max(c, run_max - train.l(n));
  }
  return {out, c};
}

KEstimate h_membership(const SequenceFamily& l, int horizon, int grid, int jobs) {
  TrainSpec flute{l, ConstantSeq{0.0}, horizon};
  validate_spec(flute);
  const Train train(flute);
  const GammaEngine engine(train, GammaKind::Full);
  return engine.k_estimate(horizon, grid, 0.0, jobs);
}

std::vector<int> windowed_shuffle_permutation(int n, int window, std::uint64_t seed) {
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sigma[static_cast<std::size_t>(i)] = i + 1;
  if (window <= 0) return sigma;
  SplitMix64 rng(seed);
  const int block = window + 1;
  for (int start = 0; start < n; start += block) {
    const int end = std::min(n, start + block);
    for (int i = end - 1; i > start; --i) {
      const int j = start + static_cast<int>(rng.below(static_cast<std::uint64_t>(i - start + 1)));
      std::swap(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
    }
  }
  return sigma;
}

}  // namespace trains
