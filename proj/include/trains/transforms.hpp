#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trains/families.hpp"
#include "trains/gamma.hpp"

namespace trains {

/// Result of a sequence transformation, together with the proof-level bound
/// on the transformed K where one is known. Bounds are proof artifacts (the
/// constants appearing inside the stability proofs), so reports label them
/// with a `*-proof-bound` reference tag.
struct TransformRecord {
  std::string transform;
  std::vector<std::pair<std::string, double>> params;
  TrainSpec output;
  std::optional<double> predicted_bound;
  std::string predicted_bound_ref;
  std::vector<std::string> notes;
};

/// l' = l + dl, r' = r + dr with c = sup(max(|dl_n|, |dr_n|)). Given the
/// input K, the transformed constant obeys
///   K' <= c + 2 + (1 + 2c + K) e^c e^{K/2} + (1 + 3c) e^{3c/2} K.
TransformRecord perturb(const TrainSpec& spec, const SequenceFamily& dl,
                        const SequenceFamily& dr,
                        std::optional<double> input_k = std::nullopt);

/// l' = lambda l, r' = mu r with lambda >= 1, 0 <= mu <= lambda. Given the
/// input K: K' <= lambda K + (1 + lambda) K^lambda.
TransformRecord scale(const TrainSpec& spec, double lambda, double mu,
                      std::optional<double> input_k = std::nullopt);

/// Merges the parts (all with r == 0) into one sequence; assignment[j] names
/// the part supplying output position j+1, each part consumed in order. With
/// the parts' K0 values the bound folds pairwise: K0' <= 2 K0_a + 2 K0_b.
TransformRecord union_trains(const std::vector<TrainSpec>& parts,
                             const std::vector<int>& assignment,
                             const std::vector<double>& part_k0 = {});

/// l'_n = l_{sigma(n)} for a permutation with |sigma(n) - n| <= displacement.
/// Given the input K0: K0' <= 4 N + 1 + K0.
TransformRecord permute_bounded(const TrainSpec& spec, const std::vector<int>& sigma,
                                int displacement,
                                std::optional<double> input_k0 = std::nullopt);

/// Places base terms at the given positions (gaps <= gap_bound) and filler
/// terms elsewhere; validates the height condition
///   max{l'_{n_k}, l'_{n_{k+1}}} <= l'_m + gap_bound for interior m.
/// When the base lies in the hyperbolic class, the construction certifies
/// membership of the output.
TransformRecord embed_subsequence(const TrainSpec& base, const std::vector<int>& positions,
                                  const SequenceFamily& filler, int gap_bound);

/// Running-max companion: the smallest non-decreasing sequence dominating l,
/// with c = sup(l'_n - l_n).
std::pair<std::vector<double>, double> companion_nondecreasing(const Train& train);

/// K estimate of the flute train (r == 0) built from l; a plateauing
/// trajectory is the membership evidence for the hyperbolic class.
KEstimate h_membership(const SequenceFamily& l, int horizon, int grid = kDefaultGrid,
                       int jobs = 1);

/// Random permutation with |sigma(n) - n| <= window by construction:
/// consecutive blocks of size window + 1 are shuffled in place.
std::vector<int> windowed_shuffle_permutation(int n, int window, std::uint64_t seed);

}  // namespace trains
