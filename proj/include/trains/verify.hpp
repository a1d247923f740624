#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace trains {

/// Parameter ranges for the samplers and grids. Defaults keep e^h well
/// inside double range while still exercising every positive-part branch.
struct RegionSpec {
  double l_max = 20.0;
  double r_max = 50.0;
  double u_max = 5.0;
  double v_max = 5.0;
  double c = 1.0;       // perturbation constant of the sandwich check
  double l0 = 1.0;      // lower length cutoff of the fitted-constant checks
  int density = 40;     // grid density of the fitted-constant checks
};

struct InequalityReport {
  std::string check;
  long long samples = 0;
  long long violations = 0;
  double worst_margin = 0.0;
  std::vector<double> worst_witness;   // argmin of the margin (or ratio)
  std::vector<double> fitted_argmax;   // grid checks only: argmax of the ratio
  std::map<std::string, double> fitted;
  std::uint64_t seed = 0;
  std::string region;
};

/// Known checks:
///   lemma33        (r_k + h - l_{k+1})_+ < e^h Delta(k)   on 0 < l_k <= h <= l_{k+1}
///   lemma37        e^h (e^{-(l_k+l_{k+1}-r_k)_+/2} + (r_k-l_k-l_{k+1})_+)
///                    <= (1 + (r_k+h-l_{k+1})_+) e^{(r_k+h-l_{k+1})_+/2}  on h <= l_k
///   delta_sandwich e^{-l_k}+e^{-l_{k+1}} <= Delta(k)
///                    <= (1+(1+2c)e^c)(e^{-l_k}+e^{-l_{k+1}})  under r_k <= 2c+|l_k-l_{k+1}|
///   lemma43        d <= d1 <= 2d and d <= d2 <= 3d for the taxicab distances
///   lemma46        envelope(a,x) <= a e^x <= 2 sinh a cosh x
///   cor47          a e^x <= 2 sinh G and sinh a cosh x <= sinh(1) e^{a e^x},
///                  G = Arcsinh(sinh a cosh x)  (the two transfer bounds behind
///                  the set-level equivalence)
///   prop48         fitted bracket of hexagon_side / Delta-form (grid)
///   prop49         fitted bracket of pentagon_foot_distance / its proxy (grid)
///   cor410         fitted bracket of pentagon_foot_distance / (1 + (t+h-y)_+)
/// Strict inequalities tolerate a 1e-12 relative margin; lemma43 uses 1e-9
/// to absorb closed-form rounding.
InequalityReport run_check(const std::string& id, long long samples, std::uint64_t seed,
                           const RegionSpec& region = {}, int jobs = 1);

/// Deterministic tensor-grid fit of the two-sided comparison constants.
/// id is "prop48", "prop49" or "cor410"; the grids are nested under density
/// doubling. Reports c_lower / c_upper with witnesses.
InequalityReport fit_constants(const std::string& id, double l0, int density);

std::vector<std::string> known_checks();

}  // namespace trains
