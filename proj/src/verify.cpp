#include "trains/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "trains/hyptrig.hpp"
#include "trains/parallel.hpp"
#include "trains/rng.hpp"

namespace trains {

namespace {

constexpr double kStrictSlack = 1e-12;
constexpr double kGeomSlack = 1e-9;  // checks built on acosh/asinh round-trips
constexpr long long kBatchSize = 1 << 16;

double delta_of(double lk, double lk1, double rk) {
  return std::exp(-lk) + std::exp(-lk1) + std::exp(-0.5 * positive_part(lk + lk1 - rk)) +
         positive_part(rk - lk - lk1);
}

struct Sample {
  // margin >= 0 means the inequality holds; slack gives the tolerated dip.
  double margin = 0.0;
  double scale = 1.0;
  std::vector<double> witness;
};

struct BatchResult {
  long long violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
};

using Sampler = std::function<Sample(SplitMix64&)>;

BatchResult run_batches(const Sampler& sampler, long long samples, std::uint64_t seed,
                        double slack, int jobs) {
  const long long batches = (samples + kBatchSize - 1) / kBatchSize;
  std::vector<BatchResult> partial(static_cast<std::size_t>(batches));
  parallel_for(0, static_cast<int>(batches), jobs, [&](int b) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const long long lo = static_cast<long long>(b) * kBatchSize;
    const long long hi = std::min(samples, lo + kBatchSize);
    BatchResult res;
    for (long long i = lo; i < hi; ++i) {
      const Sample s = sampler(rng);
      if (s.margin < res.worst) {
        res.worst = s.margin;
        res.witness = s.witness;
      }
      if (s.margin < -slack * std::max(1.0, s.scale)) ++res.violations;
    }
    partial[static_cast<std::size_t>(b)] = res;
  });
  BatchResult out;
  for (const BatchResult& r : partial) {  // sequential merge: order-independent totals
    out.violations += r.violations;
    if (r.worst < out.worst) {
      out.worst = r.worst;
      out.witness = r.witness;
    }
  }
  return out;
}

Sample sample_lemma33(SplitMix64& g, const RegionSpec& reg) {
  const double lk = reg.l_max * (1.0 - g.uniform());            // (0, l_max]
  const double lk1 = lk + (reg.l_max - lk) * g.uniform();       // [l_k, l_max]
  const double h = lk + (lk1 - lk) * g.uniform();               // [l_k, l_{k+1}]
  const double rk = reg.r_max * g.uniform();
  const double lhs = positive_part(rk + h - lk1);
  const double rhs = std::exp(h) * delta_of(lk, lk1, rk);
  return {rhs - lhs, std::max(std::fabs(lhs), std::fabs(rhs)), {lk, lk1, h, rk}};
}

Sample sample_lemma37(SplitMix64& g, const RegionSpec& reg) {
  const double lk = reg.l_max * g.uniform();
  const double h = lk * g.uniform();
  const double lk1 = reg.l_max * g.uniform();
  const double rk = reg.r_max * g.uniform();
  const double lhs = std::exp(h) * (std::exp(-0.5 * positive_part(lk + lk1 - rk)) +
                                    positive_part(rk - lk - lk1));
  const double p = positive_part(rk + h - lk1);
  const double rhs = (1.0 + p) * std::exp(0.5 * p);
  return {rhs - lhs, std::max(std::fabs(lhs), std::fabs(rhs)), {lk, lk1, h, rk}};
}

Sample sample_delta_sandwich(SplitMix64& g, const RegionSpec& reg) {
  const double c = reg.c;
  const double lk = reg.l_max * (1.0 - g.uniform());
  const double lk1 = reg.l_max * (1.0 - g.uniform());
  const double rk = (2.0 * c + std::fabs(lk - lk1)) * g.uniform();
  const double base = std::exp(-lk) + std::exp(-lk1);
  const double delta = delta_of(lk, lk1, rk);
  const double upper = (1.0 + (1.0 + 2.0 * c) * std::exp(c)) * base;
  const double m1 = delta - base;
  const double m2 = upper - delta;
  const double margin = std::min(m1, m2);
  return {margin, std::max({base, delta, upper}), {lk, lk1, rk, c}};
}

Sample sample_lemma43(SplitMix64& g, const RegionSpec& reg) {
  const FermiPoint p{g.uniform(-reg.u_max, reg.u_max), g.uniform(0.0, reg.v_max)};
  const FermiPoint q{g.uniform(-reg.u_max, reg.u_max), g.uniform(0.0, reg.v_max)};
  const double d = fermi_distance(p, q);
  const auto [d1, d2] = taxicab_distances(p, q);
  const double margin = std::min(std::min(d1 - d, 2.0 * d - d1),
                                 std::min(d2 - d, 3.0 * d - d2));
  return {margin, std::max({d, d1, d2}), {p.u, p.v, q.u, q.v}};
}

Sample sample_lemma46(SplitMix64& g, const RegionSpec&) {
  const double a = 10.0 * g.uniform();
  const double x = 10.0 * g.uniform();
  const double mid = a * std::exp(x);
  const double lo = arcsinh_envelope(a, x);
  const double hi = 2.0 * std::sinh(a) * std::cosh(x);
  const double m1 = mid - lo;  // envelope <= a e^x
  const double m2 = hi - mid;
  return {std::min(m1, m2), std::max({std::fabs(lo), mid, hi}), {a, x}};
}

Sample sample_cor47(SplitMix64& g, const RegionSpec&) {
  const double a = 10.0 * g.uniform();
  const double x = 10.0 * g.uniform();
  const double product = std::sinh(a) * std::cosh(x);  // <= sinh(10)cosh(10), finite
  const double big = std::asinh(product);
  const double p = a * std::exp(x);
  const double m1 = 2.0 * std::sinh(big) - p;  // a e^x <= 2 sinh G
  // sinh a cosh x <= sinh(1) e^{a e^x}, compared in log scale to dodge overflow.
  const double log_lhs = a == 0.0 ? -std::numeric_limits<double>::infinity()
                                  : log_sinh(a) + log_cosh(x);
  const double m2 = std::log(std::sinh(1.0)) + p - log_lhs;
  return {std::min(m1, m2), std::max(1.0, std::fabs(p)), {a, x}};
}

double prop48_proxy(double x, double y, double t) {
  return std::exp(-x) + std::exp(-y) + std::exp(-0.5 * positive_part(x + y - t)) +
         positive_part(t - x - y);
}

double prop49_proxy(double x, double y, double t, double h) {
  return std::exp(-h + x) + std::exp(-positive_part(y - h - t)) + positive_part(t + h - y);
}

struct GridFit {
  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  std::vector<double> argmin, argmax;
  long long points = 0;

  void feed(double ratio, std::initializer_list<double> at) {
    ++points;
    if (ratio < lower) {
      lower = ratio;
      argmin.assign(at);
    }
    if (ratio > upper) {
      upper = ratio;
      argmax.assign(at);
    }
  }
};

// Nested grids: value(i, d) for i = 1..d spans (0, hi], and doubling d keeps
// every existing point.
double grid_point(double lo, double hi, int i, int d) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(d);
}

GridFit fit_prop48(double l0, int d) {
  GridFit fit;
  const double x_lo = l0 > 0.0 ? l0 : 0.0;
  for (int i = 0; i <= d; ++i) {
    const double x = grid_point(x_lo, 10.0, i, d);
    if (!(x > 0.0)) continue;
    for (int j = 0; j <= d; ++j) {
      const double y = grid_point(x_lo, 10.0, j, d);
      if (!(y > 0.0)) continue;
      for (int k = 0; k <= 3 * d; ++k) {
        const double t = grid_point(0.0, 30.0, k, 3 * d);
        const double ratio = hexagon_side(x, y, t) / prop48_proxy(x, y, t);
        fit.feed(ratio, {x, y, t});
      }
    }
  }
  return fit;
}

GridFit fit_prop49(double l0, int d, bool against_kink_proxy) {
  GridFit fit;
  const double y_lo = std::max(l0, 1e-3);
  for (int i = 0; i <= d; ++i) {
    const double y = grid_point(y_lo, 10.0, i, d);
    for (int j = 0; j <= d; ++j) {
      const double h = grid_point(0.0, y, j, d);
      for (int k = 0; k <= d; ++k) {
        const double x = grid_point(0.0, h, k, d);
        for (int m = 0; m <= 3 * d; ++m) {
          const double t = grid_point(0.0, 30.0, m, 3 * d);
          const double F = pentagon_foot_distance(x, y, t, h);
          const double den = against_kink_proxy ? 1.0 + positive_part(t + h - y)
                                                : prop49_proxy(x, y, t, h);
          fit.feed(F / den, {x, y, t, h});
        }
      }
    }
  }
  return fit;
}

InequalityReport grid_report(const std::string& id, const GridFit& fit, double l0,
                             int density, const std::string& region) {
  InequalityReport rep;
  rep.check = id;
  rep.samples = fit.points;
  rep.violations = (fit.lower > 0.0 && std::isfinite(fit.upper)) ? 0 : 1;
  rep.worst_margin = fit.lower;
  rep.fitted["c_lower"] = fit.lower;
  rep.fitted["c_upper"] = fit.upper;
  rep.fitted["l0"] = l0;
  rep.fitted["density"] = density;
  rep.worst_witness = fit.argmin;
  rep.fitted_argmax = fit.argmax;
  rep.region = region;
  return rep;
}

}  // namespace

std::vector<std::string> known_checks() {
  return {"lemma33", "lemma37", "delta_sandwich", "lemma43", "lemma46",
          "cor47",   "prop48",  "prop49",         "cor410"};
}

InequalityReport run_check(const std::string& id, long long samples, std::uint64_t seed,
                           const RegionSpec& region, int jobs) {
  if (samples <= 0) throw std::invalid_argument("samples must be > 0");
  InequalityReport rep;
  rep.check = id;
  rep.samples = samples;
  rep.seed = seed;

  Sampler sampler;
  double slack = kStrictSlack;
  std::ostringstream reg;
  if (id == "lemma33") {
    sampler = [&region](SplitMix64& g) { return sample_lemma33(g, region); };
    reg << "0<l_k<=h<=l_{k+1}<=" << region.l_max << ", r in [0," << region.r_max << "]";
  } else if (id == "lemma37") {
    sampler = [&region](SplitMix64& g) { return sample_lemma37(g, region); };
    reg << "0<=h<=l_k<=" << region.l_max << ", l_{k+1} in [0," << region.l_max
        << "], r in [0," << region.r_max << "]";
  } else if (id == "delta_sandwich") {
    sampler = [&region](SplitMix64& g) { return sample_delta_sandwich(g, region); };
    reg << "l in (0," << region.l_max << "], r <= 2c+|l_k-l_{k+1}|, c=" << region.c;
  } else if (id == "lemma43") {
    sampler = [&region](SplitMix64& g) { return sample_lemma43(g, region); };
    slack = kGeomSlack;
    reg << "|u|<=" << region.u_max << ", 0<=v<=" << region.v_max;
  } else if (id == "lemma46") {
    sampler = [&region](SplitMix64& g) { return sample_lemma46(g, region); };
    reg << "a,x in [0,10]";
  } else if (id == "cor47") {
    sampler = [&region](SplitMix64& g) { return sample_cor47(g, region); };
    reg << "a,x in [0,10]";
  } else if (id == "prop48" || id == "prop49" || id == "cor410") {
    InequalityReport grid = fit_constants(id, region.l0, region.density);
    grid.seed = seed;
    return grid;
  } else {
    throw std::invalid_argument("unknown check '" + id + "'");
  }
  rep.region = reg.str();

  const BatchResult res = run_batches(sampler, samples, seed, slack, jobs);
  rep.violations = res.violations;
  rep.worst_margin = res.worst;
  rep.worst_witness = res.witness;
  return rep;
}

InequalityReport fit_constants(const std::string& id, double l0, int density) {
  if (density < 1) throw std::invalid_argument("density must be >= 1");
  std::ostringstream reg;
  if (id == "prop48") {
    const GridFit fit = fit_prop48(l0, density);
    reg << "x,y in (" << l0 << ",10], t in [0,30], nested grid d=" << density;
    return grid_report(id, fit, l0, density, reg.str());
  }
  if (id == "prop49") {
    const GridFit fit = fit_prop49(l0, density, false);
    reg << "y>=h>=x>=0, y in [" << std::max(l0, 1e-3) << ",10], t in [0,30], d=" << density;
    return grid_report(id, fit, l0, density, reg.str());
  }
  if (id == "cor410") {
    const GridFit fit = fit_prop49(l0, density, true);
    reg << "y>=h>=x>=0, y in [" << std::max(l0, 1e-3) << ",10], t in [0,30], d=" << density
        << ", proxy 1+(t+h-y)_+";
    return grid_report(id, fit, l0, density, reg.str());
  }
  throw std::invalid_argument("unknown fitted check '" + id + "'");
}

}  // namespace trains
