#include "trains/hyptrig.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace trains {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Above this, asinh(e^t) and acosh(e^t) equal t + ln 2 to double precision.
constexpr double kLogAsymptotic = 40.0;

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(b) && b < 0.0) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

double stable_acosh(double z) {
  if (std::isnan(z)) throw std::domain_error("acosh of NaN");
  if (z < 1.0) {
    // Tolerate a few ulps of rounding below the branch point.
    if (z > 1.0 - 16.0 * std::numeric_limits<double>::epsilon()) return 0.0;
    throw std::domain_error("acosh argument below 1");
  }
  if (z > 1e150) return std::log(z) + kLn2;
  const double w = z - 1.0;
  return std::log1p(w + std::sqrt(w * (w + 2.0)));
}

double log_cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

double log_sinh(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_sinh requires x > 0");
  if (x < 1.0) return std::log(std::sinh(x));
  return x + std::log1p(-std::exp(-2.0 * x)) - kLn2;
}

double hexagon_side(double x, double y, double t) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("hexagon_side requires x, y > 0");
  if (t < 0.0) throw std::domain_error("hexagon_side requires t >= 0");
  const double log_den = log_sinh(x) + log_sinh(y);
  const double log_num = log_add_exp(log_cosh(t), log_cosh(x) + log_cosh(y));
  const double la = log_num - log_den;
  if (la > kLogAsymptotic) return la + kLn2;
  const double arg = std::exp(la);
  // The hexagon relation keeps the argument >= 1; only rounding can dip below.
  return stable_acosh(arg);
}

double quad_point_distance(double d0, double h) {
  if (d0 < 0.0 || h < 0.0) throw std::domain_error("quad_point_distance requires d0, h >= 0");
  if (d0 == 0.0) return 0.0;
  const double ls = log_sinh(0.5 * d0) + log_cosh(h);
  if (ls > kLogAsymptotic) return 2.0 * (ls + kLn2);
  return 2.0 * std::asinh(std::exp(ls));
}

double pentagon_foot_distance(double x, double y, double t, double h) {
  if (!(y > 0.0)) throw std::domain_error("pentagon_foot_distance requires y > 0");
  if (x < 0.0 || t < 0.0 || h < 0.0) {
    throw std::domain_error("pentagon_foot_distance requires x, t, h >= 0");
  }
  const double log_num = log_add_exp(log_cosh(x) + log_cosh(y - h), log_cosh(t) + log_cosh(h));
  const double la = log_num - log_sinh(y);
  if (la > kLogAsymptotic) return la + kLn2;
  return std::asinh(std::exp(la));
}

double arcsinh_envelope(double a, double x) {
  if (a < 0.0 || x < 0.0) throw std::domain_error("arcsinh_envelope requires a, x >= 0");
  static const double inv_sinh1 = 1.0 / std::sinh(1.0);
  if (a <= 1.0) {
    const double ls = (a == 0.0) ? -std::numeric_limits<double>::infinity()
                                 : log_sinh(a) + log_cosh(x);
    return ls > kLogAsymptotic ? std::numeric_limits<double>::infinity()
                               : inv_sinh1 * std::exp(ls);
  }
  return log_sinh(a) + log_cosh(x);
}

double fermi_distance(const FermiPoint& p, const FermiPoint& q) {
  // Association keeps the expression exactly symmetric in (p, q).
  const double du = std::fabs(p.u - q.u);
  const double arg =
      std::cosh(du) * (std::cosh(p.v) * std::cosh(q.v)) - std::sinh(p.v) * std::sinh(q.v);
  return stable_acosh(std::max(arg, 1.0));
}

namespace {

// Geodesics of dv^2 + cosh^2(v) du^2 with du/ds != 0 are graphs v(u) obeying
//   v'' = sinh v cosh v + 2 tanh(v) v'^2,
// and two geodesics through a common point never meet again (curvature -1),
// so v(u_end) is strictly monotone in the initial slope: shooting with a
// bracketed root find is well posed. Arc length rides along as a third state:
//   dL/du = sqrt(v'^2 + cosh^2 v).

struct OdeState {
  double v;
  double w;  // dv/du
  double len;
};

OdeState rhs(const OdeState& s) {
  const double ch = std::cosh(s.v);
  const double sh = std::sinh(s.v);
  OdeState d;
  d.v = s.w;
  d.w = sh * ch + 2.0 * (sh / ch) * s.w * s.w;
  d.len = std::sqrt(s.w * s.w + ch * ch);
  return d;
}

struct ShotResult {
  bool escaped = false;   // |v| ran past the cap before reaching u_end
  double v_end = 0.0;     // escape replaces this with +-inf surrogate
  double length = 0.0;
};

// Cash-Karp RK45 with adaptive step control.
ShotResult integrate(double v0, double slope, double u_span, double v_cap, double tol) {
  static constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
  static constexpr double b21 = 1.0 / 5;
  static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
  static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
  static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                          b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                          c6 = 512.0 / 1771;
  static constexpr double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296,
                          d5 = 277.0 / 14336, d6 = 1.0 / 4;
  (void)a2; (void)a3; (void)a4; (void)a5; (void)a6;  // autonomous system

  OdeState y{v0, slope, 0.0};
  double u = 0.0;
  double h = u_span / 16.0;
  const double h_min = u_span * 1e-14;
  int steps = 0;
  while (u < u_span) {
    if (++steps > 2000000) throw std::runtime_error("geodesic integrator: step limit");
    if (h > u_span - u) h = u_span - u;
    const OdeState k1 = rhs(y);
    auto at = [&](double f1, double f2, double f3, double f4, double f5,
                  const OdeState& k2, const OdeState& k3, const OdeState& k4,
                  const OdeState& k5) {
      OdeState s;
      s.v = y.v + h * (f1 * k1.v + f2 * k2.v + f3 * k3.v + f4 * k4.v + f5 * k5.v);
      s.w = y.w + h * (f1 * k1.w + f2 * k2.w + f3 * k3.w + f4 * k4.w + f5 * k5.w);
      s.len = 0.0;
      return s;
    };
    const OdeState z{0, 0, 0};
    const OdeState k2 = rhs(at(b21, 0, 0, 0, 0, z, z, z, z));
    const OdeState k3 = rhs(at(b31, b32, 0, 0, 0, k2, z, z, z));
    const OdeState k4 = rhs(at(b41, b42, b43, 0, 0, k2, k3, z, z));
    const OdeState k5 = rhs(at(b51, b52, b53, b54, 0, k2, k3, k4, z));
    const OdeState k6 = rhs(at(b61, b62, b63, b64, b65, k2, k3, k4, k5));

    OdeState y5, y4;
    y5.v = y.v + h * (c1 * k1.v + c3 * k3.v + c4 * k4.v + c6 * k6.v);
    y5.w = y.w + h * (c1 * k1.w + c3 * k3.w + c4 * k4.w + c6 * k6.w);
    y5.len = y.len + h * (c1 * k1.len + c3 * k3.len + c4 * k4.len + c6 * k6.len);
    y4.v = y.v + h * (d1 * k1.v + d3 * k3.v + d4 * k4.v + d5 * k5.v + d6 * k6.v);
    y4.w = y.w + h * (d1 * k1.w + d3 * k3.w + d4 * k4.w + d5 * k5.w + d6 * k6.w);
    y4.len = y.len + h * (d1 * k1.len + d3 * k3.len + d4 * k4.len + d5 * k5.len + d6 * k6.len);

    const double scale_v = std::max({1.0, std::fabs(y.v), std::fabs(y5.v)});
    const double scale_w = std::max({1.0, std::fabs(y.w), std::fabs(y5.w)});
    const double err = std::max({std::fabs(y5.v - y4.v) / scale_v,
                                 std::fabs(y5.w - y4.w) / scale_w,
                                 std::fabs(y5.len - y4.len) /
                                     std::max(1.0, std::fabs(y5.len))});
    if (err <= tol || h <= h_min) {
      u += h;
      y = y5;
      if (std::fabs(y.v) > v_cap) {
        ShotResult res;
        res.escaped = true;
        res.v_end = y.v > 0.0 ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
        res.length = y.len;
        return res;
      }
    }
    double grow;
    if (!std::isfinite(err)) {
      grow = 0.1;  // overflowed trial step: shrink hard
    } else if (err > 0.0) {
      grow = 0.9 * std::pow(tol / err, 0.2);
    } else {
      grow = 5.0;
    }
    h *= std::clamp(grow, 0.1, 5.0);
    if (h < h_min) h = h_min;
  }
  ShotResult res;
  res.v_end = y.v;
  res.length = y.len;
  return res;
}

}  // namespace

double fermi_distance_numeric(const FermiPoint& p, const FermiPoint& q, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tol must be > 0");
  FermiPoint a = p, b = q;
  if (a.u > b.u) std::swap(a, b);
  const double du = b.u - a.u;
  if (du < 1e-13) return std::fabs(a.v - b.v);

  // v is convex where positive and concave where negative, so along the
  // geodesic |v| never exceeds the endpoint values.
  const double v_cap = std::max(std::fabs(a.v), std::fabs(b.v)) + 1.0;
  const double ode_tol = std::min(1e-12, tol * 1e-3);

  auto shoot = [&](double slope) { return integrate(a.v, slope, du, v_cap, ode_tol); };
  // Overshoot above v_cap counts as "too high", escape below as "too low".
  auto miss = [&](const ShotResult& r) { return r.v_end - b.v; };

  double lo = (b.v - a.v) / du - 2.0;
  double hi = (b.v - a.v) / du + 2.0;
  ShotResult rlo = shoot(lo);
  ShotResult rhi = shoot(hi);
  for (int i = 0; miss(rlo) > 0.0; ++i) {
    if (i > 60) throw std::runtime_error("geodesic shooting: cannot bracket (low)");
    hi = lo;
    rhi = rlo;
    lo -= std::max(1.0, std::fabs(lo));
    rlo = shoot(lo);
  }
  for (int i = 0; miss(rhi) < 0.0; ++i) {
    if (i > 60) throw std::runtime_error("geodesic shooting: cannot bracket (high)");
    lo = hi;
    rlo = rhi;
    hi += std::max(1.0, std::fabs(hi));
    rhi = shoot(hi);
  }

  // Safeguarded bisection; the secant step is only trusted when both ends
  // landed (no escape).
  ShotResult best = rlo;
  for (int it = 0; it < 200; ++it) {
    const double span = hi - lo;
    if (span < 1e-15 * std::max(1.0, std::fabs(lo) + std::fabs(hi))) break;
    double mid = 0.5 * (lo + hi);
    if (!rlo.escaped && !rhi.escaped) {
      const double flo = miss(rlo), fhi = miss(rhi);
      if (fhi != flo) {
        const double sec = lo - flo * (hi - lo) / (fhi - flo);
        if (sec > lo + 0.05 * span && sec < hi - 0.05 * span) mid = sec;
      }
    }
    const ShotResult rm = shoot(mid);
    if (miss(rm) < 0.0) {
      lo = mid;
      rlo = rm;
    } else {
      hi = mid;
      rhi = rm;
    }
    if (!rm.escaped) best = rm;
  }
  if (best.escaped || std::fabs(best.v_end - b.v) > std::max(1e-8, tol)) {
    throw std::runtime_error("geodesic shooting did not converge");
  }
  return best.length;
}

std::pair<double, double> taxicab_distances(const FermiPoint& p, const FermiPoint& q) {
  FermiPoint hi = p, lo = q;
  if (hi.v < lo.v) std::swap(hi, lo);
  const double dv = hi.v - lo.v;
  const double d1 = dv + fermi_distance({hi.u, lo.v}, {lo.u, lo.v});
  const double d2 = fermi_distance({hi.u, hi.v}, {lo.u, hi.v}) + dv;
  return {d1, d2};
}

}  // namespace trains
