#pragma once

#include <utility>

namespace trains {

/// x_+ : positive part.
inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

/// acosh with a log1p-based branch near argument 1 (avoids the cancellation
/// in log(z + sqrt(z^2 - 1))) and a log-based branch for huge arguments.
/// Arguments below 1 by more than a few ulps throw std::domain_error.
double stable_acosh(double z);

double log_cosh(double x);
double log_sinh(double x);  // requires x > 0

/// Length of the side opposite T in a right-angled hexagon whose alternating
/// sides X, T, Y have lengths x, t, y:
///   Arccosh((cosh t + cosh x cosh y) / (sinh x sinh y)).
/// For a train this is the distance between consecutive fundamental
/// geodesics when called as (l_k, l_{k+1}, r_k). Requires x, y > 0.
double hexagon_side(double x, double y, double t);

/// Distance between the two points at height h on a pair of disjoint
/// geodesics at mutual distance d0 (right-angled quadrilateral relation):
///   2 Arcsinh(sinh(d0/2) cosh h).
double quad_point_distance(double d0, double h);

/// Distance from the point at height h on side Y of a right-angled hexagon
/// to the side opposite Y (right-angled pentagon relation):
///   Arcsinh((cosh x cosh(y - h) + cosh t cosh h) / sinh y).
/// Requires y > 0; the asymptotic comparisons assume y >= h >= x.
double pentagon_foot_distance(double x, double y, double t, double h);

/// Two-branch envelope comparable to Arcsinh(sinh a cosh x):
///   a <= 1 : sinh a cosh x / sinh 1      (the a <= 1 branch is used at a = 1)
///   a >  1 : log(sinh a cosh x)
/// Satisfies envelope <= a e^x <= 2 sinh a cosh x for all a, x >= 0.
double arcsinh_envelope(double a, double x);

/// Point in Fermi coordinates based on a geodesic: u runs along the base
/// geodesic, v is the signed orthogonal distance. Metric:
/// ds^2 = dv^2 + cosh^2(v) du^2.
struct FermiPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Closed-form distance in the Fermi metric:
///   Arccosh(cosh(u_p - u_q) cosh v_p cosh v_q - sinh v_p sinh v_q).
/// The formula is validated against fermi_distance_numeric by the test and
/// acceptance suites; the numeric oracle is the authority if they disagree.
double fermi_distance(const FermiPoint& p, const FermiPoint& q);

/// Independent oracle: length of the minimizing geodesic obtained by
/// integrating the geodesic equation of dv^2 + cosh^2(v) du^2 (shooting on
/// the initial slope, adaptive Runge-Kutta). Absolute accuracy <= tol.
/// Throws std::runtime_error when the solver fails to converge.
double fermi_distance_numeric(const FermiPoint& p, const FermiPoint& q, double tol);

/// The two "taxicab" distances (vertical-then-horizontal and the reverse),
/// with the points ordered internally so that v_1 >= v_2:
///   d1 = (v1 - v2) + d((u1, v2), (u2, v2))
///   d2 = d((u1, v1), (u2, v1)) + (v1 - v2)
/// Both are within factors 2 resp. 3 of the true distance.
std::pair<double, double> taxicab_distances(const FermiPoint& p, const FermiPoint& q);

}  // namespace trains
