// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// Closed-form and series implementations of the SO(3)/SE(3) exponential
// maps, adjoint operators, the inverse of the right-trivialized differential
// dexp^-1, and the directional derivatives of dexp^-1.
//
// Conventions. A screw vector X = (x, y) stacks the angular part first.
// The little adjoint is ad_X = [[x~, 0], [y~, x~]] where x~ is the
// skew-symmetric (cross-product) matrix; every block formula in this file
// assumes that layout. Poses act as C = (R, t) with exp(X^) = C and the
// body twist V obeying the reconstruction equation V = dexp_{-X} Xdot.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "se3lqr/types.hpp"

namespace se3lqr {

/// Chart validity bound on the rotational coordinate norm.
inline constexpr double kChartLimit = 2.0 * std::numbers::pi - 1e-6;

/// Principal-branch logarithm validity bound on the rotation angle.
inline constexpr double kLogBranchLimit = std::numbers::pi - 1e-6;

/// Below this |x| the sinc-family scalars use their Taylor series.
inline constexpr double kScalarSeriesThreshold = 1e-4;

/// Below this |x|^2 the singular coefficient fractions (0/0 at the origin)
/// switch to series in t = |x|^2. At the seam (|x| = 0.3) both branches
/// agree to ~1e-15 relative; naive evaluation of the deepest fraction loses
/// all precision below |x| ~ 1e-2.
inline constexpr double kKernelSeriesThresholdSq = 0.09;

/// alpha = sinc|x|, beta = sinc^2(|x|/2), gamma = alpha/beta.
struct ScalarTriple {
  double alpha;
  double beta;
  double gamma;
};

namespace detail {

inline double horner(const std::array<double, 6>& c, double t) {
  double acc = c[5];
  for (int i = 4; i >= 0; --i) acc = acc * t + c[i];
  return acc;
}

// Series in t = |x|^2, exact rational coefficients.
inline constexpr std::array<double, 6> kAlphaSeries = {
    1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880, -1.0 / 39916800};
inline constexpr std::array<double, 6> kBetaSeries = {
    1.0, -1.0 / 12, 1.0 / 360, -1.0 / 20160, 1.0 / 1814400, -1.0 / 239500800};
inline constexpr std::array<double, 6> kGammaSeries = {
    1.0, -1.0 / 12, -1.0 / 720, -1.0 / 30240, -1.0 / 1209600, -1.0 / 47900160};
// g = (1 - gamma)/t: x~^2 coefficient of dexp^-1 on SO(3).
inline constexpr std::array<double, 6> kGSeries = {
    1.0 / 12,      1.0 / 720,      1.0 / 30240,
    1.0 / 1209600, 1.0 / 47900160, 691.0 / 1307674368000};
// q = (1/beta + gamma - 2)/t^2 = 2 dg/dt.
inline constexpr std::array<double, 6> kQSeries = {
    1.0 / 360,     1.0 / 7560,           1.0 / 201600,
    1.0 / 5987520, 691.0 / 130767436800, 1.0 / 6227020800};
// qp = dq/dt.
inline constexpr std::array<double, 6> kQpSeries = {
    1.0 / 7560,          1.0 / 100800,     1.0 / 1995840,
    691.0 / 32691859200, 1.0 / 1245404160, 3617.0 / 127031224320000};
// c2, c4: ad^2 and ad^4 coefficients of dexp^-1 on SE(3).
inline constexpr std::array<double, 6> kC2Series = {
    1.0 / 12,       0.0,            -1.0 / 30240,
    -1.0 / 604800, -1.0 / 15966720, -691.0 / 326918592000};
inline constexpr std::array<double, 6> kC4Series = {
    -1.0 / 720,      -1.0 / 15120,          -1.0 / 403200,
    -1.0 / 11975040, -691.0 / 261534873600, -1.0 / 12454041600};
// e3 = (1 - alpha)/t: x~^2 coefficient of dexp on SO(3).
inline constexpr std::array<double, 6> kE3Series = {
    1.0 / 6,       -1.0 / 120,     1.0 / 5040,
    -1.0 / 362880, 1.0 / 39916800, -1.0 / 6227020800};

/// Scalar coefficient kernels shared by the closed forms, as functions of
/// t = |x|^2.
struct Kernels {
  double alpha, beta, gamma;
  double g;   // (1 - gamma)/t
  double q;   // (1/beta + gamma - 2)/t^2
  double qp;  // dq/dt
  double c2;  // (2 - (1+3 alpha)/(2 beta))/t
  double c4;  // (1 - (1+alpha)/(2 beta))/t^2
  double e3;  // (1 - alpha)/t
};

inline Kernels kernels(double t) {
  Kernels k;
  if (t < kKernelSeriesThresholdSq) {
    k.alpha = horner(kAlphaSeries, t);
    k.beta = horner(kBetaSeries, t);
    k.gamma = horner(kGammaSeries, t);
    k.g = horner(kGSeries, t);
    k.q = horner(kQSeries, t);
    k.qp = horner(kQpSeries, t);
    k.c2 = horner(kC2Series, t);
    k.c4 = horner(kC4Series, t);
    k.e3 = horner(kE3Series, t);
  } else {
    const double theta = std::sqrt(t);
    k.alpha = std::sin(theta) / theta;
    const double s = std::sin(0.5 * theta) / (0.5 * theta);
    k.beta = s * s;
    k.gamma = k.alpha / k.beta;
    k.g = (1.0 - k.gamma) / t;
    k.q = (1.0 / k.beta + k.gamma - 2.0) / (t * t);
    k.qp = ((k.alpha - 2.0 * k.gamma - 3.0) / (2.0 * k.beta) + 4.0 -
            2.0 * k.gamma) /
           (t * t * t);
    k.c2 = (2.0 - (1.0 + 3.0 * k.alpha) / (2.0 * k.beta)) / t;
    k.c4 = (1.0 - (1.0 + k.alpha) / (2.0 * k.beta)) / (t * t);
    k.e3 = (1.0 - k.alpha) / t;
  }
  return k;
}

inline void require_in_chart(double ang_norm) {
  if (ang_norm >= kChartLimit) {
    throw ChartSingularityError(
        "rotational coordinate norm " + std::to_string(ang_norm) +
        " is at or beyond the 2*pi chart singularity");
  }
}

// B_i / i! with the convention B_1 = -1/2; odd entries above 1 vanish.
inline constexpr std::array<double, 31> kBernoulliOverFactorial = {
    1.0,
    -0.5,
    8.3333333333333333333e-02,
    0.0,
    -1.3888888888888888889e-03,
    0.0,
    3.3068783068783068783e-05,
    0.0,
    -8.2671957671957671958e-07,
    0.0,
    2.0876756987868098979e-08,
    0.0,
    -5.2841901386874931848e-10,
    0.0,
    1.3382536530684678833e-11,
    0.0,
    -3.3896802963225828668e-13,
    0.0,
    8.5860620562778445641e-15,
    0.0,
    -2.1748686985580618730e-16,
    0.0,
    5.5090028283602295152e-18,
    0.0,
    -1.3954464685812523341e-19,
    0.0,
    3.5347070396294674717e-21,
    0.0,
    -8.9535174270375468504e-23,
    0.0,
    2.2679524523376830603e-24,
};

}  // namespace detail

/// Skew-symmetric matrix v~ with v~ w = v x w.
inline Mat3 tilde(const Vec3& v) {
  Mat3 m;
  // clang-format off
  m <<     0, -v.z(),  v.y(),
       v.z(),      0, -v.x(),
      -v.y(),  v.x(),      0;
  // clang-format on
  return m;
}

/// Inverse of tilde (extracts the axial vector of a skew matrix).
inline Vec3 vee(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

/// (alpha, beta, gamma) = (sinc theta, sinc^2(theta/2), alpha/beta),
/// series-evaluated below the small-angle threshold.
inline ScalarTriple scalar_triple(double theta) {
  const double t = theta * theta;
  double alpha, beta;
  if (theta < kScalarSeriesThreshold) {
    alpha = detail::horner(detail::kAlphaSeries, t);
    beta = detail::horner(detail::kBetaSeries, t);
  } else {
    alpha = std::sin(theta) / theta;
    const double s = std::sin(0.5 * theta) / (0.5 * theta);
    beta = s * s;
  }
  return {alpha, beta, alpha / beta};
}

/// Rodrigues form exp(x~) = I + alpha x~ + (beta/2) x~^2.
inline Mat3 exp_so3(const Vec3& x) {
  const ScalarTriple s = scalar_triple(x.norm());
  const Mat3 tx = tilde(x);
  return Mat3::Identity() + s.alpha * tx + 0.5 * s.beta * (tx * tx);
}

/// Right-trivialized differential of exp on SO(3):
/// dexp_x = I + (beta/2) x~ + (1-alpha)/|x|^2 x~^2.
inline Mat3 dexp_so3(const Vec3& x) {
  const detail::Kernels k = detail::kernels(x.squaredNorm());
  const Mat3 tx = tilde(x);
  return Mat3::Identity() + 0.5 * k.beta * tx + k.e3 * (tx * tx);
}

/// Inverse of dexp on SO(3): I - x~/2 + (1-gamma)/|x|^2 x~^2.
inline Mat3 dexpinv_so3(const Vec3& x) {
  detail::require_in_chart(x.norm());
  const detail::Kernels k = detail::kernels(x.squaredNorm());
  const Mat3 tx = tilde(x);
  return Mat3::Identity() - 0.5 * tx + k.g * (tx * tx);
}

/// Closed-form exponential on SE(3). The translation column is
/// dexp_x y, equivalently (1/|x|^2)(I-R)x~ y + (x.y/|x|^2) x.
inline Pose exp_se3(const ScrewVector& X) {
  return {exp_so3(X.ang), dexp_so3(X.ang) * X.lin};
}

/// Principal-branch logarithm on SO(3); |result| < pi.
/// Throws AngleAtBranchBoundaryError for angles at or beyond pi - 1e-6.
inline Vec3 log_so3(const Mat3& rot) {
  const double c = std::clamp(0.5 * (rot.trace() - 1.0), -1.0, 1.0);
  const double theta = std::acos(c);
  if (theta >= kLogBranchLimit) {
    throw AngleAtBranchBoundaryError(
        "rotation angle " + std::to_string(theta) +
        " is at the principal-branch boundary; re-anchor the chart");
  }
  const Vec3 w = 0.5 * vee(rot - rot.transpose());  // = alpha * x
  if (theta < 3.0) {
    return w / scalar_triple(theta).alpha;
  }
  // Near pi the skew part degrades; recover the axis from the symmetric
  // part (nn^T = I + (R_sym - I)/(1 - cos)) and fix its sign with w.
  const Mat3 sym = 0.5 * (rot + rot.transpose());
  const Mat3 nnt = Mat3::Identity() + (sym - Mat3::Identity()) / (1.0 - c);
  int k = 0;
  nnt.diagonal().maxCoeff(&k);
  Vec3 n = nnt.col(k) / std::sqrt(nnt(k, k));
  if (n.dot(w) < 0.0) n = -n;
  return theta * n;
}

/// Inverse chart: coordinates X with exp_se3(X) = C, principal branch.
inline ScrewVector log_se3(const Pose& C) {
  const Vec3 x = log_so3(C.rot);
  return {x, dexpinv_so3(x) * C.trans};
}

/// Little adjoint ad_X = [[x~, 0], [y~, x~]].
inline Mat6 ad(const ScrewVector& X) {
  Mat6 m = Mat6::Zero();
  const Mat3 tx = tilde(X.ang);
  m.topLeftCorner<3, 3>() = tx;
  m.bottomRightCorner<3, 3>() = tx;
  m.bottomLeftCorner<3, 3>() = tilde(X.lin);
  return m;
}

/// Adjoint of a pose, [[R, 0], [t~ R, R]]; maps body twists to spatial.
inline Mat6 Ad(const Pose& C) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = C.rot;
  m.bottomRightCorner<3, 3>() = C.rot;
  m.bottomLeftCorner<3, 3>() = tilde(C.trans) * C.rot;
  return m;
}

/// Matrix series dexp_X = sum_i ad_X^i / (i+1)!, truncated when the next
/// term's max-norm drops below tol or after 40 terms.
inline Mat6 dexp_series(const ScrewVector& X, double tol) {
  const Mat6 a = ad(X);
  Mat6 sum = Mat6::Identity();
  Mat6 term = Mat6::Identity();
  for (int i = 1; i <= 40; ++i) {
    term = (term * a) / static_cast<double>(i + 1);
    if (term.cwiseAbs().maxCoeff() < tol) break;
    sum += term;
  }
  return sum;
}

/// Bernoulli series dexp_X^-1 = sum_{i<n_terms} (B_i/i!) ad_X^i with
/// B_1 = -1/2. Convergence requires |X.ang| < 2; n_terms is clamped at 31
/// (higher terms are below double precision on that domain).
inline Mat6 dexpinv_series(const ScrewVector& X, int n_terms) {
  const Mat6 a = ad(X);
  Mat6 sum = Mat6::Identity();
  Mat6 p = Mat6::Identity();
  const int n = std::min(n_terms, 31);
  for (int i = 1; i < n; ++i) {
    p = p * a;
    const double c = detail::kBernoulliOverFactorial[static_cast<size_t>(i)];
    if (c != 0.0) sum += c * p;
  }
  return sum;
}

/// Closed-form dexp_X^-1 on SE(3) in ad-power form:
/// I - ad/2 + c2 ad^2 + c4 ad^4.
inline Mat6 dexpinv_se3(const ScrewVector& X) {
  detail::require_in_chart(X.ang.norm());
  const detail::Kernels k = detail::kernels(X.ang.squaredNorm());
  const Mat6 a = ad(X);
  const Mat6 a2 = a * a;
  return Mat6::Identity() - 0.5 * a + k.c2 * a2 + k.c4 * (a2 * a2);
}

/// Directional derivative of dexp^-1 on SO(3) at x in direction y:
/// -y~/2 + g (x~ y~ + y~ x~) + q (x.y) x~^2.
inline Mat3 ddexpinv_so3(const Vec3& x, const Vec3& y) {
  detail::require_in_chart(x.norm());
  const detail::Kernels k = detail::kernels(x.squaredNorm());
  const Mat3 tx = tilde(x);
  const Mat3 ty = tilde(y);
  return -0.5 * ty + k.g * (tx * ty + ty * tx) + k.q * x.dot(y) * (tx * tx);
}

/// dexp_X^-1 assembled from its SO(3) blocks,
/// [[dexpinv_so3(x), 0], [ddexpinv_so3(x, y), dexpinv_so3(x)]];
/// an independent closed-form cross-check of dexpinv_se3.
inline Mat6 dexpinv_blockform(const ScrewVector& X) {
  detail::require_in_chart(X.ang.norm());
  const Mat3 d = dexpinv_so3(X.ang);
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = d;
  m.bottomRightCorner<3, 3>() = d;
  m.bottomLeftCorner<3, 3>() = ddexpinv_so3(X.ang, X.lin);
  return m;
}

/// Directional derivative of the SE(3) dexp^-1 matrix at X in direction
/// U = (u, v). Diagonal blocks are ddexpinv_so3(x, u); the lower-left block
/// is the derivative of L(x, y) = -y~/2 + g (x~y~ + y~x~) + q (x.y) x~^2
/// along (u, v), using q = 2 dg/dt and qp = dq/dt:
///   -v~/2 + g (x~v~ + v~x~ + y~u~ + u~y~)
///   + q [(x.u)(x~y~ + y~x~) + (x.y)(x~u~ + u~x~) + (x.v + y.u) x~^2]
///   + 2 qp (x.y)(x.u) x~^2.
inline Mat6 ddexpinv_se3(const ScrewVector& X, const ScrewVector& U) {
  detail::require_in_chart(X.ang.norm());
  const detail::Kernels k = detail::kernels(X.ang.squaredNorm());
  const Vec3& x = X.ang;
  const Vec3& y = X.lin;
  const Vec3& u = U.ang;
  const Vec3& v = U.lin;
  const Mat3 tx = tilde(x);
  const Mat3 ty = tilde(y);
  const Mat3 tu = tilde(u);
  const Mat3 tv = tilde(v);
  const Mat3 tx2 = tx * tx;

  const Mat3 diag = -0.5 * tu + k.g * (tx * tu + tu * tx) + k.q * x.dot(u) * tx2;
  const Mat3 lower =
      -0.5 * tv + k.g * (tx * tv + tv * tx + ty * tu + tu * ty) +
      k.q * (x.dot(u) * (tx * ty + ty * tx) + x.dot(y) * (tx * tu + tu * tx) +
             (x.dot(v) + y.dot(u)) * tx2) +
      2.0 * k.qp * x.dot(y) * x.dot(u) * tx2;

  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = diag;
  m.bottomRightCorner<3, 3>() = diag;
  m.bottomLeftCorner<3, 3>() = lower;
  return m;
}

}  // namespace se3lqr
