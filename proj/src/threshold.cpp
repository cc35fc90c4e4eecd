#include "geonet/threshold.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "geonet/errors.hpp"

namespace geonet {

namespace {

constexpr double kInvE = 0.36787944117144232159552377016146;  // 1/e

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Branch-point expansion in p = sqrt(2 (e x + 1)); sign +1 for W0, -1 for W-1.
double branch_point_series(double x, double sign) {
  const double p = sign * std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

double initial_guess(double x, LambertBranch branch) {
  if (branch == LambertBranch::Principal) {
    if (x < -0.32) return branch_point_series(x, 1.0);
    if (x < 1.0) return x * (1.0 - x + 1.5 * x * x);
    if (x < 3.0) return 0.5 * std::log1p(x) + 0.15;
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
  }
  if (x < -0.25) return branch_point_series(x, -1.0);
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w(double x, LambertBranch branch) {
  if (std::isnan(x)) throw DomainError("lambert_w: argument is NaN");
  if (x < -kInvE) {
    // Accept the double nearest -1/e that rounds below it.
    if (x >= -kInvE * (1.0 + 4 * std::numeric_limits<double>::epsilon())) return -1.0;
    throw DomainError("lambert_w: argument " + fmt(x) + " below -1/e");
  }
  if (branch == LambertBranch::Secondary && x >= 0.0) {
    throw DomainError("lambert_w: secondary branch needs -1/e <= x < 0, got " + fmt(x));
  }
  if (x == 0.0) return 0.0;
  if (x == -kInvE) return -1.0;
  if (std::isinf(x)) return x;

  double w = initial_guess(x, branch);
  // Halley on f(w) = w e^w - x.
  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    const double next = w - step;
    if (!std::isfinite(next)) break;
    // Keep the iterate on its branch.
    w = branch == LambertBranch::Principal ? std::max(next, -1.0) : std::min(next, -1.0);
    if (std::fabs(step) <= 4 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(w))) {
      break;
    }
  }
  return w;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument " + fmt(x) + " must be positive");
  return std::lgamma(x);
}

const char* to_string(AlphaBranch b) {
  switch (b) {
    case AlphaBranch::Principal:
      return "principal";
    case AlphaBranch::Secondary:
      return "secondary";
    case AlphaBranch::ClampedToBranchPoint:
      return "clamped_to_branch_point";
  }
  return "?";
}

double alpha_constraint_defect(double s, int kappa, double alpha) {
  const double k = kappa;
  return (k - 1.0) * (alpha - s * std::log(alpha)) + k * log_gamma(s) -
         log_gamma(s - k + 1.0);
}

AlphaStarResult alpha_from_log_arg(double s, int kappa, double log_neg_arg,
                                   LambertBranch branch) {
  AlphaStarResult out;
  out.log_neg_arg = log_neg_arg;
  out.lambert_arg = -std::exp(log_neg_arg);
  if (log_neg_arg > -1.0) {
    // arg < -1/e: no real branch. F is minimized at alpha = s.
    out.alpha = s;
    out.feasible = false;
    out.branch = AlphaBranch::ClampedToBranchPoint;
    out.residual = std::fabs(alpha_constraint_defect(s, kappa, s));
    return out;
  }
  out.alpha = -s * lambert_w(out.lambert_arg, branch);
  out.feasible = true;
  out.branch = branch == LambertBranch::Principal ? AlphaBranch::Principal : AlphaBranch::Secondary;
  out.residual = std::fabs(alpha_constraint_defect(s, kappa, out.alpha));
  return out;
}

AlphaStarResult alpha_star(double s, int kappa, LambertBranch branch) {
  if (kappa < 2) throw DomainError("alpha_star: multiplicity must be >= 2");
  if (!(s > kappa)) {
    throw DomainError("alpha_star: size " + fmt(s) + " must exceed multiplicity " +
                      std::to_string(kappa));
  }
  const double k = kappa;
  const double log_neg_arg =
      k / ((k - 1.0) * s) * (log_gamma(s) - log_gamma(s - k + 1.0) / k) - std::log(s);
  return alpha_from_log_arg(s, kappa, log_neg_arg, branch);
}

namespace {

void check_size_exponent(double s, double l) {
  if (!(s >= 2.0)) throw DomainError("size " + fmt(s) + " must be >= 2");
  if (!(l > 0.0 && l < 1.0)) throw DomainError("exponent l = " + fmt(l) + " outside (0, 1)");
}

// ln(s pi / (4 (s-1)!)).
double log_prefactor(double s) {
  return std::log(s * std::numbers::pi / 4.0) - log_gamma(s);
}

}  // namespace

double f_choice(double s, double l, double alpha) {
  check_size_exponent(s, l);
  if (!(alpha > 0.0)) throw DomainError("f_choice: alpha " + fmt(alpha) + " must be positive");
  return std::pow(s, l) - log_prefactor(s) - (s - 1.0) * std::log(alpha) + alpha;
}

PsiReport psi(double s, double f_value, double alpha) {
  PsiReport r;
  r.psi = log_prefactor(s) + f_value + (s - 1.0) * std::log(alpha) - alpha;
  r.positive = r.psi > 0.0;
  r.ratio_to_s = r.psi / s;
  return r;
}

double a_f_star(double s, double p, double l) {
  check_size_exponent(s, l);
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("probability p = " + fmt(p) + " outside (0, 1]");
  return std::sqrt(std::pow(s, l - 1.0) / (p * std::numbers::pi));
}

double l_from_af(double a, double p, double s) {
  if (!(s >= 2.0)) throw DomainError("size " + fmt(s) + " must be >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("probability p = " + fmt(p) + " outside (0, 1]");
  if (!(a > 0.0)) throw DomainError("radius " + fmt(a) + " must be positive");
  const double mass = a * a * p * std::numbers::pi * s;
  if (!(mass > 1.0)) {
    throw DomainError("a^2 p pi s = " + fmt(mass) + " must exceed 1 (else l <= 0)");
  }
  if (!(mass < s)) {
    throw DomainError("a^2 p pi s = " + fmt(mass) + " must be below s = " + fmt(s) +
                      " (else l >= 1)");
  }
  return std::log(mass) / std::log(s);
}

double beta_estimate(double f_limit) {
  if (std::isnan(f_limit)) throw DomainError("beta_estimate: limit is NaN");
  return std::exp(-f_limit);
}

}  // namespace geonet
