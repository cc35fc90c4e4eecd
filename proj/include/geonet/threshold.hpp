#pragma once

#include <string>

namespace geonet {

enum class LambertBranch { Principal, Secondary };

// Real Lambert W: the w with w * exp(w) = x on the requested branch.
// Principal (W0) needs x >= -1/e; Secondary (W-1) needs -1/e <= x < 0.
// Throws DomainError carrying x otherwise.
double lambert_w(double x, LambertBranch branch = LambertBranch::Principal);

// ln Gamma(x) for x > 0.
double log_gamma(double x);

enum class AlphaBranch { Principal, Secondary, ClampedToBranchPoint };

const char* to_string(AlphaBranch b);

// Solution of the multiplicity constraint for the rate alpha*.
//
// The constraint asks for alpha with
//   alpha^(s-k) e^-alpha / (s-k)!  =  (alpha^(s-1) e^-alpha / (s-1)!)^k,
// equivalently F(alpha) = 0 with
//   F(alpha) = (k-1)(alpha - s ln alpha) + k lnGamma(s) - lnGamma(s-k+1),
// whose real solutions are alpha = -s W(arg) where
//   ln(-arg) = k/((k-1)s) (lnGamma(s) - lnGamma(s-k+1)/k) - ln s.
// When arg < -1/e there is no real solution; alpha is then clamped to s (the
// minimizer of F) and feasible is false.
struct AlphaStarResult {
  double alpha = 0.0;
  bool feasible = false;
  double lambert_arg = 0.0;
  // ln(-lambert_arg); kept because lambert_arg itself loses digits near -1/e.
  double log_neg_arg = 0.0;
  AlphaBranch branch = AlphaBranch::ClampedToBranchPoint;
  // |F(alpha)|; for the clamped case this is min over alpha of |F|.
  double residual = 0.0;
};

AlphaStarResult alpha_star(double s, int kappa, LambertBranch branch = LambertBranch::Principal);

// Same solve from a precomputed ln(-arg). Exposed so the feasible path can be
// exercised directly; alpha_star() only ever reaches it when arg >= -1/e.
AlphaStarResult alpha_from_log_arg(double s, int kappa, double log_neg_arg,
                                   LambertBranch branch);

// F(alpha) defined above.
double alpha_constraint_defect(double s, int kappa, double alpha);

// f(s) = s^l - ln(s pi / (4 (s-1)!)) - (s-1) ln(alpha) + alpha.
double f_choice(double s, double l, double alpha);

struct PsiReport {
  double psi = 0.0;
  bool positive = false;
  double ratio_to_s = 0.0;
};

// psi(s) = ln(s pi / (4 (s-1)!)) + f + (s-1) ln(alpha) - alpha.
PsiReport psi(double s, double f_value, double alpha);

// Adaptive threshold sqrt(s^(l-1) / (p pi)).
double a_f_star(double s, double p, double l);

// Exponent l = ln(a^2 p pi s) / ln(s) reproducing radius a at size s.
double l_from_af(double a, double p, double s);

// exp(-f_limit) with exp(-inf) = 0 and exp(+inf) = inf.
double beta_estimate(double f_limit);

}  // namespace geonet
