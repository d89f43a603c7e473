#pragma once

namespace egap {

/// tau_{k+1} = tau_k / (tau_k + 1), the tightest rule keeping beta1 beta2 >= tau^2/(1-tau)^2 Lbar.
double tau_next_alg1(double tau);

/// tau_{k+1} = (tau_k/2)(sqrt(tau_k^2 + 4) - tau_k), the positive root of t^2 + tau^2 t - tau^2 = 0.
double tau_next_alg2(double tau);

/// tau_k = tau0 / (1 + tau0 k).
double tau_alg1_closed_form(double tau0, long k);

/// Exact value of beta_k for beta_{k+1} = (1 - tau_k) beta_k under the alg1 rule:
/// beta0 for k = 0 and beta0 (1 - tau0) / (1 + tau0 (k - 1)) afterwards.
double beta_alg1_closed_form(double beta0, double tau0, long k);

/// beta0 / (tau0 k + 1), an upper bound on beta_alg1_closed_form (equal at k = 0).
double beta_alg1_upper_bound(double beta0, double tau0, long k);

struct XiPair {
  double xi1 = 0.0;  // tau / (tau + 1)
  double xi2 = 0.0;  // (tau/2)(sqrt(tau^2 + 4) - tau)
};

XiPair xi_comparison(double tau);

/// Step-size sequence. `tightest` uses the recurrence of the owning algorithm;
/// `harmonic` is tau_k = a/(k+1) and `shifted` is tau_k = a/(k+b).
class TauSchedule {
 public:
  enum class Kind { alg1_tightest, alg2_tightest, harmonic, shifted };

  static TauSchedule alg1(double tau0);
  static TauSchedule alg2(double tau0);
  /// a in (0, 1/2]; then a/(k+2) <= tau_k/(tau_k+1) for all k.
  static TauSchedule harmonic(double a);
  /// a in (3/2, 2), b >= (a-1)/(2-a), a < b.
  static TauSchedule shifted(double a, double b);

  Kind kind() const { return kind_; }
  double initial() const;
  /// tau_{k+1} given the current tau_k.
  double next(long k, double tau_k) const;

 private:
  TauSchedule(Kind kind, double p, double q) : kind_(kind), p_(p), q_(q) {}
  Kind kind_;
  double p_;
  double q_;
};

}  // namespace egap
