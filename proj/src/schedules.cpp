#include "egap/schedules.hpp"

#include <cmath>
#include <string>

#include "egap/errors.hpp"

namespace egap {

namespace {

void require_open_unit(double tau, const char* what) {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError(std::string(what) + " must lie in (0,1), got " + std::to_string(tau));
}

}  // namespace

double tau_next_alg1(double tau) { return tau / (tau + 1.0); }

double tau_next_alg2(double tau) {
  // The rationalized form tau / (sqrt(tau^2/4 + 1) + tau/2) avoids the
  // cancellation in sqrt(tau^2 + 4) - tau for small tau.
  return tau / (std::sqrt(0.25 * tau * tau + 1.0) + 0.5 * tau);
}

double tau_alg1_closed_form(double tau0, long k) { return tau0 / (1.0 + tau0 * static_cast<double>(k)); }

double beta_alg1_closed_form(double beta0, double tau0, long k) {
  if (k == 0) return beta0;
  // prod_{i<k} (1 - tau_i) telescopes since 1 - tau_i = (1 + tau0 (i - 1)) / (1 + tau0 i).
  return beta0 * (1.0 - tau0) / (1.0 + tau0 * static_cast<double>(k - 1));
}

double beta_alg1_upper_bound(double beta0, double tau0, long k) { return beta0 / (tau0 * static_cast<double>(k) + 1.0); }

XiPair xi_comparison(double tau) {
  require_open_unit(tau, "tau");
  return {tau_next_alg1(tau), tau_next_alg2(tau)};
}

TauSchedule TauSchedule::alg1(double tau0) {
  if (!(tau0 > 0.0 && tau0 < 0.5)) throw ConfigError("alg1 requires tau0 in (0, 1/2), got " + std::to_string(tau0));
  return {Kind::alg1_tightest, tau0, 0.0};
}

TauSchedule TauSchedule::alg2(double tau0) {
  require_open_unit(tau0, "tau0");
  return {Kind::alg2_tightest, tau0, 0.0};
}

TauSchedule TauSchedule::harmonic(double a) {
  if (!(a > 0.0 && a <= 0.5)) throw ConfigError("harmonic tau rule requires a in (0, 1/2]");
  return {Kind::harmonic, a, 1.0};
}

TauSchedule TauSchedule::shifted(double a, double b) {
  if (!(a > 1.5 && a < 2.0)) throw ConfigError("shifted tau rule requires a in (3/2, 2)");
  if (!(b >= (a - 1.0) / (2.0 - a)) || !(a < b)) throw ConfigError("shifted tau rule requires b >= (a-1)/(2-a) and a < b");
  return {Kind::shifted, a, b};
}

double TauSchedule::initial() const {
  switch (kind_) {
    case Kind::alg1_tightest:
    case Kind::alg2_tightest:
      return p_;
    case Kind::harmonic:
      return p_;
    case Kind::shifted:
      return p_ / q_;
  }
  return p_;
}

double TauSchedule::next(long k, double tau_k) const {
  switch (kind_) {
    case Kind::alg1_tightest:
      return tau_next_alg1(tau_k);
    case Kind::alg2_tightest:
      return tau_next_alg2(tau_k);
    case Kind::harmonic:
      return p_ / (static_cast<double>(k) + 2.0);
    case Kind::shifted:
      return p_ / (static_cast<double>(k) + 1.0 + q_);
  }
  return tau_k;
}

}  // namespace egap
