#include "fmb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmb/errors.hpp"

namespace fmb::bounds {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// ceil(8 ln k) used by the regime boundaries.
double regime_split(double ln_k) { return std::ceil(8.0 * ln_k); }

// True when m >= 2^k, decided in log space (k itself may be astronomical).
bool ultra_high(int m, double ln_k) {
  if (m < 2) return false;
  const double k_as_real = std::exp(ln_k);
  if (!std::isfinite(k_as_real)) return false;  // 2^k beyond anything
  return std::log2(static_cast<double>(m)) >= k_as_real;
}

double floor_two_lnk_plus_one(double ln_k) { return std::floor(2.0 * ln_k + 1.0); }

}  // namespace

double BoundInputs::lbar() const { return lip_loss * std::max(1.0, lip_hypothesis); }

void BoundInputs::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (!(delta_noise >= 0.0 && delta_noise <= 2.0)) throw DomainError("noise level outside [0,2]");
  if (!(diameter > 0.0)) throw DomainError("diameter must be positive");
  if (!std::isfinite(ln_k) || !std::isfinite(ln_n)) throw DomainError("ln k / ln N not finite");
}

double rate_r(int m, double ln_n) {
  if (m < 1) throw DomainError("representation dimension must be >= 1");
  if (m == 1) return std::exp(-0.5 * ln_n);
  if (m == 2) return (32.0 + ln_n / kLn2) * std::exp(-0.5 * ln_n);
  return std::exp(-ln_n / static_cast<double>(m));
}

double dim_const(int m) {
  if (m < 1) throw DomainError("representation dimension must be >= 1");
  if (m == 1) return 1.0 / (std::sqrt(8.0) - 2.0);
  if (m == 2) return std::sqrt(2.0) / 4.0;
  const double half = static_cast<double>(m) / 2.0;
  const double base = (half - 1.0) / (2.0 * (1.0 - std::exp2(1.0 - half)));
  return 2.0 * std::pow(base, 2.0 / static_cast<double>(m)) *
         (1.0 + 1.0 / (2.0 * (half - 1.0))) * std::sqrt(static_cast<double>(m));
}

double eps(int m, double ln_k) {
  return 2.0 * std::sqrt(2.0) * std::sqrt(ln_k) / std::sqrt(static_cast<double>(m));
}

double eps_tilde(int m, double ln_k) {
  const double root_m = std::sqrt(static_cast<double>(m));
  const double shift = 2.0 * std::sqrt(2.0) * std::sqrt(ln_k);
  if (root_m <= shift)
    throw DomainError("eps~ needs m > 8 ln k (got m = " + std::to_string(m) +
                      ", 8 ln k = " + std::to_string(8.0 * ln_k) + ")");
  return std::sqrt(root_m + shift) / std::sqrt(root_m - shift);
}

std::string tau_regime(int m, double ln_k, std::optional<int> euclidean_d) {
  if (euclidean_d && m >= *euclidean_d) return "euclidean-identity";
  if (m <= 2) return "ultra-low";
  if (static_cast<double>(m) <= regime_split(ln_k))
    return euclidean_d ? "euclidean-low" : "low";
  if (ultra_high(m, ln_k) && !euclidean_d) return "ultra-high";
  return "high";
}

double worstcase_tau(int m, double ln_k, std::optional<int> euclidean_d) {
  if (m < 1) throw DomainError("representation dimension must be >= 1");
  if (euclidean_d && m >= *euclidean_d) return 1.0;
  if (m <= 2) return 12.0 * std::exp(ln_k);
  const double md = static_cast<double>(m);
  if (md <= regime_split(ln_k)) {
    if (euclidean_d)
      return 15.0 * std::exp(2.0 * ln_k / md) * std::sqrt(ln_k / md);
    return 720.0 * std::exp(2.0 * ln_k / md) * floor_two_lnk_plus_one(ln_k) *
           std::sqrt(ln_k / md) * eps_tilde(m, ln_k);
  }
  if (ultra_high(m, ln_k) && !euclidean_d) return 48.0 * floor_two_lnk_plus_one(ln_k);
  return 48.0 * floor_two_lnk_plus_one(ln_k) * eps_tilde(m, ln_k);
}

LowDimRouteConstants low_dim_route_constants(int m, double k) {
  if (m < 3) throw DomainError("low-dimensional route needs m >= 3");
  const double ln_k = std::log(k);
  const double e_kk = 2.0 * std::sqrt(2.0) * std::sqrt(ln_k) / std::sqrt(k);
  if (e_kk >= 1.0) throw DomainError("route undefined: k <= 8 ln k");
  LowDimRouteConstants out;
  out.lower = std::sqrt(1.0 - e_kk) /
              (144.0 * std::pow(k, 2.0 / m) * std::sqrt(k / m) *
               std::floor(std::log2(k) + 1.0));
  out.upper = 5.0 * std::sqrt(ln_k / k) * std::sqrt(1.0 + e_kk);
  return out;
}

ConcentrationBounds concentration_bounds(const BoundInputs& in, int m, double tau) {
  in.validate();
  if (tau < 1.0) throw DomainError("distortion must be >= 1");
  const double base = dim_const(m) * in.diameter * rate_r(m, in.ln_n);
  ConcentrationBounds out;
  out.c1 = base * tau;
  out.c2 = base * (tau - 1.0);
  const double n = std::exp(in.ln_n);
  const double diam = in.diameter;
  out.tail = [n, tau, diam](double e) {
    return 2.0 * std::exp(-2.0 * n * e * e / (tau * tau * diam * diam));
  };
  return out;
}

double generalization_bound(const BoundInputs& in, int m, double tau) {
  in.validate();
  if (tau < 1.0) throw DomainError("distortion must be >= 1");
  const double mean_term = dim_const(m) * (2.0 * tau - 1.0) * rate_r(m, in.ln_n);
  const double tail_term =
      tau * std::sqrt(std::log(2.0 / in.delta)) * std::exp(-0.5 * (kLn2 + in.ln_n));
  return in.lbar() * in.diameter * (mean_term + tail_term);
}

double estimation_bound(const BoundInputs& in, int m, double tau) {
  return generalization_bound(in, m, tau) + in.lbar() * in.diameter * in.delta_noise;
}

BestBound best_bound_over_m(const BoundInputs& in, const std::vector<int>& m_range) {
  if (m_range.empty()) throw DomainError("empty representation-dimension range");
  BestBound best;
  best.m_star = 0;
  best.value = std::numeric_limits<double>::infinity();
  for (int m : m_range) {
    RateTableRow row;
    row.m = m;
    row.regime = tau_regime(m, in.ln_k, in.euclidean_d);
    try {
      row.tau_worstcase = worstcase_tau(m, in.ln_k, in.euclidean_d);
      row.r_m_at_n = rate_r(m, in.ln_n);
      row.c_tilde_m = dim_const(m);
      row.bound = generalization_bound(in, m, row.tau_worstcase);
    } catch (const DomainError&) {
      row.skipped = true;
    }
    if (!row.skipped && row.bound < best.value) {
      best.value = row.bound;
      best.m_star = m;
    }
    best.rows.push_back(row);
  }
  if (best.m_star == 0) throw DomainError("every row in the range was outside its domain");
  return best;
}

double occam_bound(double ln_k, double ln_n, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0,1]");
  // ln(ln(2/delta) + k ln 2) via log-sum-exp, then halve and shift.
  const double a = std::log(std::log(2.0 / delta));
  const double b = ln_k + std::log(kLn2);
  const double hi = std::max(a, b), lo = std::min(a, b);
  const double log_numerator_sq = hi + std::log1p(std::exp(lo - hi));
  return std::exp(0.5 * log_numerator_sq - 0.5 * (kLn2 + ln_n));
}

double rademacher_bound(int d, double lip, double n, double delta, double loss_sup) {
  if (d < 1 || n < 1.0) throw DomainError("rademacher bound needs d >= 1, N >= 1");
  const double dd = static_cast<double>(d);
  const double rate = std::pow(n, -1.0 / (dd + 3.0));
  const double lip_factor = std::pow(16.0 * std::sqrt(dd) * lip, 1.0 / (1.0 + 3.0 / dd));
  const double t1 = 2.0 * rate * std::pow(8.0 * (dd + 1.0) * (dd + 1.0), 1.0 / (dd + 3.0)) * lip_factor;
  const double t2 = 4.0 * std::sqrt(2.0) * rate * lip_factor /
                    std::pow(8.0 * (dd + 1.0), (1.0 + 1.0 / dd) / (1.0 + 3.0 / dd));
  const double t3 = loss_sup * std::sqrt(8.0 * std::log(2.0 / delta) / n);
  return t1 + t2 + t3;
}

ClassifierLipBound classifier_lip_bound(double ln_k, int d) {
  if (d < 1) throw DomainError("packing dimension must be >= 1");
  ClassifierLipBound out;
  out.plain = 2.0 * std::exp(ln_k / static_cast<double>(d));
  out.over_sqrt_d = out.plain / std::sqrt(static_cast<double>(d));
  return out;
}

double classifier_lip_bound_exact(double min_dist) {
  if (!(min_dist > 0.0)) throw DomainError("minimum distance must be positive");
  return 1.0 / min_dist;  // label range max|y-u| = 1 over {0,1}
}

double stability_bound(double ln_k, int d, double ln_n, double delta) {
  if (d <= 3) throw DomainError("stability bound requires d > 3");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  const double dd = static_cast<double>(d);
  const double lead = 2.0 * std::exp(ln_k / dd);
  const double term1 = 4.0 * std::sqrt(dd) * std::exp(-ln_n / dd);
  const double term2 = std::sqrt(std::log(2.0 / delta)) * std::exp(-0.5 * ln_n);
  return lead * (term1 + term2);
}

ReluDigitalBound relu_digital_bound(int d, int p, double big_m, double K,
                                        double lambda_star, double weight_bound,
                                        double ln_n, double delta) {
  if (d < 1 || p < 0 || !(big_m > 0.0) || !(K > 0.0) || !(lambda_star > 0.0) ||
      !(weight_bound > 0.0))
    throw DomainError("relu bound needs positive parameters");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  ReluDigitalBound out;
  out.log_value = static_cast<double>((d + 1) * (p + 1)) * kLn2 +
                  0.5 * std::log(static_cast<double>(d)) +
                  static_cast<double>(d + 2) * std::log(big_m) + std::log(K) +
                  std::log(std::ceil(lambda_star)) + std::log(weight_bound) +
                  0.5 * std::log(std::log(2.0 / delta)) - 0.5 * ln_n;
  out.value = std::exp(out.log_value);
  return out;
}

}  // namespace fmb::bounds
