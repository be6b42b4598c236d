#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fmb::bounds {

// Inputs shared by the bound formulas. Point counts and sample sizes are
// carried as natural logs so k = 10^15 or N = 10^18 never materialize.
struct BoundInputs {
  double ln_k = 0.0;       // ln(point count of X x Y)
  double ln_n = 0.0;       // ln(sample size)
  double delta = 0.05;     // confidence parameter in (0,1)
  double diameter = 1.0;   // d(X x Y)
  double lip_hypothesis = 1.0;  // L, the hypothesis Lipschitz budget
  double lip_loss = 1.0;        // L_u of the loss
  double delta_noise = 0.0;     // TV noise level in [0,2]
  std::optional<int> euclidean_d;  // ambient dimension when X x Y c R^d

  // L-bar = L_u(loss) * max{1, L}; scales every gap bound.
  double lbar() const;
  void validate() const;  // throws DomainError on out-of-range fields
};

// Concentration rate r_m(N): N^{-1/2} for m = 1,
// (32 + log2 N) N^{-1/2} for m = 2, N^{-1/m} for m >= 3.
double rate_r(int m, double ln_n);

// Dimension constant C~_m: 1/(sqrt(8)-2) for m = 1, sqrt(2)/4 for m = 2,
// 2 ((m/2-1)/(2(1-2^{1-m/2})))^{2/m} (1 + 1/(2(m/2-1))) sqrt(m) for m >= 3.
double dim_const(int m);

// eps_{m,k} = 2 sqrt(2) sqrt(ln k) / sqrt(m).
double eps(int m, double ln_k);

// eps~_{m,k} = sqrt(sqrt(m) + 2 sqrt(2) sqrt(ln k))
//            / sqrt(sqrt(m) - 2 sqrt(2) sqrt(ln k)).
// Throws DomainError when m <= 8 ln k (denominator not positive).
double eps_tilde(int m, double ln_k);

// Worst-case distortion of the best m-dimensional representation. Rows
// follow the general table (m in {1,2}; 3 <= m <= ceil(8 ln k);
// ceil(8 ln k) < m < 2^k; m >= 2^k), or the Euclidean table when an
// ambient dimension is given (then m >= d yields exactly 1).
// Propagates DomainError from eps_tilde on rows that need it.
double worstcase_tau(int m, double ln_k, std::optional<int> euclidean_d = std::nullopt);

// Bi-Lipschitz constants of the explicit low-dimensional route through
// R^k: lower a_{m,k} = sqrt(1 - eps_{k,k}) / (144 k^{2/m} sqrt(k/m)
// floor(log2 k + 1)) and upper b_k = 5 sqrt(ln k / k) sqrt(1 + eps_{k,k}).
// Exposed for the rate tables; the map itself is not constructed. Needs
// k > 8 ln k for eps_{k,k} < 1 (DomainError otherwise). Note the floor
// here is the proof's log2 form, not the table's floor(2 ln k + 1).
struct LowDimRouteConstants {
  double lower = 0.0;  // a_{m,k}
  double upper = 0.0;  // b_k
};
LowDimRouteConstants low_dim_route_constants(int m, double k);

// Which rate-table regime applies; for reports.
std::string tau_regime(int m, double ln_k, std::optional<int> euclidean_d = std::nullopt);

struct ConcentrationBounds {
  double c1 = 0.0;  // bound on E[W(P, P^N)]
  double c2 = 0.0;  // deviation offset in the tail event
  // P(|W - E W| > c2 + eps) <= tail(eps).
  std::function<double(double)> tail;
};

// C1 = C~_m tau d r_m(N), C2 = C~_m (tau - 1) d r_m(N),
// tail(eps) = 2 exp(-2 N eps^2 / (tau^2 d^2)).
ConcentrationBounds concentration_bounds(const BoundInputs& in, int m, double tau);

// Worst-case generalization gap bound:
// Lbar d (C~_m (2 tau - 1) r_m(N) + tau sqrt(ln(2/delta)) / sqrt(2N)).
double generalization_bound(const BoundInputs& in, int m, double tau);

// Estimation adds the noise term Lbar d Delta.
double estimation_bound(const BoundInputs& in, int m, double tau);

struct RateTableRow {
  int m = 0;
  double r_m_at_n = 0.0;
  double c_tilde_m = 0.0;
  double tau_worstcase = 0.0;
  double bound = 0.0;
  std::string regime;
  bool skipped = false;  // row outside eps~ domain
};

struct BestBound {
  int m_star = 0;
  double value = 0.0;
  std::vector<RateTableRow> rows;
};

// Evaluates the generalization bound with the worst-case tau at every m in
// the range and returns the minimizer (ties toward smaller m). Rows whose
// tau formula is outside its domain are kept in the table, flagged skipped.
BestBound best_bound_over_m(const BoundInputs& in, const std::vector<int>& m_range);

// Occam's razor bound sqrt(ln(2/delta) + k ln 2) / sqrt(2N); the k ln 2
// term is accumulated in log space so k up to 10^18 is fine.
double occam_bound(double ln_k, double ln_n, double delta);

// Rademacher-complexity comparison bound for L-Lipschitz [0,1]-valued
// hypotheses on [0,1]^d: two O(N^{-1/(d+3)}) terms with explicit constants
// plus the ||loss||_inf sqrt(8 ln(2/delta) / N) term.
double rademacher_bound(int d, double lip, double n, double delta, double loss_sup);

struct ClassifierLipBound {
  double over_sqrt_d = 0.0;  // 2 k^{1/d} / sqrt(d)
  double plain = 0.0;        // 2 k^{1/d}
};

// Lipschitz estimate for binary classifiers on a k-point packing of
// [0,1]^d. With an exact minimum distance the bound is 1/min_dist;
// otherwise both analytic forms are returned.
ClassifierLipBound classifier_lip_bound(double ln_k, int d);
double classifier_lip_bound_exact(double min_dist);

// Precision-independent bound 2 k^{1/d} (4 sqrt(d)/N^{1/d}
// + sqrt(ln(2/delta))/sqrt(N)); requires d > 3 (uses C~_d <= 4 sqrt(d)).
double stability_bound(double ln_k, int d, double ln_n, double delta);

// Generalization bound for ReLU networks discretized onto machine grids,
// 2^{(d+1)(p+1)} sqrt(d) M^{d+2} K ceil(Lambda*) B sqrt(ln(2/delta)) / sqrt(N).
// The guarantee holds up to an unspecified constant multiple; the value
// returned fixes that constant to 1 and flags the caveat.
struct ReluDigitalBound {
  double value = 0.0;
  double log_value = 0.0;  // natural log, safe when value overflows
  bool constant_caveat = true;
};

ReluDigitalBound relu_digital_bound(int d, int p, double big_m, double K,
                                        double lambda_star, double weight_bound,
                                        double ln_n, double delta);

}  // namespace fmb::bounds
