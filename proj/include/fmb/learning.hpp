#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fmb/metric.hpp"
#include "fmb/rng.hpp"
#include "fmb/transport.hpp"

namespace fmb {

// A map between finite spaces, stored as a point-index table, with its
// exact upper Lipschitz constant cached.
struct Hypothesis {
  std::vector<std::size_t> table;  // X index -> Y index
  double lip_upper = 0.0;
};

// Exact max over pairs of d_Y(f(x), f(x~)) / d_X(x, x~).
double lipschitz_upper(const std::vector<std::size_t>& table, const FiniteMetricSpace& x,
                       const FiniteMetricSpace& y);

Hypothesis make_hypothesis(std::vector<std::size_t> table, const FiniteMetricSpace& x,
                           const FiniteMetricSpace& y);

// Discretization f-bar = Pi o f restricted to the input grid: evaluates f
// on every input grid point and rounds the value onto the output grid.
// When f is L-Lipschitz and the output grid covers f's range at radius
// sep/2, the result is (L + sep_out/sep_in)-Lipschitz. Throws RangeEscape
// when a value leaves the output grid hull [-M, M].
Hypothesis discretize_function(const std::function<double(const double*)>& f,
                               const DyadicGrid& grid_in, const DyadicGrid& grid_out);

// ReLU multilayer perceptron with entrywise weight/bias bound. Layers
// 0..depth-1 apply ReLU(A x + b); the final layer is linear.
struct ReluLayer {
  std::vector<std::vector<double>> weights;  // rows x cols
  std::vector<double> bias;
};

struct ReLUMLP {
  std::vector<ReluLayer> layers;  // depth + 1 entries, last one linear
  int width = 0;                  // W: max layer width
  int depth = 0;                  // number of ReLU layers
  double weight_bound = 0.0;      // B: entrywise bound, must hold

  std::size_t input_dim() const { return layers.front().weights.front().size(); }
};

void validate_mlp(const ReLUMLP& mlp);  // shapes, entry bounds
double relu_mlp_eval(const ReLUMLP& mlp, const std::vector<double>& x);

// The worst-case estimate B * depth * W^2 for the class containing `mlp`.
double relu_mlp_lip_bound(const ReLUMLP& mlp);

// Instantiated width-6 network class for the piecewise-linear targets:
// raw Lipschitz estimate 72 K (ceil(Lambda*) + 2) B, plus 1 after
// discretization onto matching grids.
double riesz_network_lip_bound(double K, double lambda_star, double weight_bound);
double riesz_network_lip_bound_discretized(double K, double lambda_star, double weight_bound);

// Depth needed to realize a K-frequency target at general width:
// 2 (ceil(Lambda*) + 2) floor(K / floor((W - 2) / 4)); collapses to
// 2 K (ceil(Lambda*) + 2) at the width-6 instantiation used above.
double riesz_network_depth(double K, double lambda_star, int width);

// Random bounded MLP with given architecture; entries uniform in [-B, B].
ReLUMLP random_mlp(int input_dim, int width, int depth, double weight_bound, Rng& rng);

// Piecewise-linear "cosine"/"sine" Riesz basis on [0,1], extended to
// frequency j by C_j(t) = C(jt - floor(jt)). Both are 4j-Lipschitz.
enum class RieszKind { cosine, sine };
double riesz_eval(RieszKind kind, int j, double t);

// Target f(x) = sum_i f_i((Ux)_i) with f_i a bounded combination of the
// basis functions over a shared dictionary of frequencies.
struct RieszTarget {
  std::vector<int> dictionary;             // Lambda, K distinct frequencies
  std::vector<std::vector<double>> a;      // [d][K] cosine coefficients
  std::vector<std::vector<double>> b;      // [d][K] sine coefficients
  std::vector<double> rotation;            // row-major d x d orthogonal U
  int d = 1;
  double coeff_bound = 1.0;                // M: |a|, |b| <= M
  int lambda_star() const;                 // max Lambda
};

double riesz_target_eval(const RieszTarget& target, const std::vector<double>& x);

// Random target: seeded dictionary and coefficients, U from QR of a
// Gaussian matrix (orthogonality checked to 1e-10).
RieszTarget random_riesz_target(int d, int K, int max_frequency, double coeff_bound, Rng& rng);

// Lipschitz loss over a finite label space, stored as a k_Y x k_Y table
// with the exact upper Lipschitz constant w.r.t. the product metric.
struct LossFn {
  const FiniteMetricSpace* y = nullptr;
  std::vector<double> table;  // row-major
  double lip_upper = 0.0;
  double operator()(std::size_t yi, std::size_t yj) const { return table[yi * y->size() + yj]; }
};

LossFn absolute_loss(const FiniteMetricSpace& y);   // loss(y,u) = d_Y(y,u)
LossFn zero_one_loss(const FiniteMetricSpace& y);   // loss(y,u) = [y != u]

// Exact worst-case generalization gap over the enumerated class
// {f in Y^X : L_u(f) <= L}: sup |R(f) - R^(f)| with the true risk from P
// and the empirical risk from the batch. Feasible only for k_X <= 6,
// k_Y <= 4 (throws ClassTooLarge beyond).
double sup_gap_bruteforce(const FiniteMetricSpace& x, const FiniteMetricSpace& y, double lip_budget,
                          const DiscreteMeasure& p_xy, const SampleBatch& batch,
                          const LossFn& loss);

}  // namespace fmb
