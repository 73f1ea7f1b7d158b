#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "cartanq/cartan.hpp"
#include "cartanq/pauli.hpp"

namespace cartanq {

/// v = sum_i gamma^i h_i (1-based powers) over the Cartan subalgebra basis.
/// With transcendental gamma the coefficient ratios are mutually irrational,
/// which makes e^{itv} dense in e^{ih}.
struct VElement {
  double gamma = 0;
  std::vector<PauliString> h_basis;
  std::vector<double> coefficients;

  PauliSum as_sum(int n) const {
    PauliSum s(n);
    for (std::size_t i = 0; i < h_basis.size(); ++i) s.add(h_basis[i], coefficients[i]);
    return s;
  }
};

VElement build_v(const std::vector<PauliString>& h_basis, double gamma);

/// K = prod_i e^{i theta_i k_i} in ascending index order. The factor list
/// is usually the split's k basis but may be any chart of e^{ik} (e.g. the
/// TFXY triangle or pile-of-zigs orderings), including repeated strings.
struct KFactorization {
  std::vector<PauliString> k_factors;
  std::vector<double> angles;
};

struct DecompositionResult {
  KFactorization k_fact;
  std::vector<PauliString> h_basis;
  std::vector<double> h_coefficients;  // K^dag H K projected onto h_basis
  double residual_off_h = 0;           // norm of K^dag H K outside span(h)
  double grad_norm = 0;
  int iterations = 0;
  int restarts = 0;
  double cost_value = 0;
};

struct SolveConfig {
  double gamma = std::numbers::ln2;
  double grad_tol = 1e-6;
  double residual_tol_rel = 1e-6;  // multiplied by ||H|| (normalized norm)
  int max_iters = 4000;
  int max_restarts = 8;
  std::uint64_t seed = 1;
  double init_scale = 0.1;  // angles start uniform in [-init_scale, init_scale]
  /// Refine the converged point with a damped Gauss-Newton solve of
  /// off_h(K^dag H K) = 0, driving the residual to machine precision.
  bool polish = true;
  /// Optional factor-order override; empty means split.k_basis.
  std::vector<PauliString> k_factors;
};

/// f(theta) = <K v K^dag, H> in the normalized inner product, evaluated by
/// conjugating v one Pauli-exponential at a time (stays inside span(m)).
double cost(const std::vector<double>& theta, const CartanSplit& split, const VElement& v,
            const HamiltonianSpec& h);

/// Analytic gradient of f via the two-sided accumulation: the suffix
/// conjugates of v and prefix inverse-conjugates of H.
std::vector<double> gradient(const std::vector<double>& theta, const CartanSplit& split,
                             const VElement& v, const HamiltonianSpec& h);

/// K^dag H K projected onto h_basis; returns (coefficients, residual_off_h).
std::pair<std::vector<double>, double> extract_h(const KFactorization& k_fact,
                                                 const HamiltonianSpec& h, const CartanSplit& split);

/// BFGS (strong Wolfe) minimization of f from a small seeded start, with
/// seeded restarts until the extracted h leaves residual_off_h below
/// tolerance. Requires split.h_basis to be filled.
DecompositionResult solve(const CartanSplit& split, const HamiltonianSpec& h,
                          const SolveConfig& config);

namespace detail {

/// Rotation tables for a fixed factor list over the m-basis coordinates:
/// conjugation by e^{i theta k} is a plane rotation on each anticommuting
/// index pair (a, b) with i k m_a = sign m_b.
class ConjugationEngine {
 public:
  ConjugationEngine(const CartanSplit& split, const std::vector<PauliString>& factors);

  int m_dim() const { return static_cast<int>(split_->m_basis.size()); }
  int num_factors() const { return static_cast<int>(pairs_.size()); }
  const std::vector<int>& h_positions() const { return h_positions_; }

  std::vector<double> embed(const PauliSum& a) const;

  /// vec <- e^{i theta k_j} vec e^{-i theta k_j} in m coordinates.
  void rotate(std::vector<double>& vec, int factor, double theta) const;

  double dot(const std::vector<double>& a, const std::vector<double>& b) const;

  /// 2 * sum_pairs s (x_a y_b - x_b y_a) = <i [k_j, x], y>.
  double bracket_dot(int factor, const std::vector<double>& x, const std::vector<double>& y) const;

 private:
  struct PairOp {
    int a;
    int b;
    double sign;  // i k m_a = sign * m_b
  };
  const CartanSplit* split_;
  std::vector<std::vector<PairOp>> pairs_;
  std::vector<int> h_positions_;
};

}  // namespace detail

}  // namespace cartanq
