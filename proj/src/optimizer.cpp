#include "cartanq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "cartanq/rng.hpp"

namespace cartanq {

namespace detail {

ConjugationEngine::ConjugationEngine(const CartanSplit& split,
                                     const std::vector<PauliString>& factors)
    : split_(&split) {
  pairs_.resize(factors.size());
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const PauliString& k = factors[j];
    for (std::size_t a = 0; a < split.m_basis.size(); ++a) {
      const PauliString& ma = split.m_basis[a];
      if (k.commutes_with(ma)) continue;
      auto [ph, r] = multiply(k, ma);
      const auto it = split.m_index.find(r);
      if (it == split.m_index.end())
        throw std::runtime_error("ConjugationEngine: conjugation leaves span(m) at " + k.label() +
                                 " * " + ma.label() + " -> " + r.label() + " (broken split)");
      const int b = it->second;
      if (static_cast<int>(a) < b) {
        const auto phase = (ph * Phase(1)).value();  // i * i^ph, must be +/-1
        if (phase.imag() != 0.0)
          throw std::runtime_error("ConjugationEngine: non-real pairing phase (broken split)");
        pairs_[j].push_back({static_cast<int>(a), b, phase.real()});
      }
    }
  }
  for (const auto& hs : split.h_basis) {
    const auto it = split.m_index.find(hs);
    if (it == split.m_index.end())
      throw std::runtime_error("ConjugationEngine: h basis element outside m");
    h_positions_.push_back(it->second);
  }
}

std::vector<double> ConjugationEngine::embed(const PauliSum& a) const {
  std::vector<double> vec(split_->m_basis.size(), 0.0);
  for (const auto& [p, c] : a.terms()) {
    const auto it = split_->m_index.find(p);
    if (it == split_->m_index.end())
      throw std::runtime_error("ConjugationEngine: element has support outside m: " + p.label());
    vec[static_cast<std::size_t>(it->second)] = c.real();
  }
  return vec;
}

void ConjugationEngine::rotate(std::vector<double>& vec, int factor, double theta) const {
  const double c = std::cos(2 * theta);
  const double s = std::sin(2 * theta);
  for (const auto& op : pairs_[static_cast<std::size_t>(factor)]) {
    const double va = vec[static_cast<std::size_t>(op.a)];
    const double vb = vec[static_cast<std::size_t>(op.b)];
    vec[static_cast<std::size_t>(op.a)] = c * va - s * op.sign * vb;
    vec[static_cast<std::size_t>(op.b)] = c * vb + s * op.sign * va;
  }
}

double ConjugationEngine::dot(const std::vector<double>& a, const std::vector<double>& b) const {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double ConjugationEngine::bracket_dot(int factor, const std::vector<double>& x,
                                      const std::vector<double>& y) const {
  double g = 0;
  for (const auto& op : pairs_[static_cast<std::size_t>(factor)]) {
    g += 2.0 * op.sign *
         (x[static_cast<std::size_t>(op.a)] * y[static_cast<std::size_t>(op.b)] -
          x[static_cast<std::size_t>(op.b)] * y[static_cast<std::size_t>(op.a)]);
  }
  return g;
}

}  // namespace detail

namespace {

using detail::ConjugationEngine;

std::vector<double> embed_v(const ConjugationEngine& engine, const VElement& v) {
  std::vector<double> vec(static_cast<std::size_t>(engine.m_dim()), 0.0);
  const auto& hp = engine.h_positions();
  for (std::size_t i = 0; i < hp.size(); ++i)
    vec[static_cast<std::size_t>(hp[i])] = v.coefficients[i];
  return vec;
}

// K v K^dag: factors applied innermost (last index) first.
std::vector<double> conjugate_forward(const ConjugationEngine& engine,
                                      const std::vector<double>& theta, std::vector<double> vec) {
  for (int j = engine.num_factors() - 1; j >= 0; --j)
    engine.rotate(vec, j, theta[static_cast<std::size_t>(j)]);
  return vec;
}

// K^dag x K: inverse factors applied from index 0 upward.
std::vector<double> conjugate_backward(const ConjugationEngine& engine,
                                       const std::vector<double>& theta, std::vector<double> vec) {
  for (int j = 0; j < engine.num_factors(); ++j)
    engine.rotate(vec, j, -theta[static_cast<std::size_t>(j)]);
  return vec;
}

double cost_impl(const ConjugationEngine& engine, const std::vector<double>& theta,
                 const std::vector<double>& v_vec, const std::vector<double>& h_vec) {
  return engine.dot(conjugate_forward(engine, theta, v_vec), h_vec);
}

std::vector<double> gradient_impl(const ConjugationEngine& engine, const std::vector<double>& theta,
                                  const std::vector<double>& v_vec,
                                  const std::vector<double>& h_vec) {
  const int nf = engine.num_factors();
  std::vector<double> grad(static_cast<std::size_t>(nf), 0.0);
  if (nf == 0) return grad;

  // m1[j] = (E_j ... E_{N-1}) v (...)^dag, built backward and stored.
  std::vector<std::vector<double>> m1(static_cast<std::size_t>(nf));
  std::vector<double> acc = v_vec;
  for (int j = nf - 1; j >= 0; --j) {
    engine.rotate(acc, j, theta[static_cast<std::size_t>(j)]);
    m1[static_cast<std::size_t>(j)] = acc;
  }
  // m2 = (E_0 ... E_{j-1})^dag H (E_0 ... E_{j-1}), advanced in place.
  std::vector<double> m2 = h_vec;
  for (int j = 0; j < nf; ++j) {
    grad[static_cast<std::size_t>(j)] = engine.bracket_dot(j, m1[static_cast<std::size_t>(j)], m2);
    engine.rotate(m2, j, -theta[static_cast<std::size_t>(j)]);
  }
  return grad;
}

std::pair<std::vector<double>, double> extract_impl(const ConjugationEngine& engine,
                                                    const std::vector<double>& theta,
                                                    const std::vector<double>& h_vec) {
  const std::vector<double> rotated = conjugate_backward(engine, theta, h_vec);
  std::vector<char> on_h(rotated.size(), 0);
  for (int pos : engine.h_positions()) on_h[static_cast<std::size_t>(pos)] = 1;
  std::vector<double> coeffs;
  coeffs.reserve(engine.h_positions().size());
  for (int pos : engine.h_positions()) coeffs.push_back(rotated[static_cast<std::size_t>(pos)]);
  double off = 0;
  for (std::size_t i = 0; i < rotated.size(); ++i)
    if (!on_h[i]) off += rotated[i] * rotated[i];
  return {coeffs, std::sqrt(off)};
}

std::vector<double> off_h_vector(const ConjugationEngine& engine, const std::vector<double>& theta,
                                 const std::vector<double>& h_vec) {
  const std::vector<double> rotated = conjugate_backward(engine, theta, h_vec);
  std::vector<char> on_h(rotated.size(), 0);
  for (int pos : engine.h_positions()) on_h[static_cast<std::size_t>(pos)] = 1;
  std::vector<double> out;
  out.reserve(rotated.size() - engine.h_positions().size());
  for (std::size_t i = 0; i < rotated.size(); ++i)
    if (!on_h[i]) out.push_back(rotated[i]);
  return out;
}

struct BfgsOutcome {
  Eigen::VectorXd x;
  double f = 0;
  double grad_norm = 0;
  int iterations = 0;
  bool converged = false;
};

// BFGS with a strong-Wolfe line search (c1 = 1e-4, c2 = 0.9).
template <typename F, typename G>
BfgsOutcome bfgs_minimize(F&& fval, G&& gval, Eigen::VectorXd x0, double grad_tol, int max_iters) {
  const double c1 = 1e-4, c2 = 0.9;
  const int dim = static_cast<int>(x0.size());

  BfgsOutcome out;
  Eigen::VectorXd x = std::move(x0);
  double f = fval(x);
  Eigen::VectorXd g = gval(x);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(dim, dim);

  auto line_search = [&](const Eigen::VectorXd& p, double f0, double dphi0, double& alpha_out,
                         double& f_out, Eigen::VectorXd& g_out) -> bool {
    auto phi = [&](double a) { return fval(x + a * p); };
    auto dphi = [&](double a, Eigen::VectorXd& gbuf) {
      gbuf = gval(x + a * p);
      return gbuf.dot(p);
    };
    Eigen::VectorXd gbuf(dim);
    double alo = 0, ahi = 0;
    double f_lo = f0, dphi_lo = dphi0;
    double a_prev = 0, f_prev = f0;
    double a = 1.0;
    bool bracketed = false;
    for (int it = 0; it < 30 && !bracketed; ++it) {
      const double fa = phi(a);
      if (fa > f0 + c1 * a * dphi0 || (it > 0 && fa >= f_prev)) {
        alo = a_prev;
        ahi = a;
        bracketed = true;
        break;
      }
      const double da = dphi(a, gbuf);
      if (std::abs(da) <= -c2 * dphi0) {
        alpha_out = a;
        f_out = fa;
        g_out = gbuf;
        return true;
      }
      if (da >= 0) {
        alo = a;
        ahi = a_prev;
        f_lo = fa;
        dphi_lo = da;
        bracketed = true;
        break;
      }
      a_prev = a;
      f_prev = fa;
      a *= 2.0;
      if (a > 1e6) return false;
    }
    if (!bracketed) return false;
    (void)f_lo;
    (void)dphi_lo;
    for (int it = 0; it < 60; ++it) {
      const double aj = 0.5 * (alo + ahi);
      const double fj = phi(aj);
      const double f_alo = phi(alo);
      if (fj > f0 + c1 * aj * dphi0 || fj >= f_alo) {
        ahi = aj;
      } else {
        const double dj = dphi(aj, gbuf);
        if (std::abs(dj) <= -c2 * dphi0) {
          alpha_out = aj;
          f_out = fj;
          g_out = gbuf;
          return true;
        }
        if (dj * (ahi - alo) >= 0) ahi = alo;
        alo = aj;
      }
      if (std::abs(ahi - alo) < 1e-16 * (1 + std::abs(alo))) break;
    }
    return false;
  };

  bool reset_used = false;
  int it = 0;
  for (; it < max_iters; ++it) {
    if (!std::isfinite(f)) throw std::runtime_error("solve: non-finite cost");
    if (g.norm() <= grad_tol) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd p = -(hinv * g);
    double dphi0 = g.dot(p);
    if (dphi0 >= 0) {
      hinv.setIdentity();
      p = -g;
      dphi0 = g.dot(p);
    }
    double alpha = 0, f_new = 0;
    Eigen::VectorXd g_new(dim);
    if (!line_search(p, f, dphi0, alpha, f_new, g_new)) {
      if (reset_used) break;  // stalled; let the caller decide via residual
      reset_used = true;
      hinv.setIdentity();
      continue;
    }
    const Eigen::VectorXd s = alpha * p;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    x += s;
    f = f_new;
    g = g_new;
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
      hinv = (eye - rho * s * y.transpose()) * hinv * (eye - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
  }
  out.x = x;
  out.f = f;
  out.grad_norm = g.norm();
  out.iterations = it;
  return out;
}

// Damped Gauss-Newton refinement of off_h(K^dag H K) = 0. The KHK theorem
// guarantees a root near any extremum of f, so a few steps reach machine
// precision from the BFGS point.
void polish_angles(const ConjugationEngine& engine, std::vector<double>& theta,
                   const std::vector<double>& h_vec, double target) {
  const int nf = engine.num_factors();
  auto residual = [&](const std::vector<double>& th) {
    return off_h_vector(engine, th, h_vec);
  };
  std::vector<double> r = residual(theta);
  const int rdim = static_cast<int>(r.size());
  if (rdim == 0 || nf == 0) return;
  auto norm_of = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  double rnorm = norm_of(r);
  double lambda = 1e-12;
  const double fd_step = 1e-6;
  for (int iter = 0; iter < 20 && rnorm > target; ++iter) {
    Eigen::MatrixXd jac(rdim, nf);
    std::vector<double> th = theta;
    for (int j = 0; j < nf; ++j) {
      const double save = th[static_cast<std::size_t>(j)];
      th[static_cast<std::size_t>(j)] = save + fd_step;
      const auto rp = residual(th);
      th[static_cast<std::size_t>(j)] = save - fd_step;
      const auto rm = residual(th);
      th[static_cast<std::size_t>(j)] = save;
      for (int i = 0; i < rdim; ++i) jac(i, j) = (rp[static_cast<std::size_t>(i)] -
                                                  rm[static_cast<std::size_t>(i)]) /
                                                 (2 * fd_step);
    }
    Eigen::VectorXd rvec(rdim);
    for (int i = 0; i < rdim; ++i) rvec(i) = r[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * rvec;
    bool improved = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda;
      const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
      std::vector<double> trial = theta;
      for (int j = 0; j < nf; ++j) trial[static_cast<std::size_t>(j)] += delta(j);
      const auto r_trial = residual(trial);
      const double trial_norm = norm_of(r_trial);
      if (trial_norm < rnorm) {
        theta = std::move(trial);
        r = r_trial;
        rnorm = trial_norm;
        lambda = std::max(lambda * 0.25, 1e-14);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
}

}  // namespace

VElement build_v(const std::vector<PauliString>& h_basis, double gamma) {
  if (h_basis.empty()) throw std::invalid_argument("build_v: empty Cartan subalgebra basis");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("build_v: gamma must be in (0,1)");
  VElement v;
  v.gamma = gamma;
  v.h_basis = h_basis;
  double w = 1.0;
  for (std::size_t i = 0; i < h_basis.size(); ++i) {
    w *= gamma;
    v.coefficients.push_back(w);
  }
  if (v.coefficients.back() < 1e-12)
    std::cerr << "warning: build_v: gamma^" << h_basis.size() << " = " << v.coefficients.back()
              << " underflows the 1e-12 guard; distinct h directions may become numerically "
                 "degenerate\n";
  return v;
}

double cost(const std::vector<double>& theta, const CartanSplit& split, const VElement& v,
            const HamiltonianSpec& h) {
  if (theta.size() != split.k_basis.size())
    throw std::invalid_argument("cost: angle count does not match |k|");
  ConjugationEngine engine(split, split.k_basis);
  return cost_impl(engine, theta, embed_v(engine, v), engine.embed(h));
}

std::vector<double> gradient(const std::vector<double>& theta, const CartanSplit& split,
                             const VElement& v, const HamiltonianSpec& h) {
  if (theta.size() != split.k_basis.size())
    throw std::invalid_argument("gradient: angle count does not match |k|");
  ConjugationEngine engine(split, split.k_basis);
  return gradient_impl(engine, theta, embed_v(engine, v), engine.embed(h));
}

std::pair<std::vector<double>, double> extract_h(const KFactorization& k_fact,
                                                 const HamiltonianSpec& h,
                                                 const CartanSplit& split) {
  ConjugationEngine engine(split, k_fact.k_factors);
  return extract_impl(engine, k_fact.angles, engine.embed(h));
}

DecompositionResult solve(const CartanSplit& split, const HamiltonianSpec& h,
                          const SolveConfig& config) {
  if (split.h_basis.empty())
    throw std::invalid_argument("solve: split has no Cartan subalgebra (run cartan_subalgebra)");

  const std::vector<PauliString>& factors =
      config.k_factors.empty() ? split.k_basis : config.k_factors;
  ConjugationEngine engine(split, factors);
  const std::vector<double> h_vec = engine.embed(h);
  const double h_norm = std::sqrt(engine.dot(h_vec, h_vec));
  const double residual_tol = config.residual_tol_rel * h_norm;
  const int nf = engine.num_factors();

  DecompositionResult result;
  result.k_fact.k_factors = factors;
  result.h_basis = split.h_basis;

  // H already inside span(h): the identity K is an exact decomposition.
  {
    bool inside = true;
    std::unordered_map<PauliString, int, PauliStringHash> hset;
    for (std::size_t i = 0; i < split.h_basis.size(); ++i)
      hset.emplace(split.h_basis[i], static_cast<int>(i));
    for (const auto& [p, c] : h.terms())
      if (hset.count(p) == 0) {
        inside = false;
        break;
      }
    if (inside) {
      result.k_fact.angles.assign(static_cast<std::size_t>(nf), 0.0);
      result.h_coefficients.assign(split.h_basis.size(), 0.0);
      for (const auto& [p, c] : h.terms())
        result.h_coefficients[static_cast<std::size_t>(hset.at(p))] = c.real();
      return result;
    }
  }

  const VElement v = build_v(split.h_basis, config.gamma);
  const std::vector<double> v_vec = embed_v(engine, v);

  auto fval = [&](const Eigen::VectorXd& x) {
    std::vector<double> th(x.data(), x.data() + x.size());
    return cost_impl(engine, th, v_vec, h_vec);
  };
  auto gval = [&](const Eigen::VectorXd& x) {
    std::vector<double> th(x.data(), x.data() + x.size());
    const auto g = gradient_impl(engine, th, v_vec, h_vec);
    return Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size())).eval();
  };

  double best_residual = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  for (int restart = 0; restart <= config.max_restarts; ++restart) {
    Xoshiro256pp rng(config.seed + 0x9e37u * static_cast<std::uint64_t>(restart));
    const double scale = config.init_scale * (1.0 + 0.5 * restart);
    Eigen::VectorXd x0(nf);
    for (int j = 0; j < nf; ++j) x0(j) = rng.uniform(-scale, scale);

    BfgsOutcome run = bfgs_minimize(fval, gval, std::move(x0), config.grad_tol, config.max_iters);
    total_iterations += run.iterations;

    std::vector<double> theta(run.x.data(), run.x.data() + run.x.size());
    if (config.polish) polish_angles(engine, theta, h_vec, 1e-14 * std::max(1.0, h_norm));

    auto [coeffs, residual] = extract_impl(engine, theta, h_vec);
    if (residual < best_residual) best_residual = residual;

    if (residual <= residual_tol) {
      result.k_fact.angles = std::move(theta);
      result.h_coefficients = std::move(coeffs);
      result.residual_off_h = residual;
      result.grad_norm = gval(Eigen::Map<const Eigen::VectorXd>(
                                  result.k_fact.angles.data(),
                                  static_cast<Eigen::Index>(result.k_fact.angles.size()))
                                  .eval())
                             .norm();
      result.iterations = total_iterations;
      result.restarts = restart;
      result.cost_value = fval(Eigen::Map<const Eigen::VectorXd>(
                                   result.k_fact.angles.data(),
                                   static_cast<Eigen::Index>(result.k_fact.angles.size()))
                                   .eval());
      return result;
    }
  }

  std::ostringstream msg;
  msg << "solve: restart budget exhausted (" << config.max_restarts + 1
      << " attempts); best residual_off_h = " << best_residual << " vs tolerance " << residual_tol;
  throw std::runtime_error(msg.str());
}

}  // namespace cartanq
