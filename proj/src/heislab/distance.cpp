// Copyright 2026 The heislab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heislab/distance.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heislab/errors.hpp"

namespace heislab {
namespace {

// Interior nodes 1..K-1 packed into one vector; node 0 is the origin and
// node K the horizontal target.
class PathProblem {
 public:
  PathProblem(const SymplecticForm& form, Vector target_w, double target_c,
              int K)
      : form_(form),
        dim_(form.dimension()),
        K_(K),
        target_w_(std::move(target_w)),
        target_c_(target_c),
        omega_t_(form.matrix().transpose()) {}

  Eigen::Index size() const { return static_cast<Eigen::Index>(dim_) * (K_ - 1); }

  Vector node(const Vector& x, int k) const {
    if (k == 0) return Vector::Zero(dim_);
    if (k == K_) return target_w_;
    return x.segment(static_cast<Eigen::Index>(k - 1) * dim_, dim_);
  }

  HorizontalPath to_path(const Vector& x) const {
    HorizontalPath p{Matrix(dim_, K_ + 1)};
    for (int k = 0; k <= K_; ++k) p.nodes.col(k) = node(x, k);
    return p;
  }

  Vector from_path(const HorizontalPath& p) const {
    Vector x(size());
    for (int k = 1; k < K_; ++k) {
      x.segment(static_cast<Eigen::Index>(k - 1) * dim_, dim_) = p.nodes.col(k);
    }
    return x;
  }

  // Vertical residual c(1) - c_target.
  double constraint(const Vector& x) const {
    double area = 0.0;
    Vector prev = node(x, 0);
    for (int k = 1; k <= K_; ++k) {
      Vector cur = node(x, k);
      area += form_(prev, cur);
      prev = std::move(cur);
    }
    return 0.5 * area - target_c_;
  }

  Vector constraint_gradient(const Vector& x) const {
    Vector g(size());
    for (int k = 1; k < K_; ++k) {
      g.segment(static_cast<Eigen::Index>(k - 1) * dim_, dim_) =
          0.5 * (omega_t_ * node(x, k - 1) + form_.matrix() * node(x, k + 1));
    }
    return g;
  }

  // Discrete energy K sum |d sigma_k|^2; equals length^2 at constant speed.
  double energy(const Vector& x, Vector* grad) const {
    double e = 0.0;
    if (grad) grad->setZero(size());
    for (int k = 1; k <= K_; ++k) {
      const Vector d = node(x, k) - node(x, k - 1);
      e += d.squaredNorm();
      if (grad) {
        if (k < K_) grad->segment(static_cast<Eigen::Index>(k - 1) * dim_, dim_) += 2.0 * K_ * d;
        if (k > 1) grad->segment(static_cast<Eigen::Index>(k - 2) * dim_, dim_) -= 2.0 * K_ * d;
      }
    }
    return K_ * e;
  }

  double length(const Vector& x) const {
    double len = 0.0;
    for (int k = 1; k <= K_; ++k) len += (node(x, k) - node(x, k - 1)).norm();
    return len;
  }

  double target_c() const { return target_c_; }
  int dim() const { return dim_; }
  int K() const { return K_; }
  const Vector& target_w() const { return target_w_; }

 private:
  const SymplecticForm& form_;
  int dim_;
  int K_;
  Vector target_w_;
  double target_c_;
  Matrix omega_t_;
};

// Limited-memory BFGS with Armijo backtracking.
template <typename Objective>
void lbfgs_minimize(Objective&& fn, Vector& x, int max_iter) {
  constexpr int kHistory = 12;
  std::deque<Vector> s_hist, y_hist;
  std::deque<double> rho_hist;
  Vector g;
  double f = fn(x, g);
  const double g0 = std::max(1.0, g.norm());
  for (int it = 0; it < max_iter; ++it) {
    if (g.norm() <= 1e-11 * g0) break;
    Vector q = g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      q /= std::max(1.0, g.norm());
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += s_hist[i] * (alpha[i] - beta);
    }
    Vector dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      dir = -g;
      slope = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    double step = 1.0;
    Vector x_new, g_new;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * dir;
      f_new = fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    Vector s = x_new - x;
    Vector y = g_new - g;
    const double sy = s.dot(y);
    x = std::move(x_new);
    const double f_prev = f;
    f = f_new;
    g = std::move(g_new);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    if (std::fabs(f_prev - f) <= 1e-15 * std::max(1.0, std::fabs(f))) break;
  }
}

struct Candidate {
  Vector x;
  double length = 0.0;
  double residual = 0.0;
};

Candidate solve_from(const PathProblem& prob, Vector x,
                     const DistanceOptions& opt) {
  const double tol = opt.feasibility_tol * (1.0 + std::fabs(prob.target_c()));
  double lambda = 0.0;
  double rho = 10.0;
  double prev_h = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    auto augmented = [&](const Vector& y, Vector& grad) {
      const double e = prob.energy(y, &grad);
      const double h = prob.constraint(y);
      grad += (lambda + rho * h) * prob.constraint_gradient(y);
      return e + lambda * h + 0.5 * rho * h * h;
    };
    lbfgs_minimize(augmented, x, opt.max_inner);
    const double h = prob.constraint(x);
    if (std::fabs(h) <= 0.01 * tol) break;
    lambda += rho * h;
    if (std::fabs(h) > 0.25 * std::fabs(prev_h)) rho *= 10.0;
    prev_h = h;
  }
  // Newton steps along the constraint gradient to land on c(1) = c_target.
  for (int it = 0; it < 50; ++it) {
    const double h = prob.constraint(x);
    if (std::fabs(h) <= 1e-13 * (1.0 + std::fabs(prob.target_c()))) break;
    const Vector gh = prob.constraint_gradient(x);
    const double nrm = gh.squaredNorm();
    if (!(nrm > 0.0)) break;
    x -= (h / nrm) * gh;
  }
  return {x, prob.length(x), std::fabs(prob.constraint(x))};
}

HorizontalPath upsample(const HorizontalPath& coarse) {
  const int K = coarse.segments();
  HorizontalPath fine{Matrix(coarse.nodes.rows(), 2 * K + 1)};
  for (int k = 0; k <= K; ++k) {
    fine.nodes.col(2 * k) = coarse.nodes.col(k);
    if (k < K) {
      fine.nodes.col(2 * k + 1) =
          0.5 * (coarse.nodes.col(k) + coarse.nodes.col(k + 1));
    }
  }
  return fine;
}

void require_target(const SymplecticForm& form, const GroupElement& target) {
  if (target.w.size() != form.dimension()) {
    throw DimensionError("distance target dimension does not match the form");
  }
  if (!target.w.allFinite() || !std::isfinite(target.c)) {
    throw std::invalid_argument("distance target must be finite");
  }
}

ReducedDistanceResult fiber_minimum(const SymplecticForm& form,
                                    const Vector& w, double c_rep, int K,
                                    int k_window, const DistanceOptions& opt) {
  if (k_window < 1) throw std::invalid_argument("k_window must be >= 1");
  ReducedDistanceResult best;
  bool have = false;
  for (int k = -k_window; k <= k_window; ++k) {
    const GroupElement lift_target{w, c_rep + kTwoPi * k};
    DistanceResult r = cc_distance(form, lift_target, K, opt);
    // Prefer converged candidates; among those, the shortest.
    const bool better =
        !have || (r.converged && !best.converged) ||
        (r.converged == best.converged && r.estimate < best.estimate);
    if (better) {
      best.estimate = r.estimate;
      best.winning_k = k;
      best.residual = r.residual;
      best.converged = r.converged;
      best.best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace

Lift lift(const SymplecticForm& form, const HorizontalPath& path) {
  const int K = path.segments();
  if (K < 1) throw std::invalid_argument("a path needs at least one segment");
  if (path.nodes.rows() != form.dimension()) {
    throw DimensionError("path dimension does not match the form");
  }
  double area = 0.0;
  double len = 0.0;
  for (int k = 1; k <= K; ++k) {
    const Vector d = path.nodes.col(k) - path.nodes.col(k - 1);
    area += form(path.nodes.col(k - 1), d);
    len += d.norm();
  }
  return {{path.nodes.col(K), 0.5 * area}, len};
}

DistanceResult cc_distance(const SymplecticForm& form,
                           const GroupElement& target, int K,
                           const DistanceOptions& opt) {
  require_target(form, target);
  if (K < 8) throw std::invalid_argument("cc_distance needs K >= 8");
  const PathProblem prob(form, target.w, target.c, K);
  const double tol = opt.feasibility_tol * (1.0 + std::fabs(target.c));
  const int dim = form.dimension();

  std::vector<Candidate> candidates;
  auto add_start = [&](const Vector& x0) {
    candidates.push_back(solve_from(prob, x0, opt));
  };

  Vector straight(prob.size());
  for (int k = 1; k < K; ++k) {
    straight.segment(static_cast<Eigen::Index>(k - 1) * dim, dim) =
        (static_cast<double>(k) / K) * target.w;
  }
  add_start(straight);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  for (int b = 0; b < opt.bulge_starts; ++b) {
    Vector u(dim);
    for (int i = 0; i < dim; ++i) u[i] = normal(rng);
    u.normalize();
    Vector v = form.matrix().transpose() * u;
    v.normalize();
    const double s = form(u, v);
    // A loop through the origin in span{u, v} carries vertical displacement
    // pi r^2 s; size it to the target and orient it by the sign of c.
    double r = std::sqrt(std::fabs(target.c) / (std::numbers::pi * std::fabs(s)));
    if (r == 0.0) r = 0.1 * (1.0 + target.w.norm());
    r *= b == 0 ? 1.0 : 0.6 + 0.3 * b;
    const double orient = target.c < 0.0 ? -1.0 : 1.0;
    Vector x0 = straight;
    for (int k = 1; k < K; ++k) {
      const double th = kTwoPi * k / K;
      x0.segment(static_cast<Eigen::Index>(k - 1) * dim, dim) +=
          r * (std::sin(th) * u + orient * (1.0 - std::cos(th)) * v);
    }
    add_start(x0);
  }

  if (opt.coarse_warm_start && K % 2 == 0 && K / 2 >= 8) {
    const DistanceResult coarse = cc_distance(form, target, K / 2, opt);
    const Vector x0 = prob.from_path(upsample(coarse.path));
    // The refined coarse path is itself feasible with the coarse length.
    candidates.push_back({x0, prob.length(x0), std::fabs(prob.constraint(x0))});
    add_start(x0);
  }

  const Candidate* best = nullptr;
  for (const auto& c : candidates) {
    const bool feasible = c.residual <= tol;
    if (!best) {
      best = &c;
      continue;
    }
    const bool best_feasible = best->residual <= tol;
    if ((feasible && !best_feasible) ||
        (feasible == best_feasible &&
         (feasible ? c.length < best->length : c.residual < best->residual))) {
      best = &c;
    }
  }

  DistanceResult out;
  out.estimate = best->length;
  out.residual = best->residual;
  out.converged = best->residual <= tol;
  out.K = K;
  out.path = prob.to_path(best->x);
  return out;
}

DistanceResult cc_distance(const SymplecticForm& form, const GroupElement& x,
                           const GroupElement& y, int K,
                           const DistanceOptions& opt) {
  return cc_distance(form, multiply(form, inverse(form, x), y), K, opt);
}

ReducedDistanceResult cc_distance_reduced(const SymplecticForm& form,
                                          const ReducedElement& target, int K,
                                          int k_window,
                                          const DistanceOptions& opt) {
  require_target(form, {target.w, target.theta});
  return fiber_minimum(form, target.w, target.theta, K, k_window, opt);
}

ReducedDistanceResult cc_distance_reduced(const SymplecticForm& form,
                                          const ReducedElement& x,
                                          const ReducedElement& y, int K,
                                          int k_window,
                                          const DistanceOptions& opt) {
  return cc_distance_reduced(
      form, multiply_reduced(form, inverse_reduced(form, x), y), K, k_window,
      opt);
}

ReducedDistanceResult quotient_distance(const SymplecticForm& form,
                                        const GroupElement& g,
                                        const GroupElement& h, int K,
                                        int k_window,
                                        const DistanceOptions& opt) {
  const GroupElement rel = multiply(form, inverse(form, g), h);
  require_target(form, rel);
  return fiber_minimum(form, rel.w, rel.c, K, k_window, opt);
}

}  // namespace heislab
