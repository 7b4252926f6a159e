#include <cmath>

#include "seedrl/tabular/tabular.hpp"

namespace seedrl::tabular {

double gamma_draw(double shape, Rng& rng) {
  require(shape > 0, "gamma_draw: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back.
    const double g = gamma_draw(shape + 1.0, rng);
    return g * std::pow(rng.u01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.u01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

MdpSample sample_mdp(const TabularPosterior& post, Rng& rng) {
  const int S = post.trans.S, A = post.trans.A;
  MdpSample m(S, A);
  for (int a = 0; a < A; ++a) {
    for (int s = 0; s < S; ++s) {
      double total = 0.0;
      for (int s2 = 0; s2 < S; ++s2) {
        const double g = gamma_draw(post.trans.alpha[a](s, s2), rng);
        m.P[a](s, s2) = g;
        total += g;
      }
      m.P[a].row(s) /= total;
    }
  }
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      m.R(s, a) = rng.normal(post.rew.mu(s, a), std::sqrt(post.rew.var(s, a)));
    }
  }
  return m;
}

MdpSample seed_sample_mdp(const TabularPosterior& post, const TabularSeed& seed) {
  const int S = post.trans.S, A = post.trans.A;
  require(seed.S == S && seed.A == A, "seed_sample_mdp: seed shape mismatch");
  MdpSample m(S, A);
  for (int a = 0; a < A; ++a) {
    for (int s = 0; s < S; ++s) {
      double total = 0.0;
      for (int s2 = 0; s2 < S; ++s2) {
        const double alpha = post.trans.alpha[a](s, s2);
        const int k = static_cast<int>(std::llround(alpha));
        require(std::abs(alpha - k) < 1e-9 && k >= 1,
                "seed_sample_mdp: concentrations must be positive integers");
        double g = 0.0;
        for (int i = 0; i < k; ++i) g += seed.exp_at(s, a, s2, i);
        m.P[a](s, s2) = g;
        total += g;
      }
      m.P[a].row(s) /= total;
    }
  }
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      m.R(s, a) = post.rew.mu(s, a) + std::sqrt(post.rew.var(s, a)) * seed.gauss_at(s, a);
    }
  }
  return m;
}

MdpSample expected_mdp(const TabularPosterior& post) {
  const int S = post.trans.S, A = post.trans.A;
  MdpSample m(S, A);
  for (int a = 0; a < A; ++a) {
    m.P[a] = post.trans.alpha[a];
    const Eigen::ArrayXd sums = m.P[a].rowwise().sum();
    m.P[a].array().colwise() /= sums;
  }
  m.R = post.rew.mu;
  return m;
}

MdpSample optimistic_mdp(const TabularPosterior& post, double delta) {
  require(delta > 0 && delta < 1, "optimistic_mdp: delta must be in (0,1)");
  MdpSample m = expected_mdp(post);
  m.R.array() += (2.0 * std::log(1.0 / delta) * post.rew.var.array()).sqrt();
  return m;
}

Eigen::MatrixXd ucrl_l1_radius(const TabularPosterior& post, double delta) {
  require(delta > 0 && delta < 1, "ucrl_l1_radius: delta must be in (0,1)");
  const double num = 2.0 * (post.trans.S * std::log(2.0) + std::log(1.0 / delta));
  return (num / post.trans.n.array().max(1.0)).sqrt();
}

}  // namespace seedrl::tabular
