#include <algorithm>
#include <cmath>
#include <numeric>

#include "seedrl/tabular/tabular.hpp"

namespace seedrl::tabular {

namespace {

// One optimistic backup row: value of the best transition distribution within
// an L1 ball of the given radius around P[a].row(s) (UCRL2 inner maximization:
// move mass onto the best-value state, taking it from the worst ones).
double optimistic_dot(const RowMat& P, int s, const Eigen::VectorXd& V,
                      const std::vector<int>& order_desc, double radius) {
  const int S = static_cast<int>(V.size());
  const int best = order_desc.front();
  double dot = P.row(s).dot(V);
  double add = std::min(radius / 2.0, 1.0 - P(s, best));
  if (add <= 0.0) return dot;
  dot += add * V[best];
  for (int i = S - 1; i > 0 && add > 0.0; --i) {
    const int w = order_desc[i];
    if (w == best) continue;
    const double rm = std::min(P(s, w), add);
    dot -= rm * V[w];
    add -= rm;
  }
  return dot;
}

void backup(const MdpSample& mdp, const Eigen::VectorXd& V, double gamma,
            const Eigen::MatrixXd* l1, Eigen::MatrixXd& Q) {
  const int S = mdp.S, A = mdp.A;
  if (l1 == nullptr) {
    for (int a = 0; a < A; ++a) {
      Q.col(a) = mdp.R.col(a) + gamma * (mdp.P[a] * V);
    }
    return;
  }
  std::vector<int> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return V[i] > V[j]; });
  for (int a = 0; a < A; ++a) {
    for (int s = 0; s < S; ++s) {
      Q(s, a) = mdp.R(s, a) + gamma * optimistic_dot(mdp.P[a], s, V, order, (*l1)(s, a));
    }
  }
}

}  // namespace

ViResult value_iteration(const MdpSample& mdp, const ViOptions& opt) {
  if (opt.validate) mdp.validate();
  require(opt.horizon > 0 || (opt.discount >= 0.0 && opt.discount < 1.0),
          "value_iteration: need horizon >= 1 or discount in [0,1)");
  if (opt.l1_radius != nullptr) {
    require(opt.l1_radius->rows() == mdp.S && opt.l1_radius->cols() == mdp.A,
            "value_iteration: l1 radius shape mismatch");
  }
  const int S = mdp.S, A = mdp.A;
  ViResult res;
  res.Q = Eigen::MatrixXd::Zero(S, A);
  Eigen::VectorXd V = Eigen::VectorXd::Zero(S);

  if (opt.horizon > 0) {
    for (int h = 0; h < opt.horizon; ++h) {
      backup(mdp, V, 1.0, opt.l1_radius, res.Q);
      V = res.Q.rowwise().maxCoeff();
      ++res.sweeps;
    }
  } else {
    const double g = opt.discount;
    if (opt.warm_v != nullptr && opt.warm_v->size() == S) V = *opt.warm_v;
    Eigen::VectorXd diff(S);
    for (int it = 0; it < opt.max_sweeps; ++it) {
      backup(mdp, V, g, opt.l1_radius, res.Q);
      diff = res.Q.rowwise().maxCoeff() - V;
      V += diff;
      ++res.sweeps;
      if (diff.maxCoeff() - diff.minCoeff() <= opt.span_tol) break;
    }
    if (g > 0.0) {
      // Midpoint correction: with span(diff) ~ 0 the remaining tail is the
      // geometric series of a near-uniform increment.
      const double c = g / (1.0 - g) * 0.5 * (diff.maxCoeff() + diff.minCoeff());
      V.array() += c;
      backup(mdp, V, g, opt.l1_radius, res.Q);
      V = res.Q.rowwise().maxCoeff();
    }
  }

  res.V = V;
  res.policy.assign(S, 0);
  for (int s = 0; s < S; ++s) {
    int best = 0;
    for (int a = 1; a < A; ++a) {
      if (res.Q(s, a) > res.Q(s, best)) best = a;
    }
    res.policy[s] = best;
  }
  return res;
}

}  // namespace seedrl::tabular
