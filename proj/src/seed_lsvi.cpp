#include "seedrl/seed/lsvi.hpp"

namespace seedrl::seed {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::VectorXd LinearFamily::feat(int s) const {
  if (features) return features(s);
  return rvf::one_hot(s, n_states);
}

LinearFamily LinearFamily::make_one_hot(int S, int A) {
  LinearFamily f;
  f.n_states = S;
  f.n_actions = A;
  f.feature_dim = S;
  return f;
}

void SeedLsviConfig::validate() const {
  require(planning_horizon >= 1, "SeedLsviConfig: planning_horizon must be >= 1");
  reg.validate();
  require(reg.prior_var > 0, "SeedLsviConfig: prior_var must be positive");
}

int greedy_action(const VectorXd& q_values, uint32_t legal_mask) {
  int best = -1;
  for (int a = 0; a < q_values.size(); ++a) {
    if (!(legal_mask >> a & 1u)) continue;
    if (best < 0 || q_values[a] > q_values[best]) best = a;
  }
  require(best >= 0, "greedy_action: no legal action");
  return best;
}

int greedy_action(const VectorXd& theta, const LinearFamily& fam, int state) {
  require(theta.size() == fam.dim(), "greedy_action: theta size mismatch");
  const VectorXd phi = fam.feat(state);
  Eigen::Map<const MatrixXd> blocks(theta.data(), fam.feature_dim, fam.n_actions);
  return greedy_action(blocks.transpose() * phi, fam.mask(state));
}

namespace {

// max over legal actions of Q_theta(s, .); terminal handled by the caller.
double vmax_at(const VectorXd& theta, const LinearFamily& fam, int s) {
  const VectorXd phi = fam.feat(s);
  Eigen::Map<const MatrixXd> blocks(theta.data(), fam.feature_dim, fam.n_actions);
  const VectorXd q = blocks.transpose() * phi;
  const uint32_t mask = fam.mask(s);
  double best = 0.0;
  bool any = false;
  for (int a = 0; a < fam.n_actions; ++a) {
    if (!(mask >> a & 1u)) continue;
    if (!any || q[a] > best) {
      best = q[a];
      any = true;
    }
  }
  require(any, "seed_lsvi_plan: state with no legal action");
  return best;
}

}  // namespace

VectorXd seed_lsvi_plan(const BufferSnapshot& snap, const AgentSeed& seed,
                        const LinearFamily& fam, const SeedLsviConfig& cfg) {
  cfg.validate();
  const int F = fam.feature_dim, A = fam.n_actions;
  VectorXd anchor = seed.theta_hat;
  if (anchor.size() == 0) anchor = VectorXd::Zero(fam.dim());
  require(anchor.size() == fam.dim(), "seed_lsvi_plan: theta_hat size mismatch");
  const int64_t n = snap.size();
  if (n == 0) return anchor;

  // Pre-extract per-action row blocks once; targets change per recursion step.
  std::vector<std::vector<int64_t>> by_action(A);
  for (int64_t j = 0; j < n; ++j) {
    const envs::Transition& t = snap[j];
    require(t.state >= 0 && t.state < fam.n_states && t.action >= 0 && t.action < A,
            "seed_lsvi_plan: transition outside the family's state/action space");
    by_action[t.action].push_back(j);
  }
  std::vector<MatrixXd> X(A);
  for (int a = 0; a < A; ++a) {
    X[a] = MatrixXd::Zero(static_cast<long>(by_action[a].size()), F);
    for (size_t r = 0; r < by_action[a].size(); ++r) {
      X[a].row(static_cast<long>(r)) = fam.feat(snap[by_action[a][r]].state).transpose();
    }
  }

  VectorXd theta = VectorXd::Zero(fam.dim());  // theta_H = 0
  for (int h = cfg.planning_horizon - 1; h >= 0; --h) {
    VectorXd next = VectorXd::Zero(fam.dim());
    for (int a = 0; a < A; ++a) {
      VectorXd y(static_cast<long>(by_action[a].size()));
      for (size_t r = 0; r < by_action[a].size(); ++r) {
        const envs::Transition& t = snap[by_action[a][r]];
        double target = t.reward + seed.noise_for(t.obs_index);
        if (!t.next_terminal) target += vmax_at(theta, fam, t.next_state);
        y[static_cast<long>(r)] = target;
      }
      rvf::RegConfig rc;
      rc.noise_var = cfg.reg.noise_var;
      rc.prior_var = cfg.reg.prior_var;
      rc.anchor = anchor.segment(a * F, F);
      next.segment(a * F, F) = rvf::regularized_lsq_solve(X[a], y, rc);
    }
    theta = next;
  }
  return theta;
}

OnehotStats::OnehotStats(int S_, int A_) : S(S_), A(A_) {
  n = Eigen::ArrayXXd::Zero(S, A);
  sum_r = Eigen::ArrayXXd::Zero(S, A);
  next_counts.resize(static_cast<size_t>(S) * A);
}

void OnehotStats::add(const envs::Transition& t) {
  require(t.state >= 0 && t.state < S && t.action >= 0 && t.action < A,
          "OnehotStats::add: out of range");
  n(t.state, t.action) += 1.0;
  sum_r(t.state, t.action) += t.reward;
  if (!t.next_terminal) {
    auto& lst = next_counts[static_cast<size_t>(t.state) * A + t.action];
    for (auto& e : lst) {
      if (e.first == t.next_state) {
        e.second += 1.0;
        return;
      }
    }
    lst.emplace_back(t.next_state, 1.0);
  }
}

void OnehotStats::catch_up(const BufferSnapshot& snap) {
  for (int64_t j = processed; j < snap.size(); ++j) add(snap[j]);
  processed = snap.size();
}

AgentZsums::AgentZsums(int S, int A) { sum_z = Eigen::ArrayXXd::Zero(S, A); }

void AgentZsums::catch_up(const BufferSnapshot& snap, const AgentSeed& seed) {
  for (int64_t j = processed; j < snap.size(); ++j) {
    const envs::Transition& t = snap[j];
    sum_z(t.state, t.action) += seed.noise_for(t.obs_index);
  }
  processed = snap.size();
}

VectorXd lsvi_onehot(const OnehotStats& st, const AgentZsums& zs, const AgentSeed& seed,
                     const LinearFamily& fam, const SeedLsviConfig& cfg) {
  cfg.validate();
  require(fam.one_hot() && fam.n_states == st.S && fam.n_actions == st.A,
          "lsvi_onehot: family/stats mismatch");
  const int S = st.S, A = st.A;
  const double v = cfg.reg.noise_var, lambda = cfg.reg.prior_var;

  Eigen::ArrayXXd anchor(S, A);
  if (seed.theta_hat.size() > 0) {
    require(seed.theta_hat.size() == fam.dim(), "lsvi_onehot: theta_hat size mismatch");
    anchor = Eigen::Map<const Eigen::ArrayXXd>(seed.theta_hat.data(), S, A);
  } else {
    anchor.setZero();
  }

  const Eigen::ArrayXXd denom = st.n / v + 1.0 / lambda;
  Eigen::ArrayXXd theta = Eigen::ArrayXXd::Zero(S, A);  // theta_H = 0
  Eigen::ArrayXd vmax(S);
  for (int h = cfg.planning_horizon - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      const uint32_t mask = fam.mask(s);
      double best = 0.0;
      bool any = false;
      for (int a = 0; a < A; ++a) {
        if (!(mask >> a & 1u)) continue;
        if (!any || theta(s, a) > best) {
          best = theta(s, a);
          any = true;
        }
      }
      require(any, "lsvi_onehot: state with no legal action");
      vmax[s] = best;
    }
    Eigen::ArrayXXd flow = Eigen::ArrayXXd::Zero(S, A);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const auto& lst = st.next_counts[static_cast<size_t>(s) * A + a];
        double acc = 0.0;
        for (const auto& e : lst) acc += e.second * vmax[e.first];
        flow(s, a) = acc;
      }
    }
    theta = ((st.sum_r + zs.sum_z + flow) / v + anchor / lambda) / denom;
  }

  VectorXd out(fam.dim());
  Eigen::Map<Eigen::ArrayXXd>(out.data(), S, A) = theta;
  return out;
}

}  // namespace seedrl::seed
