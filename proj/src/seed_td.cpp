#include "seedrl/seed/td.hpp"

#include "seedrl/rvf/rvf.hpp"

namespace seedrl::seed {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void SeedTdConfig::validate() const {
  require(sgd_iters >= 1, "SeedTdConfig: sgd_iters must be >= 1");
  require(discount >= 0.0 && discount < 1.0, "SeedTdConfig: discount must be in [0,1)");
  require(minibatch >= 0, "SeedTdConfig: negative minibatch");
  require(noise_var > 0, "SeedTdConfig: noise_var must be positive");
}

namespace {

void apply_step(VectorXd& theta, const VectorXd& grad, const SeedTdConfig& cfg,
                rvf::AdamState* adam) {
  if (cfg.use_adam && adam != nullptr) {
    adam->learning_rate = cfg.learning_rate;
    rvf::adam_step(*adam, theta, grad);
  } else {
    theta -= cfg.learning_rate * grad;
  }
}

double vmax_linear(const VectorXd& theta, const LinearFamily& fam, int s) {
  Eigen::Map<const MatrixXd> blocks(theta.data(), fam.feature_dim, fam.n_actions);
  const VectorXd q = blocks.transpose() * fam.feat(s);
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
  require(any, "seed_td_update: state with no legal action");
  return best;
}

}  // namespace

VectorXd seed_td_update(const VectorXd& theta_prev, const BufferSnapshot& snap,
                        const AgentSeed& seed, const LinearFamily& fam, const SeedTdConfig& cfg,
                        Rng& rng, rvf::AdamState* adam) {
  cfg.validate();
  const int F = fam.feature_dim;
  VectorXd theta = theta_prev;
  require(theta.size() == fam.dim(), "seed_td_update: theta size mismatch");
  const int64_t n = snap.size();

  for (int it = 0; it < cfg.sgd_iters; ++it) {
    VectorXd grad = VectorXd::Zero(fam.dim());
    const int64_t batch = (cfg.minibatch > 0 && n > 0) ? std::min<int64_t>(cfg.minibatch, n) : n;
    for (int64_t b = 0; b < batch; ++b) {
      const int64_t j = (cfg.minibatch > 0) ? rng.uniform_int(static_cast<int>(n)) : b;
      const envs::Transition& t = snap[j];
      double target = t.reward + seed.noise_for(t.obs_index);
      if (!t.next_terminal) target += cfg.discount * vmax_linear(theta, fam, t.next_state);
      const VectorXd phi = fam.feat(t.state);
      const double q = theta.segment(t.action * F, F).dot(phi);
      grad.segment(t.action * F, F) += 2.0 / cfg.noise_var * (q - target) * phi;
    }
    // Mean-loss normalization: the data-gradient scale stays independent of
    // how much data has accumulated, so a fixed learning rate that is stable
    // on a small buffer stays stable on a large one.
    if (batch > 0) grad /= static_cast<double>(batch);
    if (cfg.prior_var > 0) {
      VectorXd anchor = seed.theta_hat;
      if (anchor.size() == 0) anchor = VectorXd::Zero(fam.dim());
      grad += 2.0 / cfg.prior_var * (theta - anchor);
    }
    apply_step(theta, grad, cfg, adam);
  }
  return theta;
}

void seed_td_update_mlp(rvf::MlpParams& params, const BufferSnapshot& snap, const AgentSeed& seed,
                        const SeedTdConfig& cfg, Rng& rng, rvf::AdamState* adam,
                        const std::function<VectorXd(const envs::Transition&, bool)>& features) {
  cfg.validate();
  const int64_t n = snap.size();
  if (n == 0) return;
  auto feat = features;
  if (!feat) {
    feat = [](const envs::Transition& t, bool next) {
      const auto& a = next ? t.next4 : t.s4;
      envs::CartpoleState4 s{a[0], a[1], a[2], a[3]};
      return rvf::features_cartpole4(s);
    };
  }
  const int in_dim = params.shape.in;

  for (int it = 0; it < cfg.sgd_iters; ++it) {
    const int64_t batch = (cfg.minibatch > 0) ? std::min<int64_t>(cfg.minibatch, n) : n;
    MatrixXd xs(in_dim, batch), xs_next(in_dim, batch);
    std::vector<int> actions(batch);
    VectorXd base(batch);
    std::vector<char> boot(batch);
    for (int64_t b = 0; b < batch; ++b) {
      const int64_t j = (cfg.minibatch > 0) ? rng.uniform_int(static_cast<int>(n)) : b;
      const envs::Transition& t = snap[j];
      xs.col(b) = feat(t, false);
      xs_next.col(b) = feat(t, true);
      actions[b] = t.action;
      base[b] = t.reward + seed.noise_for(t.obs_index);
      boot[b] = !t.next_terminal;
    }
    // Bootstrap from the current iterate (theta_{n-1}), then fit theta_n.
    const MatrixXd q_next = rvf::q_eval_batch(params, xs_next);
    const MatrixXd q_cur = rvf::q_eval_batch(params, xs);
    VectorXd residuals(batch);
    for (int64_t b = 0; b < batch; ++b) {
      double target = base[b];
      if (boot[b]) target += cfg.discount * q_next.col(b).maxCoeff();
      residuals[b] = q_cur(actions[b], b) - target;
    }
    VectorXd grad = 2.0 / (cfg.noise_var * static_cast<double>(batch)) *
                    rvf::q_gradient_batch(params, xs, actions, residuals);
    if (cfg.prior_var > 0 && seed.theta_hat.size() == params.w.size()) {
      grad += 2.0 / cfg.prior_var * (params.w - seed.theta_hat);
    }
    apply_step(params.w, grad, cfg, adam);
  }
}

VectorXd td_onehot(const VectorXd& theta_prev, const OnehotStats& st, const AgentZsums& zs,
                   const AgentSeed& seed, const LinearFamily& fam, const SeedTdConfig& cfg,
                   rvf::AdamState* adam) {
  cfg.validate();
  require(fam.one_hot() && fam.n_states == st.S && fam.n_actions == st.A,
          "td_onehot: family/stats mismatch");
  const int S = st.S, A = st.A;
  Eigen::ArrayXXd anchor(S, A);
  if (seed.theta_hat.size() > 0) {
    anchor = Eigen::Map<const Eigen::ArrayXXd>(seed.theta_hat.data(), S, A);
  } else {
    anchor.setZero();
  }

  VectorXd theta = theta_prev;
  require(theta.size() == fam.dim(), "td_onehot: theta size mismatch");
  const double n_tot = st.n.sum();
  Eigen::ArrayXd vmax(S);
  for (int it = 0; it < cfg.sgd_iters; ++it) {
    Eigen::Map<const Eigen::ArrayXXd> th(theta.data(), S, A);
    for (int s = 0; s < S; ++s) {
      const uint32_t mask = fam.mask(s);
      double best = 0.0;
      bool any = false;
      for (int a = 0; a < A; ++a) {
        if (!(mask >> a & 1u)) continue;
        if (!any || th(s, a) > best) {
          best = th(s, a);
          any = true;
        }
      }
      require(any, "td_onehot: state with no legal action");
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
    Eigen::ArrayXXd g =
        2.0 / cfg.noise_var * (st.n * th - (st.sum_r + zs.sum_z + cfg.discount * flow));
    if (n_tot > 0) g /= n_tot;  // mean-loss normalization, as in seed_td_update
    if (cfg.prior_var > 0) g += 2.0 / cfg.prior_var * (th - anchor);
    VectorXd grad(fam.dim());
    Eigen::Map<Eigen::ArrayXXd>(grad.data(), S, A) = g;
    apply_step(theta, grad, cfg, adam);
  }
  return theta;
}

}  // namespace seedrl::seed
