#include "seedrl/tabular/tabular.hpp"

namespace seedrl::tabular {

DirichletPosterior::DirichletPosterior(int S_, int A_, double alpha0_)
    : S(S_), A(A_), alpha0(alpha0_) {
  require(S >= 1 && A >= 1, "DirichletPosterior: empty state/action space");
  require(alpha0 > 0, "DirichletPosterior: alpha0 must be positive");
  alpha.assign(A, RowMat::Constant(S, S, alpha0));
  n = Eigen::MatrixXd::Zero(S, A);
}

void DirichletPosterior::update(int s, int a, int s_next) {
  require(s >= 0 && s < S && a >= 0 && a < A && s_next >= 0 && s_next < S,
          "DirichletPosterior::update: index out of range");
  alpha[a](s, s_next) += 1.0;
  n(s, a) += 1.0;
}

GaussianRewardPosterior::GaussianRewardPosterior(int S, int A, double mu0, double var0,
                                                 double obs_noise_var_)
    : obs_noise_var(obs_noise_var_) {
  require(S >= 1 && A >= 1, "GaussianRewardPosterior: empty state/action space");
  require(var0 > 0 && obs_noise_var > 0, "GaussianRewardPosterior: variances must be positive");
  mu = Eigen::MatrixXd::Constant(S, A, mu0);
  var = Eigen::MatrixXd::Constant(S, A, var0);
}

void GaussianRewardPosterior::update(int s, int a, double r) {
  require(s >= 0 && s < mu.rows() && a >= 0 && a < mu.cols(),
          "GaussianRewardPosterior::update: index out of range");
  const double v_new = 1.0 / (1.0 / var(s, a) + 1.0 / obs_noise_var);
  mu(s, a) = v_new * (mu(s, a) / var(s, a) + r / obs_noise_var);
  var(s, a) = v_new;
}

TabularPosterior::TabularPosterior(int S, int A)
    : trans(S, A), rew(S, A) {}

void TabularPosterior::update(const envs::Transition& t) {
  trans.update(t.state, t.action, t.next_state);
  rew.update(t.state, t.action, t.reward);
}

void update_transition(DirichletPosterior& post, const envs::Transition& t) {
  post.update(t.state, t.action, t.next_state);
}

void update_reward(GaussianRewardPosterior& post, const envs::Transition& t) {
  post.update(t.state, t.action, t.reward);
}

MdpSample::MdpSample(int S_, int A_) : S(S_), A(A_) {
  P.assign(A, RowMat::Zero(S, S));
  R = Eigen::MatrixXd::Zero(S, A);
}

void MdpSample::validate(double tol) const {
  require(S >= 1 && A >= 1 && static_cast<int>(P.size()) == A && R.rows() == S && R.cols() == A,
          "MdpSample: inconsistent shapes");
  for (int a = 0; a < A; ++a) {
    require(P[a].rows() == S && P[a].cols() == S, "MdpSample: P shape mismatch");
    require((P[a].array() >= -tol).all(), "MdpSample: negative transition probability");
    require(((P[a].rowwise().sum().array() - 1.0).abs() <= tol).all(),
            "MdpSample: transition rows must sum to 1");
  }
}

}  // namespace seedrl::tabular
