#include "seedrl/envs/chains.hpp"

#include <cmath>

namespace seedrl::envs {

void ChainSpec::validate() const {
  require(n_vertices >= 4 && n_vertices % 2 == 0, "bipolar: N must be even and >= 4");
  require(std::abs(theta_L) == n_vertices && std::abs(theta_R) == n_vertices,
          "bipolar: |theta| must equal N");
  require(theta_R == -theta_L, "bipolar: theta_R must equal -theta_L");
  require(start_vertex == n_vertices / 2, "bipolar: start vertex must be N/2");
}

ChainSpec ChainSpec::make(int N, bool right_positive) {
  ChainSpec s;
  s.n_vertices = N;
  s.theta_R = right_positive ? N : -N;
  s.theta_L = -s.theta_R;
  s.start_vertex = N / 2;
  s.validate();
  return s;
}

BipolarResult bipolar_step(int vertex, int action, const ChainSpec& spec) {
  const int N = spec.n_vertices;
  require(vertex > 0 && vertex < N - 1, "bipolar_step: vertex is absorbing or out of range");
  require(action == 0 || action == 1, "bipolar_step: action must be 0 (left) or 1 (right)");
  BipolarResult r;
  r.next_vertex = vertex + (action == 1 ? 1 : -1);
  if (r.next_vertex == 0) {
    r.reward = spec.theta_L;
  } else if (r.next_vertex == N - 1) {
    r.reward = spec.theta_R;
  } else {
    r.reward = spec.inner_weight;
  }
  r.terminal = (r.next_vertex == 0 || r.next_vertex == N - 1);
  if (r.terminal) {
    r.reveal = true;
    r.theta_L = spec.theta_L;
    r.theta_R = spec.theta_R;
  }
  return r;
}

void ParallelChainsSpec::validate() const {
  require(n_chains >= 1 && chain_length >= 1, "parallel: C and L must be >= 1");
  require(sigma0_sq > 0, "parallel: sigma0_sq must be positive");
  require(static_cast<int>(final_edge_rewards.size()) == n_chains,
          "parallel: need one final-edge reward per chain");
}

ParallelChainsSpec ParallelChainsSpec::sample(int C, int L, double sigma0_sq, Rng& rng) {
  ParallelChainsSpec s;
  s.n_chains = C;
  s.chain_length = L;
  s.sigma0_sq = sigma0_sq;
  s.final_edge_rewards.resize(C);
  for (int c = 0; c < C; ++c) {
    s.final_edge_rewards[c] = rng.normal(0.0, std::sqrt(sigma0_sq + (c + 1)));
  }
  s.validate();
  return s;
}

int ParallelChainsSpec::node(int chain, int depth) const {
  require(chain >= 0 && chain < n_chains, "parallel: chain out of range");
  require(depth >= 1 && depth <= chain_length, "parallel: depth out of range");
  return 1 + chain * chain_length + (depth - 1);
}

int ParallelChainsSpec::chain_of(int id) const {
  if (id == 0) return -1;
  return (id - 1) / chain_length;
}

int ParallelChainsSpec::depth_of(int id) const {
  if (id == 0) return 0;
  return (id - 1) % chain_length + 1;
}

bool ParallelChainsSpec::is_terminal(int id) const {
  return id != 0 && depth_of(id) == chain_length;
}

ParallelResult parallel_step(int node, int action, const ParallelChainsSpec& spec) {
  require(node >= 0 && node < spec.n_states(), "parallel_step: node out of range");
  require(!spec.is_terminal(node), "parallel_step: node is absorbing");
  ParallelResult r;
  if (spec.is_source(node)) {
    require(action >= 0 && action < spec.n_chains, "parallel_step: invalid chain choice");
    r.next_node = spec.node(action, 1);
    if (spec.chain_length == 1) {
      r.reward = spec.final_edge_rewards[action];
      r.terminal = true;
      r.reveal = true;
      r.theta = r.reward;
      r.chain = action;
    }
    return r;
  }
  require(action == 0, "parallel_step: chain switching is not allowed");
  const int c = spec.chain_of(node);
  const int d = spec.depth_of(node);
  r.next_node = spec.node(c, d + 1);
  if (d + 1 == spec.chain_length) {
    r.reward = spec.final_edge_rewards[c];
    r.terminal = true;
    r.reveal = true;
    r.theta = r.reward;
    r.chain = c;
  }
  return r;
}

}  // namespace seedrl::envs
