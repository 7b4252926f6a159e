#pragma once

#include <optional>
#include <vector>

#include "seedrl/common.hpp"
#include "seedrl/rng.hpp"

namespace seedrl::envs {

// Line graph over vertices 0..N-1; endpoints absorbing. Edge (1,0) pays
// theta_L, edge (N-2,N-1) pays theta_R, every other move pays inner_weight.
struct ChainSpec {
  int n_vertices = 50;  // N, even
  double theta_L = 50.0;
  double theta_R = -50.0;
  double inner_weight = -0.1;
  int start_vertex = 25;  // N/2

  void validate() const;
  // right_positive: theta_R = +N (and theta_L = -N), else mirrored.
  static ChainSpec make(int N, bool right_positive);
};

struct BipolarResult {
  int next_vertex = 0;
  double reward = 0.0;
  bool terminal = false;
  bool reveal = false;
  double theta_L = 0.0;  // valid when reveal
  double theta_R = 0.0;
};

// action 0 = left, 1 = right. Stepping from an absorbing endpoint is an error.
BipolarResult bipolar_step(int vertex, int action, const ChainSpec& spec);

// C chains of length L hanging off one source vertex. All interior edges pay
// zero; the final edge of chain c pays theta_c, drawn once per instance from
// N(0, sigma0_sq + c) with c 1-based. After leaving the source the agent
// cannot switch chains.
struct ParallelChainsSpec {
  int n_chains = 4;
  int chain_length = 4;
  double sigma0_sq = 100.0;
  std::vector<double> final_edge_rewards;  // theta_c, size n_chains

  void validate() const;
  static ParallelChainsSpec sample(int C, int L, double sigma0_sq, Rng& rng);

  // State ids: 0 = source; (chain c, depth d in 1..L) = 1 + c*L + (d-1).
  // Depth L is the absorbing chain end.
  int n_states() const { return 1 + n_chains * chain_length; }
  int node(int chain, int depth) const;
  bool is_source(int id) const { return id == 0; }
  int chain_of(int id) const;   // -1 for source
  int depth_of(int id) const;   // 0 for source
  bool is_terminal(int id) const;
};

struct ParallelResult {
  int next_node = 0;
  double reward = 0.0;
  bool terminal = false;
  bool reveal = false;
  double theta = 0.0;  // valid when reveal
  int chain = -1;      // chain revealed
};

// At the source, action c in [0, C) picks chain c. At depth >= 1 the only
// legal action is 0 (advance); any other action is a rejected chain switch.
ParallelResult parallel_step(int node, int action, const ParallelChainsSpec& spec);

}  // namespace seedrl::envs
