#pragma once

#include <array>
#include <cstdint>

namespace seedrl::envs {

// One shared observation (s, a, r, s'). Discrete envs fill state/next_state
// ids; the continuous cartpole fills the raw 4D vectors instead (ids = -1).
// agent_id -1 marks synthetic observations (chain revelations).
struct Transition {
  int32_t state = -1;
  int32_t action = 0;
  double reward = 0.0;
  int32_t next_state = -1;
  std::array<double, 4> s4{};       // phi, phi_dot, x, x_dot
  std::array<double, 4> next4{};
  bool next_terminal = false;       // absorbing next state: no bootstrap
  int32_t agent_id = 0;
  int64_t obs_index = -1;           // global append order, set by the buffer
};

}  // namespace seedrl::envs
