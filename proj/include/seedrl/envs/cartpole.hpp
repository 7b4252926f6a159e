#pragma once

#include <vector>

#include "seedrl/common.hpp"

namespace seedrl::envs {

struct CartpoleParams {
  double cart_mass = 1.0;   // M
  double pole_mass = 0.1;   // m
  double pole_length = 1.0; // l
  double gravity = 9.8;     // g
  double dt = 0.02;
  std::vector<double> force_set = {-10.0, 0.0, 10.0};

  void validate() const;
  static CartpoleParams tabular() { return CartpoleParams{}; }
  static CartpoleParams continuous4d() {
    CartpoleParams p;
    p.dt = 0.01;
    return p;
  }
};

// phi = 0 is upright; phi kept in [0, 2pi).
struct CartpoleState2 {
  double phi = kPi;
  double phi_dot = 0.0;
};

struct CartpoleState4 {
  double phi = kPi;
  double phi_dot = 0.0;
  double x = 0.0;
  double x_dot = 0.0;
};

struct Accel {
  double phi_ddot = 0.0;
  double x_ddot = 0.0;
};

double wrap_angle(double phi);  // into [0, 2pi)

Accel cartpole_accel(double phi, double phi_dot, double force, const CartpoleParams& p);
inline Accel cartpole_accel(const CartpoleState2& s, double force, const CartpoleParams& p) {
  return cartpole_accel(s.phi, s.phi_dot, force, p);
}
inline Accel cartpole_accel(const CartpoleState4& s, double force, const CartpoleParams& p) {
  return cartpole_accel(s.phi, s.phi_dot, force, p);
}

// Euler step, velocities first, then positions with the updated velocities.
CartpoleState2 cartpole_step(const CartpoleState2& s, double force, const CartpoleParams& p);
// 4D adds the cart; |x| <= 2 is a rigid edge: x clamps, x_dot zeroes.
CartpoleState4 cartpole_step(const CartpoleState4& s, double force, const CartpoleParams& p);

// Evaluated at the post-transition state.
double cartpole_reward2(const CartpoleState2& s, double force);
double cartpole_reward4(const CartpoleState4& s);

struct Grid2 {
  int n_phi = 20;
  int n_phidot = 20;
  int n_states() const { return n_phi * n_phidot; }
};

// Uniform bins over phi in [0,2pi) and phi_dot clamped to [-2pi, 2pi].
int discretize_cartpole(const CartpoleState2& s, const Grid2& grid);

}  // namespace seedrl::envs
