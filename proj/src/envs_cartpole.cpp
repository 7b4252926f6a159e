#include "seedrl/envs/cartpole.hpp"

#include <algorithm>
#include <cmath>

namespace seedrl::envs {

void CartpoleParams::validate() const {
  require(cart_mass > 0 && pole_mass > 0 && pole_length > 0, "cartpole: masses/length must be positive");
  require(dt > 0, "cartpole: dt must be positive");
  require(!force_set.empty(), "cartpole: force_set empty");
  require(std::is_sorted(force_set.begin(), force_set.end()), "cartpole: force_set not sorted");
}

double wrap_angle(double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;  // fmod can land exactly on 2pi after the += above
  return phi;
}

Accel cartpole_accel(double phi, double phi_dot, double force, const CartpoleParams& p) {
  const double total = p.cart_mass + p.pole_mass;
  const double half_l = 0.5 * p.pole_length;
  const double sin_phi = std::sin(phi);
  const double cos_phi = std::cos(phi);
  const double tau = (force + half_l * p.pole_mass * phi_dot * phi_dot * sin_phi) / total;
  Accel a;
  a.phi_ddot = (p.gravity * sin_phi - cos_phi * tau) /
               (half_l * (4.0 / 3.0 - p.pole_mass / total * cos_phi * cos_phi));
  a.x_ddot = tau - p.pole_mass * half_l * a.phi_ddot * cos_phi / total;
  return a;
}

CartpoleState2 cartpole_step(const CartpoleState2& s, double force, const CartpoleParams& p) {
  const Accel a = cartpole_accel(s.phi, s.phi_dot, force, p);
  CartpoleState2 n;
  n.phi_dot = s.phi_dot + a.phi_ddot * p.dt;
  n.phi = wrap_angle(s.phi + n.phi_dot * p.dt);
  return n;
}

CartpoleState4 cartpole_step(const CartpoleState4& s, double force, const CartpoleParams& p) {
  const Accel a = cartpole_accel(s.phi, s.phi_dot, force, p);
  CartpoleState4 n;
  n.phi_dot = s.phi_dot + a.phi_ddot * p.dt;
  n.phi = s.phi + n.phi_dot * p.dt;
  n.x_dot = s.x_dot + a.x_ddot * p.dt;
  n.x = s.x + n.x_dot * p.dt;
  if (n.x > 2.0) {
    n.x = 2.0;
    n.x_dot = 0.0;
  } else if (n.x < -2.0) {
    n.x = -2.0;
    n.x_dot = 0.0;
  }
  return n;
}

double cartpole_reward2(const CartpoleState2& s, double force) {
  const double bonus = (std::cos(s.phi) > 0.75 && std::abs(s.phi_dot) < 1.0) ? 1.0 : 0.0;
  return bonus - std::abs(force) / 1000.0;
}

double cartpole_reward4(const CartpoleState4& s) {
  return (std::cos(s.phi) > 0.95 && std::abs(s.x) < 0.1 && std::abs(s.x_dot) < 1.0 &&
          std::abs(s.phi_dot) < 1.0)
             ? 1.0
             : 0.0;
}

int discretize_cartpole(const CartpoleState2& s, const Grid2& grid) {
  require(grid.n_phi >= 1 && grid.n_phidot >= 1, "discretize: grid dims must be >= 1");
  const double phi = wrap_angle(s.phi);
  int bp = static_cast<int>(phi / kTwoPi * grid.n_phi);
  bp = std::min(bp, grid.n_phi - 1);
  const double pd = std::clamp(s.phi_dot, -kTwoPi, kTwoPi);
  int bd = static_cast<int>((pd + kTwoPi) / (2.0 * kTwoPi) * grid.n_phidot);
  bd = std::min(bd, grid.n_phidot - 1);
  return bp * grid.n_phidot + bd;
}

}  // namespace seedrl::envs
