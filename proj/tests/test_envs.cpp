#include <cmath>
#include <vector>

#include "doctest.h"
#include "seedrl/envs/cartpole.hpp"
#include "seedrl/envs/chains.hpp"
#include "seedrl/rng.hpp"

using namespace seedrl;
using namespace seedrl::envs;

namespace {

// Total mechanical energy of the frictionless cart-pole (uniform rod pivoted
// at the cart), measured with the pole center of mass at height (l/2)cos(phi).
double cartpole_energy(const CartpoleState4& s, const CartpoleParams& p) {
  const double hl = 0.5 * p.pole_length;
  const double i_cm = p.pole_mass * p.pole_length * p.pole_length / 12.0;
  const double vx = s.x_dot + hl * s.phi_dot * std::cos(s.phi);
  const double vy = -hl * s.phi_dot * std::sin(s.phi);
  return 0.5 * p.cart_mass * s.x_dot * s.x_dot +
         0.5 * p.pole_mass * (vx * vx + vy * vy) + 0.5 * i_cm * s.phi_dot * s.phi_dot +
         p.pole_mass * p.gravity * hl * std::cos(s.phi);
}

}  // namespace

TEST_CASE("wrap_angle maps into [0, 2pi)") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kTwoPi) == 0.0);
  CHECK(wrap_angle(-kTwoPi) == 0.0);
  CHECK(std::abs(wrap_angle(5.0 * kPi) - kPi) < 1e-12);
  CHECK(std::abs(wrap_angle(-0.5) - (kTwoPi - 0.5)) < 1e-12);
  CHECK(std::abs(wrap_angle(-kPi) - kPi) < 1e-12);
  for (double raw : {123.456, -987.1, 1e-9, kTwoPi - 1e-12}) {
    const double w = wrap_angle(raw);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
  }
}

TEST_CASE("cartpole parameter presets") {
  const CartpoleParams t = CartpoleParams::tabular();
  CHECK(t.cart_mass == 1.0);
  CHECK(t.pole_mass == 0.1);
  CHECK(t.pole_length == 1.0);
  CHECK(t.gravity == 9.8);
  CHECK(t.dt == 0.02);
  CHECK(t.force_set == std::vector<double>{-10.0, 0.0, 10.0});
  const CartpoleParams c = CartpoleParams::continuous4d();
  CHECK(c.dt == 0.01);
  CHECK(c.force_set == t.force_set);
  CHECK_NOTHROW(t.validate());
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("cartpole_accel matches closed forms") {
  const CartpoleParams p = CartpoleParams::tabular();

  // Hanging straight down with no force: equilibrium.
  const Accel down = cartpole_accel(kPi, 0.0, 0.0, p);
  CHECK(std::abs(down.phi_ddot) < 1e-12);
  CHECK(std::abs(down.x_ddot) < 1e-12);

  // Horizontal pole, no force: cos=0 kills the cart coupling, leaving the
  // pivoted-rod value 3g/(2l) = 14.7.
  const Accel horiz = cartpole_accel(kPi / 2.0, 0.0, 0.0, p);
  CHECK(std::abs(horiz.phi_ddot - 14.7) < 1e-12);
  CHECK(std::abs(horiz.x_ddot) < 1e-12);

  // Upright with force 10: phi_ddot = -600/41, x_ddot = 4400/451.
  const Accel up = cartpole_accel(0.0, 0.0, 10.0, p);
  CHECK(std::abs(up.phi_ddot - (-600.0 / 41.0)) < 1e-9);
  CHECK(std::abs(up.x_ddot - 4400.0 / 451.0) < 1e-9);
}

TEST_CASE("2D step is semi-implicit Euler (velocity first)") {
  const CartpoleParams p = CartpoleParams::tabular();
  CartpoleState2 s;
  s.phi = kPi / 2.0;
  s.phi_dot = 0.0;
  const CartpoleState2 n = cartpole_step(s, 0.0, p);
  CHECK(std::abs(n.phi_dot - 14.7 * 0.02) < 1e-12);          // 0.294
  CHECK(std::abs(n.phi - (kPi / 2.0 + 0.294 * 0.02)) < 1e-12);  // position uses new velocity
}

TEST_CASE("2D step wraps phi, 4D step does not") {
  const CartpoleParams p = CartpoleParams::tabular();
  CartpoleState2 s2;
  s2.phi = kTwoPi - 0.001;
  s2.phi_dot = 1.0;
  const CartpoleState2 n2 = cartpole_step(s2, 0.0, p);
  CHECK(n2.phi < 0.1);
  CHECK(n2.phi >= 0.0);

  CartpoleState4 s4;
  s4.phi = 7.0;  // > 2pi
  s4.phi_dot = 0.0;
  s4.x = 0.0;
  s4.x_dot = 0.0;
  const CartpoleState4 n4 = cartpole_step(s4, 0.0, p);
  CHECK(n4.phi >= 7.0);
}

TEST_CASE("4D track edge clamps position and zeroes velocity") {
  const CartpoleParams p = CartpoleParams::continuous4d();
  CartpoleState4 s;
  s.phi = kPi;
  s.phi_dot = 0.0;
  s.x = 1.999;
  s.x_dot = 10.0;
  const CartpoleState4 n = cartpole_step(s, 10.0, p);
  CHECK(n.x == 2.0);
  CHECK(n.x_dot == 0.0);

  s.x = -1.999;
  s.x_dot = -10.0;
  const CartpoleState4 m = cartpole_step(s, -10.0, p);
  CHECK(m.x == -2.0);
  CHECK(m.x_dot == 0.0);
}

TEST_CASE("2D and 4D share identical pole dynamics") {
  // The cart state never feeds back into the pole acceleration, so the
  // (phi, phi_dot) trajectories must agree bit for bit while no wrap occurs.
  const CartpoleParams p = CartpoleParams::continuous4d();
  CartpoleState2 s2;
  s2.phi = kPi / 2.0;
  s2.phi_dot = 0.0;
  CartpoleState4 s4;
  s4.phi = kPi / 2.0;
  s4.phi_dot = 0.0;
  s4.x = 0.0;
  s4.x_dot = 0.0;
  for (int t = 0; t < 1000; ++t) {
    s2 = cartpole_step(s2, 0.0, p);
    s4 = cartpole_step(s4, 0.0, p);
    REQUIRE(s2.phi == s4.phi);  // free swing stays inside (0, 2pi): no wrap
    REQUIRE(s2.phi_dot == s4.phi_dot);
  }
}

TEST_CASE("free swing approximately conserves energy") {
  const CartpoleParams p = CartpoleParams::continuous4d();
  CartpoleState4 s;
  s.phi = kPi / 2.0;
  s.phi_dot = 0.0;
  s.x = 0.0;
  s.x_dot = 0.0;
  const double scale = 2.0 * p.pole_mass * p.gravity * 0.5 * p.pole_length;  // 0.98 J span
  const double e0 = cartpole_energy(s, p);

  // Coarse Euler (dt = 0.01) drifts, but stays within 5% of the energy span
  // over one second.
  CartpoleState4 c = s;
  for (int t = 0; t < 100; ++t) {
    c = cartpole_step(c, 0.0, p);
    REQUIRE(std::abs(cartpole_energy(c, p) - e0) < 0.05 * scale);
  }

  // A fine-step reference (dt = 1e-5) holds energy to 0.1% over two seconds,
  // confirming the acceleration terms describe a conservative system.
  CartpoleParams fine = p;
  fine.dt = 1e-5;
  CartpoleState4 f = s;
  for (int t = 0; t < 200000; ++t) f = cartpole_step(f, 0.0, fine);
  CHECK(std::abs(cartpole_energy(f, p) - e0) < 0.001 * scale);
  CHECK(std::abs(f.x) < 2.0);  // momentum balance keeps the cart near the origin
}

TEST_CASE("2D reward: uprightness bonus minus force cost") {
  CartpoleState2 s;
  s.phi = 0.0;
  s.phi_dot = 0.0;
  CHECK(cartpole_reward2(s, 10.0) == 0.99);
  CHECK(cartpole_reward2(s, 0.0) == 1.0);
  CHECK(cartpole_reward2(s, -10.0) == 0.99);

  s.phi = std::acos(0.8);  // cos = 0.8 > 0.75: inside the bonus cone
  CHECK(cartpole_reward2(s, 0.0) == 1.0);
  s.phi = std::acos(0.7);  // outside
  CHECK(cartpole_reward2(s, 0.0) == 0.0);
  CHECK(cartpole_reward2(s, -10.0) == -0.01);

  s.phi = 0.0;
  s.phi_dot = 1.5;  // spinning too fast
  CHECK(cartpole_reward2(s, 0.0) == 0.0);
  s.phi_dot = 1.0;  // strict inequality
  CHECK(cartpole_reward2(s, 0.0) == 0.0);
  s.phi_dot = 0.999;
  CHECK(cartpole_reward2(s, 0.0) == 1.0);
}

TEST_CASE("4D reward: unit bonus inside the goal set, strict boundaries") {
  CartpoleState4 s;
  s.phi = 0.0;
  s.phi_dot = 0.0;
  s.x = 0.0;
  s.x_dot = 0.0;
  CHECK(cartpole_reward4(s) == 1.0);

  s.phi = std::acos(0.95) - 1e-6;
  CHECK(cartpole_reward4(s) == 1.0);
  s.phi = std::acos(0.95) + 1e-6;
  CHECK(cartpole_reward4(s) == 0.0);

  s.phi = 0.0;
  s.x = 0.1;
  CHECK(cartpole_reward4(s) == 0.0);
  s.x = 0.0999;
  CHECK(cartpole_reward4(s) == 1.0);

  s.x = 0.0;
  s.x_dot = 1.0;
  CHECK(cartpole_reward4(s) == 0.0);
  s.x_dot = 0.0;
  s.phi_dot = 1.0;
  CHECK(cartpole_reward4(s) == 0.0);
}

TEST_CASE("discretize_cartpole: spot cells and full bin-center image") {
  const Grid2 g;
  REQUIRE(g.n_states() == 400);

  CartpoleState2 s;
  s.phi = 0.0;
  s.phi_dot = 0.0;
  CHECK(discretize_cartpole(s, g) == 10);  // phi bin 0, phi_dot bin 10

  s.phi = -0.1;  // wraps to just under 2pi
  s.phi_dot = -10.0;  // clamps to -2pi
  CHECK(discretize_cartpole(s, g) == 19 * 20 + 0);

  s.phi = kPi;
  s.phi_dot = kTwoPi + 1.0;  // clamps to +2pi, top bin
  CHECK(discretize_cartpole(s, g) == 10 * 20 + 19);

  s.phi = kTwoPi - 1e-9;
  s.phi_dot = 0.0;
  CHECK(discretize_cartpole(s, g) == 19 * 20 + 10);

  // Every cell is reachable and bin centers land in their own cell.
  for (int i = 0; i < g.n_phi; ++i) {
    for (int j = 0; j < g.n_phidot; ++j) {
      CartpoleState2 c;
      c.phi = (i + 0.5) * kTwoPi / g.n_phi;
      c.phi_dot = -kTwoPi + (j + 0.5) * 2.0 * kTwoPi / g.n_phidot;
      REQUIRE(discretize_cartpole(c, g) == i * g.n_phidot + j);
    }
  }

  const Grid2 tiny{1, 1};
  s.phi = 1.0;
  s.phi_dot = 5.0;
  CHECK(discretize_cartpole(s, tiny) == 0);
}

TEST_CASE("cartpole invariants hold under random rollouts") {
  const CartpoleParams p = CartpoleParams::tabular();
  const Grid2 g;
  Rng rng(31);
  CartpoleState2 s2;
  CartpoleState4 s4;
  for (int t = 0; t < 500; ++t) {
    const double f = p.force_set[rng.uniform_int(static_cast<int>(p.force_set.size()))];
    s2 = cartpole_step(s2, f, p);
    REQUIRE(s2.phi >= 0.0);
    REQUIRE(s2.phi < kTwoPi);
    const int cell = discretize_cartpole(s2, g);
    REQUIRE(cell >= 0);
    REQUIRE(cell < g.n_states());
    s4 = cartpole_step(s4, f, p);
    REQUIRE(std::abs(s4.x) <= 2.0);
    const double r = cartpole_reward4(s4);
    REQUIRE((r == 0.0 || r == 1.0));
  }
}

TEST_CASE("bipolar chain: spec defaults and single steps") {
  const ChainSpec spec;
  CHECK(spec.n_vertices == 50);
  CHECK(spec.theta_L == 50.0);
  CHECK(spec.theta_R == -50.0);
  CHECK(spec.inner_weight == -0.1);
  CHECK(spec.start_vertex == 25);
  CHECK_NOTHROW(spec.validate());

  const BipolarResult left = bipolar_step(25, 0, spec);
  CHECK(left.next_vertex == 24);
  CHECK(left.reward == -0.1);
  CHECK_FALSE(left.terminal);
  CHECK_FALSE(left.reveal);

  const BipolarResult right = bipolar_step(24, 1, spec);
  CHECK(right.next_vertex == 25);
  CHECK(right.reward == -0.1);

  const BipolarResult hit_l = bipolar_step(1, 0, spec);
  CHECK(hit_l.next_vertex == 0);
  CHECK(hit_l.reward == 50.0);
  CHECK(hit_l.terminal);
  CHECK(hit_l.reveal);
  CHECK(hit_l.theta_L == 50.0);
  CHECK(hit_l.theta_R == -50.0);

  const BipolarResult hit_r = bipolar_step(48, 1, spec);
  CHECK(hit_r.next_vertex == 49);
  CHECK(hit_r.reward == -50.0);
  CHECK(hit_r.terminal);
  CHECK(hit_r.reveal);

  CHECK_THROWS(bipolar_step(0, 1, spec));
  CHECK_THROWS(bipolar_step(49, 0, spec));
}

TEST_CASE("bipolar chain: make() orientations") {
  const ChainSpec rp = ChainSpec::make(6, true);
  CHECK(rp.n_vertices == 6);
  CHECK(rp.theta_R == 6.0);
  CHECK(rp.theta_L == -6.0);
  CHECK(rp.start_vertex == 3);

  const ChainSpec lp = ChainSpec::make(10, false);
  CHECK(lp.theta_L == 10.0);
  CHECK(lp.theta_R == -10.0);
  CHECK(lp.start_vertex == 5);
}

TEST_CASE("bipolar chain: committed-walk return sums") {
  // Walking straight at an endpoint from the start vertex gives the four
  // possible per-agent returns for the default-size instance.
  auto walk = [](const ChainSpec& spec, int action) {
    int v = spec.start_vertex;
    double total = 0.0;
    int steps = 0;
    while (true) {
      const BipolarResult r = bipolar_step(v, action, spec);
      total += r.reward;
      v = r.next_vertex;
      ++steps;
      if (r.terminal) break;
      REQUIRE(steps < 100);
    }
    return std::pair<double, int>(total, steps);
  };

  const ChainSpec lp = ChainSpec::make(50, false);  // positive side on the left
  auto [lsum, lsteps] = walk(lp, 0);
  CHECK(lsteps == 25);
  CHECK(std::abs(lsum - 47.6) < 1e-9);
  auto [rsum, rsteps] = walk(lp, 1);
  CHECK(rsteps == 24);
  CHECK(std::abs(rsum - (-52.3)) < 1e-9);

  const ChainSpec rp = ChainSpec::make(50, true);  // positive side on the right
  auto [rsum2, rsteps2] = walk(rp, 1);
  CHECK(rsteps2 == 24);
  CHECK(std::abs(rsum2 - 47.7) < 1e-9);
  auto [lsum2, lsteps2] = walk(rp, 0);
  CHECK(lsteps2 == 25);
  CHECK(std::abs(lsum2 - (-52.4)) < 1e-9);
}

TEST_CASE("parallel chains: layout, stepping, reveal, and rejected switches") {
  ParallelChainsSpec spec;
  spec.n_chains = 4;
  spec.chain_length = 4;
  spec.sigma0_sq = 100.0;
  spec.final_edge_rewards = {1.5, -2.0, 7.3, 0.0};
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.n_states() == 17);
  CHECK(spec.node(2, 1) == 9);
  CHECK(spec.node(0, 1) == 1);
  CHECK(spec.node(3, 4) == 16);
  CHECK(spec.chain_of(9) == 2);
  CHECK(spec.depth_of(9) == 1);
  CHECK(spec.chain_of(0) == -1);
  CHECK(spec.depth_of(0) == 0);
  CHECK(spec.is_source(0));
  CHECK(spec.is_terminal(spec.node(2, 4)));
  CHECK_FALSE(spec.is_terminal(spec.node(2, 3)));

  const ParallelResult pick = parallel_step(0, 2, spec);
  CHECK(pick.next_node == spec.node(2, 1));
  CHECK(pick.reward == 0.0);
  CHECK_FALSE(pick.terminal);
  CHECK_FALSE(pick.reveal);

  const ParallelResult mid = parallel_step(spec.node(2, 1), 0, spec);
  CHECK(mid.next_node == spec.node(2, 2));
  CHECK(mid.reward == 0.0);

  const ParallelResult fin = parallel_step(spec.node(2, 3), 0, spec);
  CHECK(fin.next_node == spec.node(2, 4));
  CHECK(fin.reward == 7.3);
  CHECK(fin.terminal);
  CHECK(fin.reveal);
  CHECK(fin.theta == 7.3);
  CHECK(fin.chain == 2);

  CHECK_THROWS(parallel_step(spec.node(2, 1), 1, spec));  // no switching
  CHECK_THROWS(parallel_step(0, 4, spec));                // bad source action
  CHECK_THROWS(parallel_step(spec.node(2, 4), 0, spec));  // absorbing end
}

TEST_CASE("parallel chains: sampled instances match the prior scale") {
  Rng rng(12345);
  const int n = 20000;
  double ss_first = 0.0, ss_last = 0.0, mean_first = 0.0;
  for (int i = 0; i < n; ++i) {
    const ParallelChainsSpec s = ParallelChainsSpec::sample(4, 4, 100.0, rng);
    REQUIRE(static_cast<int>(s.final_edge_rewards.size()) == 4);
    mean_first += s.final_edge_rewards[0];
    ss_first += s.final_edge_rewards[0] * s.final_edge_rewards[0];
    ss_last += s.final_edge_rewards[3] * s.final_edge_rewards[3];
  }
  // theta_c ~ N(0, sigma0^2 + c) with c counted from 1.
  CHECK(std::abs(mean_first / n) < 5.0 * std::sqrt(101.0 / n));
  CHECK(std::abs(ss_first / n - 101.0) < 5.0 * 101.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(ss_last / n - 104.0) < 5.0 * 104.0 * std::sqrt(2.0 / n));
}
