// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "poptk/stab.hpp"
#include "poptk/verify.hpp"
#include "support.hpp"

using namespace poptk;
namespace oracle = poptk::testing;

namespace {

const StateSet kBarred{"ibar", "pbar", "qbar"};

}  // namespace

TEST(GammaExtended, Examples) {
  auto p = example2_protocol(2);
  EXPECT_TRUE(gamma_extended(p, Configuration{}).empty());
  EXPECT_EQ(gamma_extended(p, Configuration{{"p", 1}, {"q", 1}}), (std::set<Output>{Output::One}));
  EXPECT_EQ(gamma_extended(p, Configuration{{"i", 1}, {"ibar", 1}}), (std::set<Output>{Output::Zero, Output::One}));
}

TEST(IsStabilized, Examples) {
  auto net = example2_protocol(2).net();
  EXPECT_TRUE(is_stabilized(net, net.states(), Configuration{{"i", 4}, {"ibar", 1}}));
  EXPECT_TRUE(is_stabilized(net, kBarred, Configuration{{"ibar", 2}, {"pbar", 1}}));
  EXPECT_FALSE(is_stabilized(net, kBarred, Configuration{{"i", 1}, {"ibar", 1}}));
}

TEST(IsStabilized, AgreesWithExhaustiveSearch) {
  oracle::Rng rng(3);
  const auto p = oracle::make_states(3);
  for (int round = 0; round < 200; ++round) {
    auto net = oracle::random_net(rng, p, 3, 1);
    auto c = oracle::random_configuration(rng, p, 2);
    StateSet f({"s0"});
    auto closure = oracle::forward_closure(net, c, 20000);
    if (!closure) continue;
    bool expected = true;
    for (const auto& b : *closure)
      if (b["s1"] > 0 || b["s2"] > 0) expected = false;
    EXPECT_EQ(is_stabilized(net, f, c), expected);
    // enlarging F never breaks stabilization
    if (expected) EXPECT_TRUE(is_stabilized(net, StateSet({"s0", "s1"}), c));
  }
}

TEST(OutputStable, Examples) {
  auto p = example2_protocol(2);
  ExplorationBudget b;
  EXPECT_EQ(output_stable(p, Configuration{}, b).verdict, OutputVerdict::StableZero);
  EXPECT_EQ(output_stable(p, Configuration{{"pbar", 1}, {"qbar", 1}, {"ibar", 2}}, b).verdict, OutputVerdict::StableZero);
  EXPECT_EQ(output_stable(p, Configuration{{"p", 1}, {"q", 1}}, b).verdict, OutputVerdict::StableOne);

  auto r = output_stable(p, Configuration{{"i", 1}, {"ibar", 1}}, b);
  EXPECT_EQ(r.verdict, OutputVerdict::Unstable);
  ASSERT_TRUE(r.not_one);
  // replaying the witness reaches a configuration with a non-1 output
  auto reached = fire_word(p.net(), Configuration{{"i", 1}, {"ibar", 1}}, r.not_one->word);
  ASSERT_TRUE(reached);
  EXPECT_EQ(*reached, r.not_one->reached);
  EXPECT_NE(gamma_extended(p, *reached), (std::set<Output>{Output::One}));
}

TEST(OutputStable, ZeroReachabilityInNonConservativeNets) {
  // a -> nothing: {a:1} has output {1} now but reaches the zero configuration
  PetriNet n(StateSet{"a"}, {{Configuration{{"a", 1}}, Configuration{}}});
  Protocol p(n, Configuration{}, StateSet{"a"}, {{"a", Output::One}});
  ExplorationBudget b;
  auto r = output_stable(p, Configuration{{"a", 2}}, b);
  EXPECT_EQ(r.verdict, OutputVerdict::Unstable);
  ASSERT_TRUE(r.not_one);
  EXPECT_EQ(r.not_one->word.size(), 2U);

  // a -> a a: zero is never reached, but exploration cannot finish
  PetriNet g(StateSet{"a"}, {{Configuration{{"a", 1}}, Configuration{{"a", 2}}}});
  Protocol q(g, Configuration{}, StateSet{"a"}, {{"a", Output::One}});
  ExplorationBudget small;
  small.max_configurations = 50;
  EXPECT_EQ(output_stable(q, Configuration{{"a", 1}}, small).verdict, OutputVerdict::Unknown);
}

TEST(OutputStable, ExclusiveForNonZero) {
  oracle::Rng rng(9);
  const auto states = oracle::make_states(3);
  ExplorationBudget b;
  b.max_configurations = 5000;
  for (int round = 0; round < 100; ++round) {
    auto net = oracle::random_net(rng, states, 3, 1);
    OutputMap out{{"s0", Output::Zero}, {"s1", Output::One}, {"s2", Output::Star}};
    Protocol p(net, Configuration{}, StateSet{"s0"}, out);
    auto c = oracle::random_configuration(rng, states, 2);
    auto v = output_stable(p, c, b).verdict;
    auto closure = oracle::forward_closure(net, c, 5000);
    if (!closure) continue;
    bool all0 = true, all1 = true;
    for (const auto& x : *closure) {
      auto g = gamma_extended(p, x);
      if (!(g.empty() || g == std::set<Output>{Output::Zero})) all0 = false;
      if (g != std::set<Output>{Output::One}) all1 = false;
    }
    if (all0) EXPECT_EQ(v, OutputVerdict::StableZero);
    else if (all1) EXPECT_EQ(v, OutputVerdict::StableOne);
    else EXPECT_EQ(v, OutputVerdict::Unstable);
  }
}

TEST(RegionCheck, Examples) {
  auto net = example2_protocol(2).net();
  Configuration rho{{"ibar", 1}};
  auto r = stabilized_region_check(net, kBarred, rho, 1, {Configuration{{"ibar", 5}}, rho});
  ASSERT_EQ(r.samples.size(), 2U);
  EXPECT_TRUE(r.samples[0].applicable);
  EXPECT_TRUE(r.samples[0].stabilized);
  EXPECT_TRUE(r.samples[1].stabilized);
  EXPECT_TRUE(r.counterexamples.empty());

  auto empty = stabilized_region_check(net, kBarred, rho, 0, {Configuration{{"i", 1}, {"ibar", 1}}});
  EXPECT_TRUE(empty.small_states.empty());
  EXPECT_TRUE(empty.samples[0].applicable);
  EXPECT_FALSE(empty.samples[0].stabilized);

  EXPECT_THROW(stabilized_region_check(net, kBarred, Configuration{{"i", 1}, {"ibar", 1}}, 1, {}), PreconditionError);
}

TEST(RegionCheck, Threshold) {
  // ||T|| = 1, |P| = 2: 1 * 2^(2^2) = 16
  PetriNet n(StateSet{"a", "b"}, {{Configuration{{"a", 1}}, Configuration{{"b", 1}}}});
  EXPECT_EQ(region_threshold(n).materialize(), BigNat(16));
  EXPECT_EQ(region_threshold(PetriNet(StateSet{"a"}, {})).materialize(), BigNat(1));
}
