// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "poptk/reach.hpp"
#include "poptk/verify.hpp"
#include "support.hpp"

using namespace poptk;
namespace oracle = poptk::testing;

namespace {

Transition tr(Configuration pre, Configuration post) { return {std::move(pre), std::move(post)}; }

PetriNet swap_net() {
  return PetriNet(StateSet{"p", "q"}, {tr({{"p", 1}}, {{"q", 1}}), tr({{"q", 1}}, {{"p", 1}})});
}

}  // namespace

TEST(Fire, Examples) {
  const auto t = example2_protocol(1).net()[0];
  EXPECT_EQ(fire(Configuration{{"i", 1}, {"ibar", 1}}, t), (Configuration{{"p", 1}, {"q", 1}}));
  EXPECT_FALSE(fire(Configuration{{"i", 1}}, t));
  EXPECT_EQ(fire(Configuration{{"i", 5}}, tr({}, {})), (Configuration{{"i", 5}}));
}

TEST(FireWord, Examples) {
  const auto net = example2_protocol(1).net();
  Configuration c{{"i", 1}, {"ibar", 1}};
  EXPECT_EQ(fire_word(net, c, {}), c);
  EXPECT_EQ(fire_word(net, c, {0}), (Configuration{{"p", 1}, {"q", 1}}));
  EXPECT_EQ(fire_word(net, Configuration{{"i", 2}, {"ibar", 2}}, {0, 0}), (Configuration{{"p", 2}, {"q", 2}}));
  EXPECT_FALSE(fire_word(net, c, {0, 0}));
  EXPECT_THROW(fire_word(net, c, {7}), PreconditionError);
}

TEST(ReachableSet, Examples) {
  ExplorationBudget b;
  auto r = reachable_set(swap_net(), Configuration{{"p", 1}}, b);
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.configurations, (std::vector<Configuration>{Configuration{{"p", 1}}, Configuration{{"q", 1}}}));

  auto e = reachable_set(PetriNet(StateSet{"p"}, {}), Configuration{{"p", 3}}, b);
  EXPECT_TRUE(e.exhausted);
  EXPECT_EQ(e.configurations.size(), 1U);

  ExplorationBudget ten;
  ten.max_configurations = 10;
  auto g = reachable_set(PetriNet(StateSet{"p"}, {tr({{"p", 1}}, {{"p", 2}})}), Configuration{{"p", 1}}, ten);
  EXPECT_FALSE(g.exhausted);
  EXPECT_EQ(g.configurations.size(), 10U);

  ExplorationBudget zero;
  zero.max_configurations = 0;
  EXPECT_THROW(reachable_set(swap_net(), Configuration{}, zero), PreconditionError);
}

TEST(Coverable, Examples) {
  const auto net2 = example2_protocol(2).net();
  auto w0 = coverable(net2, Configuration{{"i", 1}}, Configuration{});
  ASSERT_TRUE(w0);
  EXPECT_TRUE(w0->word.empty());

  auto w = coverable(net2, Configuration{{"i", 1}, {"ibar", 2}}, Configuration{{"p", 1}});
  ASSERT_TRUE(w);
  EXPECT_EQ(w->word, (FiringWord{0}));
  EXPECT_EQ(w->reached, (Configuration{{"ibar", 1}, {"p", 1}, {"q", 1}}));

  PetriNet pq(StateSet{"p", "q"}, {tr({{"p", 1}}, {{"q", 1}})});
  EXPECT_FALSE(coverable(pq, Configuration{{"q", 1}}, Configuration{{"p", 1}}));
}

TEST(Coverable, ShortestLexFirstWitness) {
  // two ways to make r: t0 then t2 (length 2) or t1 directly (length 1)
  PetriNet n(StateSet{"a", "b", "r"},
             {tr({{"a", 1}}, {{"b", 1}}), tr({{"a", 1}}, {{"r", 1}}), tr({{"b", 1}}, {{"r", 1}})});
  auto w = coverable(n, Configuration{{"a", 1}}, Configuration{{"r", 1}});
  ASSERT_TRUE(w);
  EXPECT_EQ(w->word, (FiringWord{1}));
}

TEST(Coverable, UnboundedNet) {
  // a -> 2a grows forever; covering 5 a's needs 4 firings
  PetriNet n(StateSet{"a"}, {tr({{"a", 1}}, {{"a", 2}})});
  auto w = coverable(n, Configuration{{"a", 1}}, Configuration{{"a", 5}});
  ASSERT_TRUE(w);
  EXPECT_EQ(w->word.size(), 4U);
}

TEST(Lift, Examples) {
  PetriNet n(StateSet{"i", "p", "q"}, {tr({{"i", 1}, {"p", 1}}, {{"q", 1}, {"p", 1}})});
  Configuration alpha{{"i", 1}, {"p", 2}};
  EXPECT_EQ(lift(n, alpha, StateSet{"i", "q"}, {0}, Configuration{{"q", 1}}), (Configuration{{"q", 1}, {"p", 2}}));
  EXPECT_EQ(lift(n, alpha, n.states(), {0}, Configuration{{"q", 1}, {"p", 2}}), (Configuration{{"q", 1}, {"p", 2}}));
  EXPECT_EQ(lift(n, alpha, StateSet{"i"}, {}, Configuration{{"i", 1}}), alpha);

  try {
    (void)lift(n, Configuration{{"i", 2}, {"p", 1}}, StateSet{"i", "q"}, {0, 0}, Configuration{{"q", 2}});
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("'p'"), std::string::npos);
  }
  EXPECT_THROW(lift(n, alpha, StateSet{"i", "q"}, {0}, Configuration{{"i", 1}}), PreconditionError);
}

TEST(Rackoff, Examples) {
  EXPECT_EQ(rackoff_bound(1, 1, 1).materialize(), BigNat(2));
  EXPECT_EQ(rackoff_bound(2, 1, 1).materialize(), BigNat(16));
  EXPECT_EQ(rackoff_bound(3, 2, 2).materialize(), BigNat("18014398509481984"));
  EXPECT_EQ(rackoff_bound(1, 0, 1).materialize(), BigNat(1));
  EXPECT_EQ(rackoff_bound(2, 0, 0).materialize(), BigNat(0));
}

TEST(ReachProperties, AdditivityConservationProjection) {
  oracle::Rng rng(11);
  const auto p = oracle::make_states(3);
  for (int round = 0; round < 300; ++round) {
    auto net = oracle::random_net(rng, p, 3, 2);
    auto c = oracle::random_configuration(rng, p, 3);
    auto r = oracle::random_configuration(rng, p, 2);
    for (const auto& t : net.transitions()) {
      auto a = fire(c, t);
      if (!a) continue;
      EXPECT_EQ(fire(c + r, t), *a + r);
    }
    FiringWord w;
    for (int k = 0; k < 4; ++k) w.push_back(oracle::uniform(rng, 0, net.size() - 1));
    auto beta = fire_word(net, c, w);
    if (beta) {
      StateSet q({"s0", "s2"});
      auto pd = densify(net, q);
      auto proj = fire_word(c.restrict(q).to_dense(q), pd, w);
      ASSERT_TRUE(proj);
      EXPECT_EQ(Configuration::from_dense(q, *proj), beta->restrict(q));
      if (net.is_conservative()) EXPECT_EQ(agents(*beta), agents(c));
    }
  }
}

TEST(ReachProperties, LiftPostconditionsHold) {
  oracle::Rng rng(5);
  const auto p = oracle::make_states(3);
  const StateSet q({"s0", "s1"});
  int checked = 0;
  for (int round = 0; round < 400; ++round) {
    auto net = oracle::random_net(rng, p, 3, 1);
    auto aq = oracle::random_configuration(rng, q, 3);
    FiringWord w;
    for (int k = 0; k < 3; ++k) w.push_back(oracle::uniform(rng, 0, net.size() - 1));
    auto end = fire_word(aq.to_dense(q), densify(net, q), w);
    if (!end) continue;
    const Count need = w.size() * net.norm_inf();
    auto alpha = aq + Configuration::single("s2", need + oracle::uniform(rng, 0, 2));
    auto rho = Configuration::from_dense(q, *end);
    auto beta = lift(net, alpha, q, w, rho);
    EXPECT_EQ(fire_word(net, alpha, w), beta);
    EXPECT_EQ(beta.restrict(q), rho);
    EXPECT_GE(beta["s2"] + need, alpha["s2"]);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}
