#include <gtest/gtest.h>

#include "tsetlin/feedback.hpp"

using namespace tsetlin;

namespace {

Clause with_states(std::uint32_t depth, std::vector<std::uint32_t> states) {
  std::vector<TsetlinAutomaton> team;
  for (auto s : states) team.emplace_back(depth, s);
  return Clause(std::move(team));
}

LiteralVector lits(std::vector<std::uint8_t> x) { return make_literals(x); }

}  // namespace

TEST(Feedback, TableExamples) {
  EXPECT_EQ(lookup_cell(FeedbackKind::type_i, Action::include, true, true, 4), (FeedbackCell{0.75, 0.25, 0.0}));
  for (double s : {1.0, 2.0, 7.5}) {
    EXPECT_EQ(lookup_cell(FeedbackKind::type_ii, Action::exclude, true, false, s), (FeedbackCell{0, 0, 1}));
    EXPECT_EQ(lookup_cell(FeedbackKind::type_ii, Action::include, false, true, s), (FeedbackCell{0, 1, 0}));
  }
}

TEST(Feedback, EveryCellMatchesTheClosedForm) {
  for (double s : {1.0, 1.5, 2.0, 4.0, 10.0}) {
    const double lo = 1 / s, hi = (s - 1) / s;
    using K = FeedbackKind;
    using A = Action;
    EXPECT_EQ(lookup_cell(K::type_i, A::include, true, true, s), (FeedbackCell{hi, lo, 0}));
    EXPECT_EQ(lookup_cell(K::type_i, A::include, false, true, s), (FeedbackCell{0, hi, lo}));
    EXPECT_EQ(lookup_cell(K::type_i, A::include, false, false, s), (FeedbackCell{0, hi, lo}));
    EXPECT_EQ(lookup_cell(K::type_i, A::exclude, true, true, s), (FeedbackCell{0, lo, hi}));
    EXPECT_EQ(lookup_cell(K::type_i, A::exclude, true, false, s), (FeedbackCell{lo, hi, 0}));
    EXPECT_EQ(lookup_cell(K::type_i, A::exclude, false, true, s), (FeedbackCell{lo, hi, 0}));
    EXPECT_EQ(lookup_cell(K::type_i, A::exclude, false, false, s), (FeedbackCell{lo, hi, 0}));
  }
}

TEST(Feedback, CellsSumToOneAndTypeTwoNeverRewards) {
  for (double s : {1.0, 1.5, 2.0, 4.0, 10.0}) {
    const FeedbackTable table(s);
    for (auto kind : {FeedbackKind::type_i, FeedbackKind::type_ii}) {
      for (auto action : {Action::exclude, Action::include}) {
        for (bool out : {false, true}) {
          for (bool lit : {false, true}) {
            if (action == Action::include && out && !lit) continue;
            const auto c = lookup_cell(kind, action, out, lit, s);
            EXPECT_DOUBLE_EQ(c.reward + c.inaction + c.penalty, 1.0);
            EXPECT_GE(c.reward, 0.0);
            EXPECT_GE(c.penalty, 0.0);
            EXPECT_EQ(table.cell(kind, action, out, lit), c);
            if (kind == FeedbackKind::type_ii) {
              EXPECT_EQ(c.reward, 0.0);
            }
            if (kind == FeedbackKind::type_ii && (!out || action == Action::include)) {
              EXPECT_EQ(c.inaction, 1.0);
            }
          }
        }
      }
    }
  }
}

TEST(Feedback, UnreachableCellIsAContractViolation) {
  for (auto kind : {FeedbackKind::type_i, FeedbackKind::type_ii}) {
    EXPECT_THROW(lookup_cell(kind, Action::include, true, false, 2), ContractViolation);
    EXPECT_THROW(FeedbackTable(2).cell(kind, Action::include, true, false), ContractViolation);
  }
}

TEST(Feedback, SpecificityBelowOneIsRejected) {
  EXPECT_THROW(FeedbackTable(0.5), ConfigError);
  EXPECT_THROW(lookup_cell(FeedbackKind::type_i, Action::include, true, true, 0.99), ConfigError);
}

TEST(Feedback, DegenerateCellsAreCertain) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    TsetlinAutomaton a(100, 150), b(100, 150);
    update_ta(a, {1, 0, 0}, rng);
    update_ta(b, {0, 1, 0}, rng);
    EXPECT_EQ(a.state(), 151u);
    EXPECT_EQ(b.state(), 150u);
  }
}

TEST(Feedback, DrawFrequenciesMatchTheCell) {
  Rng rng(2);
  const FeedbackCell cell{0.75, 0.25, 0.0};
  int rewards = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) rewards += draw_outcome(cell, rng) == Outcome::reward;
  EXPECT_NEAR(rewards / double(n), 0.75, 0.01);
  const FeedbackCell mixed{0.2, 0.5, 0.3};
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(draw_outcome(mixed, rng))];
  EXPECT_NEAR(counts[0] / double(n), 0.2, 0.01);
  EXPECT_NEAR(counts[1] / double(n), 0.5, 0.01);
  EXPECT_NEAR(counts[2] / double(n), 0.3, 0.01);
}

TEST(Feedback, TypeTwoLeavesNonFiringClausesAlone) {
  Rng rng(3);
  // x1 included, input x1 = 0: output 0.
  const Clause start = with_states(100, {101, 100, 100, 100});
  Clause c = start;
  for (int i = 0; i < 1000; ++i) feed_clause(c, lits({0, 1}), FeedbackKind::type_ii, 2.0, rng);
  EXPECT_EQ(c, start);
}

TEST(Feedback, TypeTwoIncludesTheFalseLiteralsOfAFiringClause) {
  Rng rng(4);
  // x1 included and true; x2 = 1 so not-x2 (index 3) is a 0 literal, excluded.
  Clause c = with_states(100, {101, 100, 100, 100});
  feed_clause(c, lits({1, 1}), FeedbackKind::type_ii, 2.0, rng);
  EXPECT_EQ(c.automaton(0).state(), 101u);  // included: inaction
  EXPECT_EQ(c.automaton(1).state(), 100u);  // excluded over a 1 literal: inaction
  EXPECT_EQ(c.automaton(2).state(), 101u);  // not-x1 = 0: penalty, now included
  EXPECT_EQ(c.automaton(3).state(), 101u);
  EXPECT_FALSE(c.evaluate(lits({1, 1}), EvalMode::learning));
}

TEST(Feedback, SpecificityOneMakesTheFiringIncludeCellInert) {
  EXPECT_EQ(lookup_cell(FeedbackKind::type_i, Action::include, true, true, 1.0), (FeedbackCell{0, 1, 0}));
  Rng rng(5);
  Clause c = with_states(100, {150, 100, 100, 100});
  feed_clause(c, lits({1, 0}), FeedbackKind::type_i, 1.0, rng);
  EXPECT_EQ(c.automaton(0).state(), 150u);
}

TEST(Feedback, FiringClauseRecruitsTrueLiteralsAtRateHigh) {
  Rng rng(6);
  const double s = 4.0;
  // Empty clause fires in learning mode; x1 = 1 so automaton 0 is an excluded TA over a 1 literal.
  const Clause start = with_states(100, {90, 90, 90, 90});
  int pushed = 0;
  const int n = 100000;
  const FeedbackTable table(s);
  for (int i = 0; i < n; ++i) {
    Clause c = start;
    feed_clause(c, lits({1, 0}), FeedbackKind::type_i, table, rng);
    pushed += c.automaton(0).state() == 91;
  }
  EXPECT_NEAR(pushed / double(n), (s - 1) / s, 0.01);
}

TEST(Feedback, OutputIsFrozenBeforeUpdates) {
  // With s = 1, Type I on a non-firing clause penalizes every include with
  // certainty. If the output were re-evaluated mid-update the later automata
  // would see a firing clause instead.
  Rng rng(7);
  Clause c = with_states(1, {2, 2, 1, 1});  // x1 and x2 included, depth 1
  feed_clause(c, lits({0, 1}), FeedbackKind::type_i, 1.0, rng);
  EXPECT_EQ(c.automaton(0).state(), 1u);
  EXPECT_EQ(c.automaton(1).state(), 1u);  // frozen output 0: penalized even though x2 = 1
}
