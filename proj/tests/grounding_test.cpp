#include <gtest/gtest.h>

#include "acplan/grounding.hpp"
#include "acplan/random.hpp"
#include "support/fixtures.hpp"
#include "support/models.hpp"

using namespace acplan;

TEST(Grounding, CareHomeActionsMatchModel) {
    auto f = support::care_home();
    std::vector<std::string> got;
    for (const auto& a : f.task.actions)
        got.push_back(a.label());
    std::vector<std::string> expected;
    for (const auto& s : support::CareModel{}.actions())
        expected.push_back(s.label());
    EXPECT_EQ(got, expected);
}

TEST(Grounding, RiverActionsMatchModel) {
    auto f = support::river();
    std::vector<std::string> got;
    for (const auto& a : f.task.actions)
        got.push_back(a.label());
    std::vector<std::string> expected;
    for (const auto& s : support::RiverModel{}.actions())
        expected.push_back(s.label());
    EXPECT_EQ(got, expected);
}

TEST(Grounding, WithoutStaticPruningEveryTypedTupleAppears) {
    auto f = support::care_home();
    auto task = ground(f.domain, f.problem, {.prune_static = false});
    // move: 1 robot x 3 x 3 locations; clean: 1 x 3 x 3 items x 3.
    EXPECT_EQ(task.actions.size(), 9u + 27u);
    EXPECT_EQ(all_groundings(f.task).size(), 36u);
    EXPECT_TRUE(std::is_sorted(task.actions.begin(), task.actions.end()));
}

TEST(Grounding, StaticPredicates) {
    auto f = support::care_home();
    EXPECT_EQ(f.task.static_predicates,
              (std::set<std::string, std::less<>>{"non_personal", "personal", "remove_loc"}));
}

TEST(Grounding, InstantiateChecksArguments) {
    auto f = support::care_home();
    auto a = instantiate(f.task, "clean_from_table", {"robot", "table", "diary", "remove"});
    EXPECT_EQ(a.label(), "(clean_from_table robot table diary remove)");
    EXPECT_EQ(a.pre_pos.size(), 4u);
    EXPECT_THROW(instantiate(f.task, "fly", {}), Error);
    EXPECT_THROW(instantiate(f.task, "move", {"robot", "start"}), Error);
    EXPECT_THROW(instantiate(f.task, "move", {"robot", "start", "moon"}), Error);
    EXPECT_THROW(instantiate(f.task, "move", {"diary", "start", "table"}), Error);
}

TEST(Grounding, DeleteBeforeAdd) {
    auto f = support::care_home();
    auto stay = instantiate(f.task, "move", {"robot", "start", "start"});
    State next = apply(f.task.init, stay);
    EXPECT_TRUE(next.contains({"at", {"robot", "start"}}));
    EXPECT_EQ(next, f.task.init);
}

TEST(Grounding, ApplyRejectsInapplicable) {
    auto f = support::care_home();
    auto clean = instantiate(f.task, "clean_from_table", {"robot", "table", "dishes", "remove"});
    EXPECT_FALSE(applicable(clean, f.task.init));
    EXPECT_EQ(first_failing_precondition(clean, f.task.init), "(at robot table)");
    EXPECT_THROW(apply(f.task.init, clean), PreconditionError);
}

TEST(Grounding, SuccessorsAgreeWithModelOnRandomWalks) {
    auto f = support::river();
    support::RiverModel m;
    auto encode = [](const State& s) {
        support::RiverModel::S out{};
        const char* names[] = {"farmer", "goat", "pig", "cabbage"};
        for (int i = 0; i < 4; ++i)
            out[i] = s.contains({"at", {names[i], "right"}}) ? 1 : 0;
        return out;
    };
    CounterRng rng(7);
    for (int walk = 0; walk < 50; ++walk) {
        State s = f.task.init;
        for (int step = 0; step < 12; ++step) {
            const auto& a = f.task.actions[rng.below(f.task.actions.size())];
            support::RiverModel::S next{};
            auto o = m.apply(encode(s), {a.schema, a.args}, false, next);
            ASSERT_EQ(applicable(a, s), o == support::Outcome::Ok) << a.label();
            if (o == support::Outcome::Ok) {
                s = apply(s, a);
                ASSERT_EQ(encode(s), next);
            }
        }
    }
}

TEST(Grounding, EvaluateGoalAndFalsifyingBinding) {
    auto f = support::river();
    EXPECT_FALSE(evaluate(f.task.goal, f.task.init, f.task.objects_by_type));
    const auto& inv = f.policy.state_invariants.front().formula;
    EXPECT_TRUE(evaluate(inv, f.task.init, f.task.objects_by_type));
    EXPECT_EQ(falsifying_binding(inv, f.task.init, f.task.objects_by_type), std::nullopt);

    State bad = f.task.init;
    bad.erase({"at", {"farmer", "left"}});
    bad.insert({"at", {"farmer", "right"}});
    auto b = falsifying_binding(inv, bad, f.task.objects_by_type);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(*b, (Binding{{"?s", "left"}}));
}

TEST(Grounding, EmptyQuantifiedTypeIsAnError) {
    auto d = parse_domain("(define (domain x) (:types a b) (:predicates (p ?x - a)))");
    auto p = parse_problem("(define (problem y) (:domain x) (:objects o - b)"
                           " (:goal (forall (?v - a) (p ?v))))",
                           d);
    EXPECT_THROW(ground(d, p), GroundingError);
}

TEST(Grounding, StateIsCanonical) {
    State a{{"p", {"b"}}, {"p", {"a"}}, {"p", {"a"}}};
    State b{{"p", {"a"}}, {"p", {"b"}}};
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 2u);
    EXPECT_EQ(a.digest(), b.digest());
    EXPECT_EQ(a.digest().size(), 16u);
    EXPECT_FALSE(a.insert({"p", {"a"}}));
    EXPECT_TRUE(a.erase({"p", {"a"}}));
    EXPECT_NE(a.digest(), b.digest());
}
