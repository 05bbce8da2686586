#include <gtest/gtest.h>

#include "acplan/planner.hpp"
#include "acplan/validator.hpp"
#include "support/fixtures.hpp"
#include "support/models.hpp"

using namespace acplan;

namespace {

SearchConfig constrained(const support::Fixture& f, SearchAlgorithm alg = SearchAlgorithm::Bfs) {
    SearchConfig c;
    c.algorithm = alg;
    c.oracle = std::make_shared<SymbolicOracle>(f.policy, f.task);
    return c;
}

std::set<std::vector<std::string>> label_set(const EnumerationResult& r) {
    std::set<std::vector<std::string>> out;
    for (const auto& p : r.plans)
        out.insert(support::labels(p));
    return out;
}

}  // namespace

TEST(Planner, CareHomeBfsPlan) {
    auto f = support::care_home();
    auto r = solve(f.task, constrained(f));
    ASSERT_EQ(r.status, SearchStatus::Solved);
    EXPECT_EQ(support::labels(*r.plan),
              (std::vector<std::string>{"(move robot start table)",
                                        "(clean_from_table robot table dishes remove)",
                                        "(clean_from_table robot table newspaper remove)"}));
    EXPECT_TRUE(validate(f.task, f.policy, *r.plan).valid);
    EXPECT_LE(r.stats.pruned_by_constraints, r.stats.generated);
}

TEST(Planner, RiverBfsPlanHasSevenCrossings) {
    auto f = support::river();
    auto r = solve(f.task, constrained(f));
    ASSERT_EQ(r.status, SearchStatus::Solved);
    ASSERT_EQ(r.plan->cost(), 7u);
    EXPECT_EQ(r.plan->steps.front().label(), "(row_with cabbage left right)");
    EXPECT_TRUE(validate(f.task, f.policy, *r.plan).valid);
    EXPECT_EQ(support::shortest(support::RiverModel{}, true), 7u);
}

TEST(Planner, UnconstrainedRiverIsShorter) {
    auto f = support::river();
    auto r = solve(f.task, {});
    ASSERT_EQ(r.status, SearchStatus::Solved);
    EXPECT_EQ(r.plan->cost(), support::shortest(support::RiverModel{}, false));
}

TEST(Planner, GoalAlreadySatisfiedGivesEmptyPlan) {
    auto f = support::river();
    auto task = f.task;
    task.init = State{{"at", {"farmer", "right"}}, {"at", {"goat", "right"}}, {"at", {"pig", "right"}},
                      {"at", {"cabbage", "right"}}, {"opposite", {"left", "right"}},
                      {"opposite", {"right", "left"}}};
    auto r = solve(task, constrained(f));
    ASSERT_EQ(r.status, SearchStatus::Solved);
    EXPECT_TRUE(r.plan->empty());
    EXPECT_EQ(r.plan->cost(), 0u);
}

TEST(Planner, UnsolvableAndResourceLimit) {
    auto f = support::river();
    auto policy = parse_policy("(policy (forbid (at farmer ?from) :action row_with))", f.domain);
    SearchConfig c;
    c.oracle = std::make_shared<SymbolicOracle>(policy, f.task);
    EXPECT_EQ(solve(f.task, c).status, SearchStatus::Unsolvable);

    SearchConfig tight = constrained(f);
    tight.max_expansions = 2;
    auto r = solve(f.task, tight);
    EXPECT_EQ(r.status, SearchStatus::ResourceLimit);
    EXPECT_FALSE(r.plan.has_value());
    tight.max_expansions = 0;
    EXPECT_THROW(solve(f.task, tight), Error);
}

TEST(Planner, AstarFindsValidPlans) {
    for (const auto& f : {support::care_home(), support::river()}) {
        auto r = solve(f.task, constrained(f, SearchAlgorithm::AstarGoalCount));
        ASSERT_EQ(r.status, SearchStatus::Solved);
        EXPECT_TRUE(validate(f.task, f.policy, *r.plan).valid);
    }
}

TEST(Planner, Deterministic) {
    auto f = support::river();
    auto a = solve(f.task, constrained(f));
    auto b = solve(f.task, constrained(f));
    EXPECT_EQ(a.plan, b.plan);
    EXPECT_EQ(a.stats.expansions, b.stats.expansions);
    EXPECT_EQ(a.stats.generated, b.stats.generated);
    EXPECT_EQ(a.stats.duplicates, b.stats.duplicates);
}

TEST(Planner, CareHomeLengthThreeEnumeration) {
    auto f = support::care_home();
    auto r = enumerate_plans(f.task, constrained(f), 3);
    ASSERT_EQ(r.status, SearchStatus::Solved);
    auto set = label_set(r);
    EXPECT_TRUE(set.contains({"(move robot start table)", "(clean_from_table robot table dishes remove)",
                              "(clean_from_table robot table newspaper remove)"}));
    EXPECT_TRUE(set.contains({"(move robot start table)", "(clean_from_table robot table newspaper remove)",
                              "(clean_from_table robot table dishes remove)"}));
    EXPECT_TRUE(enumerate_plans(f.task, constrained(f), 0).plans.empty());
}

TEST(Planner, EnumerationIsCanonicallyOrdered) {
    auto f = support::care_home();
    auto r = enumerate_plans(f.task, {}, 6);
    EXPECT_TRUE(std::is_sorted(r.plans.begin(), r.plans.end()));
    EXPECT_EQ(std::adjacent_find(r.plans.begin(), r.plans.end()), r.plans.end());
}

class PlanSets : public ::testing::TestWithParam<std::size_t> {};

TEST_P(PlanSets, MatchIndependentModel) {
    std::size_t max_len = GetParam();
    auto care = support::care_home();
    auto river = support::river();
    EXPECT_EQ(label_set(enumerate_plans(care.task, constrained(care), max_len)),
              support::enumerate(support::CareModel{}, max_len, true));
    EXPECT_EQ(label_set(enumerate_plans(care.task, {}, max_len)),
              support::enumerate(support::CareModel{}, max_len, false));
    EXPECT_EQ(label_set(enumerate_plans(river.task, constrained(river), max_len)),
              support::enumerate(support::RiverModel{}, max_len, true));
    EXPECT_EQ(label_set(enumerate_plans(river.task, {}, max_len)),
              support::enumerate(support::RiverModel{}, max_len, false));
}

TEST_P(PlanSets, PruningEqualsPostHocFiltering) {
    std::size_t max_len = GetParam();
    for (const auto& f : {support::care_home(), support::river()}) {
        auto pruned = enumerate_plans(f.task, constrained(f), max_len);
        auto all = enumerate_plans(f.task, {}, max_len);
        std::vector<Plan> filtered;
        for (const auto& p : all.plans)
            if (validate(f.task, f.policy, p).valid)
                filtered.push_back(p);
        EXPECT_EQ(pruned.plans, filtered);
    }
}

INSTANTIATE_TEST_SUITE_P(UpToEight, PlanSets, ::testing::Range<std::size_t>(0, 9));

TEST(Planner, BfsIsOptimal) {
    for (const auto& f : {support::care_home(), support::river()}) {
        auto r = solve(f.task, constrained(f));
        ASSERT_EQ(r.status, SearchStatus::Solved);
        auto shorter = enumerate_plans(f.task, constrained(f), r.plan->cost() - 1);
        EXPECT_TRUE(shorter.plans.empty());
    }
}

TEST(Planner, AddingARuleNeverAddsPlans) {
    auto f = support::care_home();
    auto base = enumerate_plans(f.task, constrained(f), 6);
    std::string text = to_text(f.policy);
    text = text.substr(0, text.rfind(')')) + "\n  (forbid (at ?obj start) :action clean_from_table))";
    SearchConfig c;
    c.oracle = std::make_shared<SymbolicOracle>(parse_policy(text, f.domain), f.task);
    auto stricter = enumerate_plans(f.task, c, 6);
    for (const auto& p : stricter.plans)
        EXPECT_TRUE(std::find(base.plans.begin(), base.plans.end(), p) != base.plans.end());
}

TEST(Planner, EnumerationResourceLimit) {
    auto f = support::river();
    SearchConfig c;
    c.max_expansions = 5;
    EXPECT_EQ(enumerate_plans(f.task, c, 8).status, SearchStatus::ResourceLimit);
}

TEST(PlanText, ParsesNumberedStepsAndComments) {
    auto steps = parse_plan_text(support::read_fixture("river-llm.plan"));
    ASSERT_EQ(steps.size(), 7u);
    EXPECT_EQ(steps[0].label(), "(row_with goat left right)");
    EXPECT_EQ(steps[0].line, 3u);
    EXPECT_EQ(steps[6].label(), "(row_with goat left right)");
}

TEST(PlanText, FormatRoundTrips) {
    auto f = support::river();
    auto plan = *solve(f.task, constrained(f)).plan;
    for (bool numbered : {false, true}) {
        auto steps = parse_plan_text(format_plan(plan, numbered));
        ASSERT_EQ(steps.size(), plan.cost());
        for (std::size_t i = 0; i < steps.size(); ++i)
            EXPECT_EQ(steps[i].label(), plan.steps[i].label());
    }
}

TEST(PlanText, MalformedStepsCarryPosition) {
    struct Case {
        const char* text;
        SourcePos pos;
    };
    const Case cases[] = {
        {"(move a b)\n  move a b\n", {2, 3}},
        {"(move a b)\n(move (a) b)", {2, 7}},
        {"1: (move a\n", {1, 4}},
        {"()", {1, 1}},
    };
    for (const auto& c : cases) {
        try {
            parse_plan_text(c.text);
            ADD_FAILURE() << "accepted " << c.text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.pos(), c.pos) << c.text << " -> " << e.what();
        }
    }
}
