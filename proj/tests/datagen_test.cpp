#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "acplan/datagen.hpp"
#include "acplan/decision_log.hpp"
#include "support/fixtures.hpp"

using namespace acplan;

namespace {

GenSpec spec_for(GenMode mode, std::size_t count, std::uint64_t seed) {
    GenSpec s;
    s.mode = mode;
    s.count = count;
    s.seed = seed;
    return s;
}

/// Re-validates an item from its serialized problem and plan text alone.
void expect_certified(const support::Fixture& f, const CorpusItem& item) {
    auto problem = parse_problem(pretty_print(item.problem), f.domain);
    auto task = ground(f.domain, problem);
    auto report = validate(task, f.policy, format_plan(item.plan));
    ASSERT_EQ(report.valid, item.label == Label::Valid) << format_plan(item.plan);
    if (!report.valid) {
        ASSERT_TRUE(item.kind.has_value());
        ASSERT_EQ(report.failed_step->kind, *item.kind);
    } else {
        ASSERT_FALSE(item.kind.has_value());
    }
}

std::string corpus_text(const support::Fixture& f, const CorpusResult& r) {
    std::ostringstream out;
    write_corpus(out, r.items, f.domain);
    return out.str();
}

}  // namespace

TEST(Datagen, MovablePositions) {
    auto care = support::care_home();
    EXPECT_EQ(movable_positions(care.domain),
              (std::vector<std::pair<std::string, std::size_t>>{{"at", 1}}));
    auto river = support::river();
    EXPECT_EQ(movable_positions(river.domain),
              (std::vector<std::pair<std::string, std::size_t>>{{"at", 1}}));
}

TEST(Datagen, PerturbedInitKeepsStaticFactsAndTypes) {
    auto f = support::care_home();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        State s = perturb_init(f.task, seed);
        EXPECT_EQ(s.size(), f.task.init.size());
        for (const auto& atom : s) {
            if (atom.predicate == "at")
                EXPECT_EQ(f.task.object_type.at(atom.args[1]), "location");
            else
                EXPECT_TRUE(f.task.init.contains(atom));
        }
        EXPECT_EQ(perturb_init(f.task, seed), s);
    }
}

TEST(Datagen, ForwardItemsAreCertifiedValid) {
    auto f = support::care_home();
    auto r = gen_plans_forward(f.task, f.policy, spec_for(GenMode::PlansForward, 10, 1));
    ASSERT_EQ(r.items.size(), 10u);
    for (const auto& item : r.items) {
        EXPECT_EQ(item.label, Label::Valid);
        EXPECT_EQ(item.provenance, ItemProvenance::Forward);
        expect_certified(f, item);
    }
    EXPECT_EQ(r.stats.emitted, 10u);
    EXPECT_EQ(r.stats.attempts, r.stats.emitted + r.stats.skipped_unsolvable + r.stats.certification_failures);
}

TEST(Datagen, DiaryNeverCleaned) {
    auto f = support::care_home();
    auto r = gen_plans_forward(f.task, f.policy, spec_for(GenMode::PlansForward, 100, 9));
    ASSERT_EQ(r.items.size(), 100u);
    for (const auto& item : r.items)
        for (const auto& s : item.plan.steps)
            if (s.schema == "clean_from_table") {
                ASSERT_NE(s.args[2], "diary");
            }
}

TEST(Datagen, NoMovableObjectsGivesEmptyPlans) {
    auto d = parse_domain("(define (domain flat) (:predicates (lit)) "
                          "(:action toggle :parameters () :precondition (lit) :effect (not (lit))))");
    auto p = parse_problem("(define (problem q) (:domain flat) (:init (lit)) (:goal (lit)))", d);
    auto task = ground(d, p);
    auto r = gen_plans_forward(task, {}, spec_for(GenMode::PlansForward, 3, 0));
    ASSERT_EQ(r.items.size(), 3u);
    for (const auto& item : r.items)
        EXPECT_TRUE(item.plan.empty());
}

TEST(Datagen, ReverseItemsValidate) {
    for (const auto& f : {support::care_home(), support::river()}) {
        for (std::size_t depth : {1u, 3u, 7u}) {
            auto spec = spec_for(GenMode::PlansReverse, 20, 4);
            spec.depth = depth;
            auto r = gen_plans_reverse(f.task, f.policy, spec);
            ASSERT_EQ(r.items.size(), 20u) << f.domain.name << " depth " << depth;
            for (const auto& item : r.items) {
                EXPECT_EQ(item.plan.cost(), depth);
                EXPECT_EQ(item.provenance, ItemProvenance::Reverse);
                expect_certified(f, item);
            }
        }
    }
}

TEST(Datagen, DepthOneGoalHoldsAfterExactlyOneAction) {
    auto f = support::river();
    auto spec = spec_for(GenMode::PlansReverse, 10, 2);
    spec.depth = 1;
    for (const auto& item : gen_plans_reverse(f.task, f.policy, spec).items) {
        auto task = ground(f.domain, item.problem);
        EXPECT_FALSE(evaluate(task.goal, task.init, task.objects_by_type));
        State after = apply(task.init, item.plan.steps.front());
        EXPECT_TRUE(evaluate(task.goal, after, task.objects_by_type));
    }
}

TEST(Datagen, DepthZeroIsRejected) {
    auto f = support::river();
    auto spec = spec_for(GenMode::PlansReverse, 1, 0);
    spec.depth = 0;
    EXPECT_THROW(gen_plans_reverse(f.task, f.policy, spec), Error);
}

TEST(Datagen, InvalidItemsCertifiedAndCoverEveryKind) {
    auto f = support::care_home();
    auto r = gen_plans_invalid(f.task, f.policy, spec_for(GenMode::PlansInvalid, 60, 3));
    ASSERT_EQ(r.items.size(), 60u);
    std::map<FailureKind, int> kinds;
    for (const auto& item : r.items) {
        EXPECT_EQ(item.label, Label::Invalid);
        EXPECT_EQ(item.provenance, ItemProvenance::Mutated);
        ASSERT_TRUE(item.mutation.has_value());
        expect_certified(f, item);
        ++kinds[*item.kind];
    }
    for (auto k : {FailureKind::Precondition, FailureKind::ConstraintDenied, FailureKind::InvariantViolated,
                   FailureKind::GoalUnsatisfied})
        EXPECT_GT(kinds[k], 0) << to_string(k);
    EXPECT_EQ(kinds[FailureKind::Parse], 0);
    EXPECT_EQ(kinds[FailureKind::UnknownAction], 0);
}

TEST(Datagen, SpecificMutations) {
    auto f = support::care_home();
    auto insert = spec_for(GenMode::PlansInvalid, 20, 8);
    insert.mutation_kinds = {MutationKind::InsertDenied};
    for (const auto& item : gen_plans_invalid(f.task, f.policy, insert).items)
        EXPECT_TRUE(*item.kind == FailureKind::ConstraintDenied || *item.kind == FailureKind::InvariantViolated)
            << to_string(*item.kind);

    // Dropping the opening move leaves the robot at start for the cleaning step.
    auto v = validate(f.task, f.policy,
                      "(clean_from_table robot table dishes remove)\n"
                      "(clean_from_table robot table newspaper remove)");
    EXPECT_EQ(v.failed_step->index, 1u);
    EXPECT_EQ(v.failed_step->kind, FailureKind::Precondition);
    // The diary lacks (non_personal diary), so its cleaning already fails the
    // schema precondition before the policy is consulted.
    v = validate(f.task, f.policy,
                 "(move robot start table)\n(clean_from_table robot table diary remove)\n");
    EXPECT_EQ(v.failed_step->index, 2u);
    EXPECT_EQ(v.failed_step->kind, FailureKind::Precondition);
}

TEST(Datagen, ZeroMutationKindsGivesNothing) {
    auto f = support::care_home();
    auto spec = spec_for(GenMode::PlansInvalid, 10, 0);
    spec.mutation_kinds.clear();
    EXPECT_TRUE(gen_plans_invalid(f.task, f.policy, spec).items.empty());
}

TEST(Datagen, CorpusIsReproducibleAndIndependentOfWorkers) {
    auto f = support::river();
    for (auto mode : {GenMode::PlansForward, GenMode::PlansReverse, GenMode::PlansInvalid}) {
        auto spec = spec_for(mode, 15, 77);
        spec.depth = 5;
        std::string a = corpus_text(f, gen_plans(f.task, f.policy, spec));
        std::string b = corpus_text(f, gen_plans(f.task, f.policy, spec));
        spec.workers = 4;
        std::string c = corpus_text(f, gen_plans(f.task, f.policy, spec));
        EXPECT_EQ(a, b);
        EXPECT_EQ(a, c);
        spec.seed = 78;
        EXPECT_NE(a, corpus_text(f, gen_plans(f.task, f.policy, spec)));
    }
}

TEST(Datagen, CorpusJsonShape) {
    auto f = support::care_home();
    auto r = gen_plans_invalid(f.task, f.policy, spec_for(GenMode::PlansInvalid, 1, 0));
    auto j = to_json(r.items.front(), f.domain);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it)
        keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"id", "domain_text", "problem_text", "plan_text", "label", "kind",
                                              "provenance", "seed"}));
    EXPECT_EQ(parse_domain(j["domain_text"].get<std::string>()), f.domain);
    auto valid = gen_plans_forward(f.task, f.policy, spec_for(GenMode::PlansForward, 1, 0));
    EXPECT_FALSE(to_json(valid.items.front(), f.domain).contains("kind"));
}

TEST(Datagen, SymbolicLogsAgreeWithGroundTruth) {
    auto f = support::care_home();
    SymbolicOracle oracle(f.policy, f.task);
    auto spec = spec_for(GenMode::Logs, 100, 5);
    std::ostringstream out;
    DecisionLogWriter sink(out);
    auto records = gen_logs(f.task, f.policy, spec, oracle, &sink);
    sink.close();
    ASSERT_EQ(records.size(), 100u);
    for (const auto& r : records) {
        EXPECT_EQ(r.verdict, r.ground_truth);
        EXPECT_EQ(r.oracle_id, "symbolic");
        EXPECT_EQ(r.seed, 5u);
        if (r.action == "clean_from_table" && r.object == "diary") {
            EXPECT_EQ(r.ground_truth, Verdict::Deny);
        }
    }
    std::istringstream in(out.str());
    EXPECT_EQ(read_decision_log(in), records);

    std::ostringstream again;
    DecisionLogWriter sink2(again);
    gen_logs(f.task, f.policy, spec, oracle, &sink2);
    sink2.close();
    EXPECT_EQ(out.str(), again.str());
}

TEST(Datagen, BalancedNoisyLogs) {
    auto f = support::care_home();
    auto symbolic = std::make_shared<SymbolicOracle>(f.policy, f.task);
    NoisyOracle noisy(symbolic, 0.1, 21);
    auto spec = spec_for(GenMode::Logs, 2000, 21);
    spec.balanced = true;
    auto records = gen_logs(f.task, f.policy, spec, noisy);
    std::size_t allow = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(records[i].ground_truth, i % 2 == 0 ? Verdict::Allow : Verdict::Deny);
        allow += records[i].ground_truth == Verdict::Allow;
    }
    EXPECT_EQ(allow, 1000u);
    auto m = log_metrics(records);
    EXPECT_EQ(m.total, 2000u);
    EXPECT_EQ(m.true_allow + m.false_deny, 1000u);
    EXPECT_NEAR(m.accuracy(), 0.9, 0.02);

    std::ostringstream csv;
    write_metrics_csv(csv, m);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')).find("accuracy") != std::string::npos, true);
}

TEST(Datagen, MetricsArithmetic) {
    std::vector<DecisionRecord> rs(4);
    rs[0].ground_truth = Verdict::Allow, rs[0].verdict = Verdict::Allow;
    rs[1].ground_truth = Verdict::Allow, rs[1].verdict = Verdict::Deny;
    rs[2].ground_truth = Verdict::Deny, rs[2].verdict = Verdict::Allow;
    rs[3].ground_truth = Verdict::Deny, rs[3].verdict = Verdict::Deny;
    auto m = log_metrics(rs);
    EXPECT_DOUBLE_EQ(m.accuracy(), 0.5);
    EXPECT_DOUBLE_EQ(m.precision(), 0.5);
    EXPECT_DOUBLE_EQ(m.recall(), 0.5);
    EXPECT_EQ(m.false_allow, 1u);
    EXPECT_EQ(m.false_deny, 1u);
}

TEST(Datagen, ModeNames) {
    EXPECT_EQ(parse_gen_mode("reverse"), GenMode::PlansReverse);
    EXPECT_EQ(parse_gen_mode("plans-invalid"), GenMode::PlansInvalid);
    EXPECT_THROW(parse_gen_mode("sideways"), Error);
    for (auto k : kAllMutations)
        EXPECT_EQ(parse_mutation_kind(to_string(k)), k);
}
