#pragma once

// Synthetic training data: labeled access-decision logs and (problem, plan,
// label) corpora derived from a grounded task and its constraint policy.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "acplan/decision_log.hpp"
#include "acplan/grounding.hpp"
#include "acplan/oracle.hpp"
#include "acplan/planner.hpp"
#include "acplan/policy.hpp"
#include "acplan/validator.hpp"

namespace acplan {

enum class GenMode { Logs, PlansForward, PlansReverse, PlansInvalid };

enum class MutationKind {
    DropStep,
    SwapDependent,     ///< swap two adjacent steps where the second relies on the first
    SubstituteObject,  ///< replace one argument so that a precondition breaks
    InsertDenied,      ///< insert an applicable action the policy denies
};

std::string_view to_string(GenMode m);
/// Accepts "logs", "plans-forward", "plans-reverse", "plans-invalid" and the
/// short forms "forward", "reverse", "invalid".
GenMode parse_gen_mode(std::string_view s);
std::string_view to_string(MutationKind k);
/// Accepts "drop", "swap", "substitute", "insert-denied".
MutationKind parse_mutation_kind(std::string_view s);

inline const std::set<MutationKind> kAllMutations{
    MutationKind::DropStep, MutationKind::SwapDependent, MutationKind::SubstituteObject,
    MutationKind::InsertDenied};

struct GenSpec {
    GenMode mode = GenMode::Logs;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    /// Walk length in reverse mode.
    std::size_t depth = 3;
    std::set<MutationKind> mutation_kinds = kAllMutations;
    /// Logs: alternate allow and deny ground truths.
    bool balanced = false;
    /// Logs: restart the state walk from init after this many steps.
    std::size_t walk_length = 8;
    /// Forward mode: search budget per variant.
    std::size_t max_expansions = 100'000;
    /// Item attempts per emitted item before the run gives up.
    std::size_t max_attempts_per_item = 50;
    /// Dead-end resamples per reverse walk.
    std::size_t max_walk_retries = 20;
    /// Worker threads for plan generation; output does not depend on it.
    std::size_t workers = 1;
};

/// Throws Error when the spec is unusable for its mode.
void check_spec(const GenSpec& spec);

enum class Label { Valid, Invalid };
enum class ItemProvenance { Forward, Reverse, Mutated };

std::string_view to_string(Label l);
std::string_view to_string(ItemProvenance p);

struct CorpusItem {
    std::size_t id = 0;
    ProblemAst problem;
    Plan plan;
    Label label = Label::Valid;
    /// Failure kind for invalid items, as certified by the validator.
    std::optional<FailureKind> kind;
    ItemProvenance provenance = ItemProvenance::Forward;
    /// Per-item seed; regenerating from it reproduces the item.
    std::uint64_t seed = 0;
    std::optional<MutationKind> mutation;
};

struct GenStats {
    std::size_t attempts = 0;
    std::size_t emitted = 0;
    /// Forward variants without a plan (unsolvable or over budget).
    std::size_t skipped_unsolvable = 0;
    /// Mutants the validator still accepts, or mutations with no candidate site.
    std::size_t discarded_still_valid = 0;
    std::size_t dead_end_resamples = 0;
    /// Items dropped because the validator disagreed with the construction.
    std::size_t certification_failures = 0;
    std::chrono::duration<double> wall_time{0};
};

struct CorpusResult {
    std::vector<CorpusItem> items;
    GenStats stats;
};

/// (predicate, argument position) pairs that some schema changes by deleting
/// one atom and adding the same atom with only that argument replaced, e.g.
/// the location slot of `at`.
std::vector<std::pair<std::string, std::size_t>> movable_positions(const DomainAst& domain);

/// Replaces the movable argument of every matching init atom with a random
/// object of the slot's declared type.
State perturb_init(const GroundedTask& task, std::uint64_t seed);

/// `task` with a different initial state (and optionally goal); grounding
/// and static facts are reused.
GroundedTask with_init(const GroundedTask& task, State init, std::optional<Formula> goal = {});

/// Samples (state, action) queries: states come from a seeded constraint-
/// respecting random walk, actions uniformly from every type-correct ground
/// action. Ground truth is the symbolic verdict, `verdict` that of `oracle`.
/// Records are written to `sink` when given and returned in any case.
std::vector<DecisionRecord> gen_logs(const GroundedTask& task, const ConstraintPolicy& policy,
                                     const GenSpec& spec, const ConstraintOracle& oracle,
                                     DecisionLogWriter* sink = nullptr);

/// Perturbs the init, solves each variant by BFS under the policy, emits
/// (problem, plan, valid).
CorpusResult gen_plans_forward(const GroundedTask& task, const ConstraintPolicy& policy,
                               const GenSpec& spec);

/// Walks `depth` constraint-respecting actions from a perturbed init without
/// revisiting a state; the walk becomes the plan and the atoms it changed
/// become the goal.
CorpusResult gen_plans_reverse(const GroundedTask& task, const ConstraintPolicy& policy,
                               const GenSpec& spec);

/// Mutates the task's BFS plan, cycling through spec.mutation_kinds, and
/// keeps the mutants the validator rejects. Throws Error when the task has
/// no plan.
CorpusResult gen_plans_invalid(const GroundedTask& task, const ConstraintPolicy& policy,
                               const GenSpec& spec);

/// Dispatches on spec.mode (not Logs).
CorpusResult gen_plans(const GroundedTask& task, const ConstraintPolicy& policy,
                       const GenSpec& spec);

/// {id, domain_text, problem_text, plan_text, label, kind?, provenance, seed}
nlohmann::ordered_json to_json(const CorpusItem& item, const DomainAst& domain);
void write_corpus(std::ostream& out, const std::vector<CorpusItem>& items, const DomainAst& domain);

/// Verdict quality against ground truth, with allow as the positive class.
struct LogMetrics {
    std::size_t total = 0;
    std::size_t true_allow = 0;
    std::size_t false_allow = 0;
    std::size_t true_deny = 0;
    std::size_t false_deny = 0;

    double accuracy() const;
    double precision() const;
    double recall() const;
};

LogMetrics log_metrics(const std::vector<DecisionRecord>& records);

void write_metrics_csv(std::ostream& out, const LogMetrics& m);
void write_stats_csv(std::ostream& out, const GenStats& s, GenMode mode);

}  // namespace acplan
