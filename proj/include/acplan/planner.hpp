#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acplan/grounding.hpp"
#include "acplan/oracle.hpp"

namespace acplan {

/// Sequence of ground actions; unit cost per step.
struct Plan {
    std::vector<GroundAction> steps;

    std::size_t cost() const noexcept { return steps.size(); }
    bool empty() const noexcept { return steps.empty(); }

    friend bool operator==(const Plan&, const Plan&) = default;
    friend auto operator<=>(const Plan& a, const Plan& b) {
        if (auto c = a.steps.size() <=> b.steps.size(); c != 0)
            return c;
        return a.steps <=> b.steps;
    }
};

enum class SearchAlgorithm {
    Bfs,             ///< shortest constraint-respecting plan
    AstarGoalCount,  ///< f = g + unsatisfied goal conjuncts; faster, not optimal
};

std::string_view to_string(SearchAlgorithm a);
/// Accepts "bfs" and "astar-goalcount".
SearchAlgorithm parse_search_algorithm(std::string_view s);

struct SearchConfig {
    SearchAlgorithm algorithm = SearchAlgorithm::Bfs;
    std::size_t max_expansions = 1'000'000;
    /// Null means unconstrained search.
    std::shared_ptr<const ConstraintOracle> oracle;
};

struct SearchStats {
    std::size_t expansions = 0;
    /// Applicable (state, action) pairs considered.
    std::size_t generated = 0;
    std::size_t pruned_by_constraints = 0;
    std::size_t duplicates = 0;
    std::chrono::duration<double> wall_time{0};
};

enum class SearchStatus { Solved, Unsolvable, ResourceLimit };

std::string_view to_string(SearchStatus s);

struct SolveResult {
    SearchStatus status = SearchStatus::Unsolvable;
    std::optional<Plan> plan;
    SearchStats stats;
};

/// Forward search from init. Actions the oracle denies, and successors that
/// violate a state invariant, are never generated. Ties break by the sorted
/// ground-action order, so results are deterministic. Throws Error when
/// max_expansions is zero.
SolveResult solve(const GroundedTask& task, const SearchConfig& config);

struct EnumerationResult {
    /// Solved when the enumeration completed.
    SearchStatus status = SearchStatus::Solved;
    /// Canonically ordered: by length, then step by step.
    std::vector<Plan> plans;
    SearchStats stats;
};

/// Every constraint-respecting plan of at most `max_len` steps that ends in a
/// goal state and never revisits a state. max_expansions bounds the number
/// of search nodes; exceeding it yields ResourceLimit with a partial list.
EnumerationResult enumerate_plans(const GroundedTask& task, const SearchConfig& config,
                                  std::size_t max_len);

/// Number of top-level goal conjuncts (after expanding and/forall) that are false.
std::size_t unsatisfied_goal_conjuncts(const Formula& goal, const State& state,
                                       const ObjectsByType& objects);

// ---------------------------------------------------------------------------
// Plan text format: one step per line, "(name arg ...)", optional "N: "
// prefix, ';' comments and blank lines ignored.

struct PlanStep {
    std::string schema;
    std::vector<std::string> args;
    std::size_t line = 0;

    std::string label() const;
};

/// Throws ParseError with the line/column of the first malformed step.
std::vector<PlanStep> parse_plan_text(std::string_view text);

std::string format_plan(const Plan& plan, bool numbered = false);

}  // namespace acplan
