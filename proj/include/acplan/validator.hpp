#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "acplan/grounding.hpp"
#include "acplan/oracle.hpp"
#include "acplan/planner.hpp"
#include "acplan/policy.hpp"

namespace acplan {

enum class FailureKind {
    Parse,
    UnknownAction,
    Precondition,
    ConstraintDenied,
    InvariantViolated,
    GoalUnsatisfied,
};

std::string_view to_string(FailureKind k);
FailureKind parse_failure_kind(std::string_view s);

struct FailedStep {
    /// 1-based step number; for goal-unsatisfied, the number of executed steps.
    std::size_t index = 0;
    /// Step as written, e.g. "(row_with goat left right)"; empty for goal failures.
    std::string action;
    FailureKind kind = FailureKind::Parse;
    std::string detail;
    /// Violated rule or invariant id, or the failing precondition literal.
    std::string rule;

    friend bool operator==(const FailedStep&, const FailedStep&) = default;
};

struct ValidationReport {
    bool valid = false;
    std::optional<FailedStep> failed_step;
    bool goal_satisfied = false;
    /// Digest of the initial state, then of the state after every executed step.
    std::vector<std::string> trace;
    /// Every failure seen; more than one only with continue_past_constraints.
    std::vector<FailedStep> violations;
    std::size_t steps = 0;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

struct ValidateOptions {
    /// Keep simulating after constraint/invariant failures (reporting only;
    /// the verdict still reflects the first failure).
    bool continue_past_constraints = false;
};

/// Simulates `plan_text` from the task's initial state. Each step is checked
/// for: a known, well-typed action; its PDDL preconditions; the oracle
/// verdict; the policy invariants on the successor state. The goal is
/// checked after the last step. Never throws on bad plan text.
ValidationReport validate(const GroundedTask& task, const ConstraintOracle& oracle,
                          std::string_view plan_text, ValidateOptions options = {});
ValidationReport validate(const GroundedTask& task, const ConstraintPolicy& policy,
                          std::string_view plan_text, ValidateOptions options = {});
ValidationReport validate(const GroundedTask& task, const ConstraintPolicy& policy,
                          const Plan& plan, ValidateOptions options = {});

/// Deterministic one-paragraph rendering of a report.
std::string explain(const ValidationReport& report);

nlohmann::ordered_json to_json(const ValidationReport& report);

}  // namespace acplan
