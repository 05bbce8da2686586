#include "acplan/validator.hpp"

namespace acplan {

namespace {

FailedStep failure(std::size_t index, std::string action, FailureKind kind, std::string detail,
                   std::string rule = {}) {
    return FailedStep{index, std::move(action), kind, std::move(detail), std::move(rule)};
}

void record(ValidationReport& report, FailedStep f) {
    if (!report.failed_step)
        report.failed_step = f;
    report.violations.push_back(std::move(f));
}

}  // namespace

std::string_view to_string(FailureKind k) {
    switch (k) {
    case FailureKind::Parse: return "parse";
    case FailureKind::UnknownAction: return "unknown-action";
    case FailureKind::Precondition: return "precondition";
    case FailureKind::ConstraintDenied: return "constraint-denied";
    case FailureKind::InvariantViolated: return "invariant-violated";
    case FailureKind::GoalUnsatisfied: return "goal-unsatisfied";
    }
    return "unknown";
}

FailureKind parse_failure_kind(std::string_view s) {
    for (auto k : {FailureKind::Parse, FailureKind::UnknownAction, FailureKind::Precondition,
                   FailureKind::ConstraintDenied, FailureKind::InvariantViolated,
                   FailureKind::GoalUnsatisfied})
        if (to_string(k) == s)
            return k;
    throw Error("unknown failure kind '" + std::string(s) + "'");
}

ValidationReport validate(const GroundedTask& task, const ConstraintOracle& oracle,
                          std::string_view plan_text, ValidateOptions options) {
    ValidationReport report;
    State state = task.init;
    report.trace.push_back(state.digest());

    std::vector<PlanStep> steps;
    try {
        steps = parse_plan_text(plan_text);
    } catch (const ParseError& e) {
        // Number the broken line as the step it would have been.
        std::size_t index = 1;
        try {
            std::string_view prefix = plan_text;
            std::size_t offset = 0;
            for (std::size_t line = 1; line < e.pos().line; ++line)
                offset = prefix.find('\n', offset) + 1;
            index = parse_plan_text(prefix.substr(0, offset)).size() + 1;
        } catch (const ParseError&) {
        }
        record(report, failure(index, {}, FailureKind::Parse, e.what()));
        return report;
    }
    report.steps = steps.size();

    std::uint64_t query_id = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const PlanStep& step = steps[i];
        const std::size_t index = i + 1;
        std::optional<GroundAction> instantiated;
        const GroundAction* found = task.find(step.schema, step.args);
        if (found == nullptr) {
            try {
                instantiated = instantiate(task, step.schema, step.args);
            } catch (const Error& e) {
                record(report, failure(index, step.label(), FailureKind::UnknownAction, e.what()));
                return report;
            }
            found = &*instantiated;
        }
        const GroundAction& action = *found;
        if (auto literal = first_failing_precondition(action, state)) {
            record(report, failure(index, action.label(), FailureKind::Precondition,
                                   "precondition " + *literal + " does not hold", *literal));
            return report;
        }
        State next = apply_unchecked(state, action);
        bool failed = false;
        AccessDecision verdict = oracle.decide(state, action, query_id++);
        if (!verdict.allowed()) {
            auto kind = verdict.source == DenialSource::Invariant ? FailureKind::InvariantViolated
                                                                  : FailureKind::ConstraintDenied;
            record(report, failure(index, action.label(), kind, verdict.detail, verdict.reason));
            failed = true;
        } else if (AccessDecision inv = oracle.check_state(next); !inv.allowed()) {
            record(report, failure(index, action.label(), FailureKind::InvariantViolated, inv.detail,
                                   inv.reason));
            failed = true;
        }
        if (failed && !options.continue_past_constraints)
            return report;
        state = std::move(next);
        report.trace.push_back(state.digest());
    }

    report.goal_satisfied = evaluate(task.goal, state, task.objects_by_type);
    if (!report.goal_satisfied)
        record(report, failure(steps.size(), {}, FailureKind::GoalUnsatisfied,
                               "goal " + to_pddl(task.goal) + " does not hold after the last step"));
    report.valid = !report.failed_step.has_value();
    return report;
}

ValidationReport validate(const GroundedTask& task, const ConstraintPolicy& policy,
                          std::string_view plan_text, ValidateOptions options) {
    return validate(task, SymbolicOracle(policy, task), plan_text, options);
}

ValidationReport validate(const GroundedTask& task, const ConstraintPolicy& policy,
                          const Plan& plan, ValidateOptions options) {
    return validate(task, policy, format_plan(plan), options);
}

std::string explain(const ValidationReport& report) {
    if (report.valid)
        return "plan valid; goal satisfied in " + std::to_string(report.steps) + " steps";
    const FailedStep& f = *report.failed_step;
    std::string step = "step " + std::to_string(f.index);
    switch (f.kind) {
    case FailureKind::Parse:
        return "plan invalid: cannot read " + step + ": " + f.detail;
    case FailureKind::UnknownAction:
        return "plan invalid at " + step + ": " + f.action + " is not an action of this task (" +
               f.detail + ")";
    case FailureKind::Precondition:
        return "plan invalid at " + step + ": " + f.action + " is not applicable, " + f.detail;
    case FailureKind::ConstraintDenied:
        return "plan invalid at " + step + ": " + f.action + " is denied by rule " + f.rule + " (" +
               f.detail + ")";
    case FailureKind::InvariantViolated:
        return "plan invalid at " + step + ": " + f.action + " violates invariant " + f.rule +
               " (" + f.detail + ")";
    case FailureKind::GoalUnsatisfied:
        return "plan invalid: all " + std::to_string(report.steps) +
               " steps execute but the goal is not satisfied (" + f.detail + ")";
    }
    return "plan invalid";
}

nlohmann::ordered_json to_json(const ValidationReport& report) {
    auto step_json = [](const FailedStep& f) {
        nlohmann::ordered_json j;
        j["index"] = f.index;
        j["action"] = f.action;
        j["kind"] = to_string(f.kind);
        j["detail"] = f.detail;
        j["rule"] = f.rule;
        return j;
    };
    nlohmann::ordered_json j;
    j["verdict"] = report.valid ? "valid" : "invalid";
    j["failed_step"] = report.failed_step ? step_json(*report.failed_step) : nlohmann::ordered_json();
    j["goal_satisfied"] = report.goal_satisfied;
    j["trace"] = report.trace;
    if (report.violations.size() > 1) {
        auto all = nlohmann::ordered_json::array();
        for (const auto& v : report.violations)
            all.push_back(step_json(v));
        j["violations"] = all;
    }
    return j;
}

}  // namespace acplan
