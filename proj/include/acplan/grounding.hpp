#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acplan/error.hpp"
#include "acplan/pddl.hpp"
#include "acplan/state.hpp"

namespace acplan {

struct GroundLiteral {
    bool positive = true;
    GroundAtom atom;

    std::string to_string() const;
};

/// An action schema instantiated with objects.
struct GroundAction {
    std::string schema;
    std::vector<std::string> args;
    /// Precondition in declaration order; pre_pos/pre_neg split the same literals.
    std::vector<GroundLiteral> precondition;
    std::vector<GroundAtom> pre_pos;
    std::vector<GroundAtom> pre_neg;
    std::vector<GroundAtom> add;
    std::vector<GroundAtom> del;

    /// "(schema arg1 arg2 ...)"
    std::string label() const;

    friend bool operator==(const GroundAction& a, const GroundAction& b) {
        return a.schema == b.schema && a.args == b.args;
    }
    friend auto operator<=>(const GroundAction& a, const GroundAction& b) {
        if (auto c = a.schema <=> b.schema; c != 0)
            return c;
        return a.args <=> b.args;
    }
};

/// Sorted object names per type. The root type `object` lists every object.
using ObjectsByType = std::map<std::string, std::vector<std::string>, std::less<>>;

/// Variable -> object binding used while evaluating quantified formulas.
using Binding = std::map<std::string, std::string, std::less<>>;

struct GroundOptions {
    /// Drop ground actions whose static preconditions are false in init.
    bool prune_static = true;
};

struct GroundedTask {
    DomainAst domain;
    ProblemAst problem;
    ObjectTypes object_type;
    ObjectsByType objects_by_type;
    /// Deduplicated and sorted by (schema, args).
    std::vector<GroundAction> actions;
    State init;
    Formula goal;
    /// Predicates that occur in no effect of any schema.
    std::set<std::string, std::less<>> static_predicates;

    const GroundAction* find(std::string_view schema, const std::vector<std::string>& args) const;
};

/// Raised by apply() when a precondition literal does not hold.
class PreconditionError : public Error {
public:
    PreconditionError(std::string action, std::string literal)
        : Error("precondition " + literal + " of " + action + " does not hold"),
          action_(std::move(action)), literal_(std::move(literal)) {}

    const std::string& action() const noexcept { return action_; }
    const std::string& literal() const noexcept { return literal_; }

private:
    std::string action_;
    std::string literal_;
};

/// Full Cartesian grounding filtered by parameter types, then (optionally)
/// by static preconditions. Throws GroundingError when the goal quantifies
/// over a type that has no objects.
GroundedTask ground(const DomainAst& domain, const ProblemAst& problem, GroundOptions options = {});

/// Instantiates one schema directly, independent of static pruning. Throws
/// Error for an unknown schema, wrong arity, undeclared object or ill-typed
/// argument.
GroundAction instantiate(const GroundedTask& task, std::string_view schema,
                         const std::vector<std::string>& args);

/// Every type-correct instantiation of every schema, sorted; no static pruning.
std::vector<GroundAction> all_groundings(const GroundedTask& task);

/// Closed-world evaluation. Quantifiers range over `objects`; `binding`
/// supplies values for free variables.
bool evaluate(const Formula& f, const State& state, const ObjectsByType& objects,
              const Binding& binding = {});

/// For a false formula, the assignment of its outermost forall variables that
/// makes the body false (first in object order). Empty binding when the
/// formula is false without an outer quantifier; nullopt when it holds.
std::optional<Binding> falsifying_binding(const Formula& f, const State& state,
                                          const ObjectsByType& objects);

/// First precondition literal that fails in `state`, rendered as PDDL.
std::optional<std::string> first_failing_precondition(const GroundAction& a, const State& state);
bool applicable(const GroundAction& a, const State& state);

/// Delete-before-add successor; throws PreconditionError when `a` is not applicable.
State apply(const State& state, const GroundAction& a);
/// Same effect semantics without the precondition check.
State apply_unchecked(const State& state, const GroundAction& a);

GroundAtom bind_atom(const Atom& atom, const Binding& binding);

}  // namespace acplan
