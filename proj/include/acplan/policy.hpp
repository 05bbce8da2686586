#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "acplan/pddl.hpp"

namespace acplan {

/// A rule gating one action schema on a literal over the schema's parameters
/// (and domain/problem objects).
struct ActionRule {
    enum class Kind {
        Require,   ///< deny unless the literal holds
        Forbid,    ///< deny when the literal holds
        DenyWhen,  ///< attribute denial: deny when the atom holds of an argument
    };

    std::string id;
    Kind kind = Kind::Forbid;
    std::string action;
    Literal literal;

    friend bool operator==(const ActionRule&, const ActionRule&) = default;
};

/// A closed formula that must hold in every state the plan moves into.
/// `message` may mention the variables of the outermost forall; they are
/// replaced by the falsifying objects when the invariant is reported.
struct StateInvariant {
    std::string id;
    std::string message;
    Formula formula;

    friend bool operator==(const StateInvariant&, const StateInvariant&) = default;
};

/// Access-control layer over a planning domain.
///
/// Text form:
///
///     (policy
///       (deny-when (personal ?obj) :action clean_from_table :id personal-object)
///       (forbid (remove_loc ?to) :action move)
///       (require (at ?r ?from) :action move)
///       (invariant :id safe :message "..." <formula>))
///
/// Rule variables are the parameter names of the named action schema.
struct ConstraintPolicy {
    /// Activity rules and attribute denials, in declaration order.
    std::vector<ActionRule> action_rules;
    std::vector<StateInvariant> state_invariants;

    bool empty() const { return action_rules.empty() && state_invariants.empty(); }

    friend bool operator==(const ConstraintPolicy&, const ConstraintPolicy&) = default;
};

/// Parses and checks a policy against `domain`. Rules naming contextual or
/// current (execution-time) conditions are rejected.
ConstraintPolicy parse_policy(std::string_view text, const DomainAst& domain);

/// Canonical text form; parse_policy(to_text(p)) == p.
std::string to_text(const ConstraintPolicy& policy);

/// Throws PolicyError if a rule references an object missing from `objects`.
void check_policy_objects(const ConstraintPolicy& policy, const ObjectTypes& objects);

std::string_view to_string(ActionRule::Kind kind);

}  // namespace acplan
