#pragma once

// PDDL subset: STRIPS with typing, negative literals in preconditions, and
// disjunction/universal quantification in goals. Types are flat below the
// implicit root type `object`. Identifiers are case-insensitive and kept in
// lower case.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "acplan/sexpr.hpp"
#include "acplan/state.hpp"

namespace acplan {

inline constexpr std::string_view kRootType = "object";

inline bool is_variable(std::string_view term) { return !term.empty() && term.front() == '?'; }

/// `name - type`: action/predicate parameters, objects and constants.
struct TypedName {
    std::string name;
    std::string type;

    friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// A predicate over terms; a term is either a variable (`?x`) or an object name.
struct Atom {
    std::string predicate;
    std::vector<std::string> args;

    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
    bool positive = true;
    Atom atom;

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// Goal/invariant language: atom | not | and | or | forall.
struct Formula {
    enum class Kind { Atom, Not, And, Or, Forall };

    Kind kind = Kind::And;
    Atom atom;                         // Kind::Atom
    std::vector<TypedName> variables;  // Kind::Forall
    std::vector<Formula> children;     // Not and Forall: exactly one

    static Formula make_atom(Atom a);
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> fs);
    static Formula disjunction(std::vector<Formula> fs);
    static Formula forall(std::vector<TypedName> vars, Formula body);

    friend bool operator==(const Formula&, const Formula&) = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;

    friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Literal> precondition;
    std::vector<Atom> add;
    std::vector<Atom> del;

    std::optional<std::size_t> param_index(std::string_view variable) const;

    friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct DomainAst {
    std::string name;
    std::set<std::string> requirements;
    std::vector<std::string> types;
    std::vector<TypedName> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> actions;

    const PredicateDecl* find_predicate(std::string_view name) const;
    const ActionSchema* find_action(std::string_view name) const;
    bool has_type(std::string_view type) const;

    friend bool operator==(const DomainAst&, const DomainAst&) = default;
};

struct ProblemAst {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    State init;
    Formula goal;

    friend bool operator==(const ProblemAst&, const ProblemAst&) = default;
};

/// Object name -> type, covering domain constants and problem objects.
using ObjectTypes = std::map<std::string, std::string, std::less<>>;

/// Variable name -> type for the variables bound at some point of a formula.
using VariableScope = std::map<std::string, std::string, std::less<>>;

DomainAst parse_domain(std::string_view text);
ProblemAst parse_problem(std::string_view text, const DomainAst& domain);

/// Constants of `domain` plus objects of `problem`.
ObjectTypes object_types(const DomainAst& domain, const ProblemAst& problem);

/// Whether a value of `actual` type may fill a slot declared as `declared`.
bool type_fits(std::string_view actual, std::string_view declared);

/// Front-end helpers shared with the policy reader.
///
/// `objects` restricts non-variable terms to known objects; pass nullptr to
/// defer that check (object names are then only required to be symbols).
Atom parse_atom(const SExpr& e, const DomainAst& domain, const VariableScope& scope,
                const ObjectTypes* objects);
Literal parse_literal(const SExpr& e, const DomainAst& domain, const VariableScope& scope,
                      const ObjectTypes* objects);
/// Parses a goal-language formula. Quantified variables may not shadow
/// variables already in `scope`.
Formula parse_formula(const SExpr& e, const DomainAst& domain, const VariableScope& scope,
                      const ObjectTypes* objects);

/// Checks that every object mentioned in `f` is declared in `objects`.
void check_formula_objects(const Formula& f, const ObjectTypes& objects);

std::string to_pddl(const Atom& a);
std::string to_pddl(const Literal& l);
std::string to_pddl(const Formula& f);

/// Normalized lower-case PDDL with two-space indentation.
std::string pretty_print(const DomainAst& domain);
std::string pretty_print(const ProblemAst& problem);

}  // namespace acplan
