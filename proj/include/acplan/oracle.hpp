#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acplan/grounding.hpp"
#include "acplan/policy.hpp"

namespace acplan {

enum class Verdict { Allow, Deny };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

/// Which part of a policy produced a denial.
enum class DenialSource {
    None,       ///< allowed
    Activity,   ///< activity rule or attribute denial on the action itself
    Invariant,  ///< the successor state violates a state invariant
    Simulated,  ///< verdict flipped by a simulated learned model
};

struct AccessDecision {
    Verdict verdict = Verdict::Allow;
    /// Violated rule id, or "ok".
    std::string reason = "ok";
    std::string oracle_id;
    DenialSource source = DenialSource::None;
    /// Human-readable account of the violation; empty when allowed.
    std::string detail;

    bool allowed() const { return verdict == Verdict::Allow; }

    static AccessDecision allow(std::string oracle_id);
};

/// Decides whether an activity (ground action) may run in a state and whether
/// a state is legal. `query_id` keys non-deterministic oracles so that a
/// replayed query sequence reproduces the same verdicts.
class ConstraintOracle {
public:
    virtual ~ConstraintOracle() = default;

    virtual AccessDecision decide(const State& state, const GroundAction& action,
                                  std::uint64_t query_id) const = 0;
    virtual AccessDecision check_state(const State& state) const = 0;

    virtual bool deterministic() const = 0;
    virtual std::optional<std::uint64_t> seed() const { return std::nullopt; }
    virtual std::string id() const = 0;
};

/// Evaluates a ConstraintPolicy exactly. Activity rules and attribute
/// denials are checked in declaration order, then the invariants against the
/// successor state.
class SymbolicOracle final : public ConstraintOracle {
public:
    /// Throws PolicyError when the policy names objects the task does not declare.
    SymbolicOracle(ConstraintPolicy policy, const GroundedTask& task);

    AccessDecision decide(const State& state, const GroundAction& action,
                          std::uint64_t query_id = 0) const override;
    AccessDecision check_state(const State& state) const override;
    bool deterministic() const override { return true; }
    std::string id() const override { return "symbolic"; }

    /// Activity rules only, without the successor-invariant check.
    AccessDecision check_action(const State& state, const GroundAction& action) const;

    const ConstraintPolicy& policy() const noexcept { return policy_; }

private:
    struct CompiledRule {
        const ActionRule* rule;
        /// Per literal argument: parameter index, or npos for an object constant.
        std::vector<std::size_t> param_of_arg;
    };

    ConstraintPolicy policy_;
    ObjectsByType objects_;
    std::vector<CompiledRule> compiled_;
};

/// Convenience wrapper building a SymbolicOracle for one query.
AccessDecision symbolic_decide(const ConstraintPolicy& policy, const GroundedTask& task,
                               const State& state, const GroundAction& action);

/// Simulated learned access-control model: the inner verdict is flipped with
/// probability `epsilon`, independently per query, from a counter-based draw
/// keyed on (seed, query_id). State checks are passed through unchanged.
class NoisyOracle final : public ConstraintOracle {
public:
    /// Throws Error unless 0 <= epsilon <= 0.5.
    NoisyOracle(std::shared_ptr<const ConstraintOracle> inner, double epsilon, std::uint64_t seed);

    AccessDecision decide(const State& state, const GroundAction& action,
                          std::uint64_t query_id) const override;
    AccessDecision check_state(const State& state) const override;
    bool deterministic() const override { return epsilon_ == 0.0; }
    std::optional<std::uint64_t> seed() const override { return seed_; }
    std::string id() const override;

    double epsilon() const noexcept { return epsilon_; }

private:
    std::shared_ptr<const ConstraintOracle> inner_;
    double epsilon_;
    std::uint64_t seed_;
};

/// Runs several oracles and denies if any of them denies (first denial wins).
class AllOfOracle final : public ConstraintOracle {
public:
    explicit AllOfOracle(std::vector<std::shared_ptr<const ConstraintOracle>> members);

    AccessDecision decide(const State& state, const GroundAction& action,
                          std::uint64_t query_id) const override;
    AccessDecision check_state(const State& state) const override;
    bool deterministic() const override;
    std::optional<std::uint64_t> seed() const override;
    std::string id() const override;

private:
    std::vector<std::shared_ptr<const ConstraintOracle>> members_;
};

/// Renders an invariant message, substituting the falsifying binding.
std::string render_invariant_message(const StateInvariant& inv, const Binding& binding);

}  // namespace acplan
