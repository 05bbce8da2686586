#include "acplan/oracle.hpp"

#include <algorithm>
#include <cctype>

#include "acplan/random.hpp"

namespace acplan {

namespace {

constexpr std::size_t kConstant = static_cast<std::size_t>(-1);

bool replace_variable(std::string& text, std::string_view var, std::string_view value) {
    bool changed = false;
    std::size_t pos = 0;
    while ((pos = text.find(var, pos)) != std::string::npos) {
        std::size_t end = pos + var.size();
        bool boundary = end >= text.size() ||
                        !(std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_' ||
                          text[end] == '-');
        if (!boundary) {
            pos = end;
            continue;
        }
        text.replace(pos, var.size(), value);
        pos += value.size();
        changed = true;
    }
    return changed;
}

}  // namespace

std::string_view to_string(Verdict v) {
    return v == Verdict::Allow ? "allow" : "deny";
}

Verdict parse_verdict(std::string_view s) {
    if (s == "allow")
        return Verdict::Allow;
    if (s == "deny")
        return Verdict::Deny;
    throw Error("invalid verdict '" + std::string(s) + "' (expected allow or deny)");
}

AccessDecision AccessDecision::allow(std::string oracle_id) {
    AccessDecision d;
    d.oracle_id = std::move(oracle_id);
    return d;
}

std::string render_invariant_message(const StateInvariant& inv, const Binding& binding) {
    if (inv.message.empty()) {
        std::string out = "invariant " + inv.id + " violated";
        if (!binding.empty()) {
            out += " for";
            for (const auto& [var, value] : binding)
                out += " " + var + "=" + value;
        }
        return out;
    }
    std::string text = inv.message;
    // Longest names first so ?s does not clobber ?side.
    std::vector<std::pair<std::string, std::string>> vars(binding.begin(), binding.end());
    std::sort(vars.begin(), vars.end(),
              [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    for (const auto& [var, value] : vars)
        replace_variable(text, var, value);
    return text;
}

// ---------------------------------------------------------------------------

SymbolicOracle::SymbolicOracle(ConstraintPolicy policy, const GroundedTask& task)
    : policy_(std::move(policy)), objects_(task.objects_by_type) {
    check_policy_objects(policy_, task.object_type);
    for (const auto& rule : policy_.action_rules) {
        const ActionSchema* schema = task.domain.find_action(rule.action);
        if (schema == nullptr)
            throw PolicyError("rule '" + rule.id + "' names unknown action '" + rule.action + "'");
        CompiledRule c{&rule, {}};
        for (const auto& term : rule.literal.atom.args) {
            if (!is_variable(term)) {
                c.param_of_arg.push_back(kConstant);
                continue;
            }
            auto idx = schema->param_index(term);
            if (!idx)
                throw PolicyError("rule '" + rule.id + "' uses '" + term +
                                  "', which is not a parameter of '" + rule.action + "'");
            c.param_of_arg.push_back(*idx);
        }
        compiled_.push_back(std::move(c));
    }
}

AccessDecision SymbolicOracle::check_action(const State& state, const GroundAction& action) const {
    for (const auto& c : compiled_) {
        const ActionRule& rule = *c.rule;
        if (rule.action != action.schema)
            continue;
        GroundAtom atom;
        atom.predicate = rule.literal.atom.predicate;
        for (std::size_t i = 0; i < c.param_of_arg.size(); ++i)
            atom.args.push_back(c.param_of_arg[i] == kConstant ? rule.literal.atom.args[i]
                                                               : action.args[c.param_of_arg[i]]);
        bool literal_holds = state.contains(atom) == rule.literal.positive;
        bool denied = rule.kind == ActionRule::Kind::Require ? !literal_holds : literal_holds;
        if (!denied)
            continue;
        AccessDecision d;
        d.verdict = Verdict::Deny;
        d.reason = rule.id;
        d.oracle_id = id();
        d.source = DenialSource::Activity;
        std::string lit = rule.literal.positive ? atom.to_string() : "(not " + atom.to_string() + ")";
        if (rule.kind == ActionRule::Kind::Require)
            d.detail = action.label() + " requires " + lit;
        else
            d.detail = action.label() + " is denied while " + lit + " holds";
        return d;
    }
    return AccessDecision::allow(id());
}

AccessDecision SymbolicOracle::check_state(const State& state) const {
    for (const auto& inv : policy_.state_invariants) {
        if (evaluate(inv.formula, state, objects_))
            continue;
        auto witness = falsifying_binding(inv.formula, state, objects_);
        if (!witness)
            continue;
        AccessDecision d;
        d.verdict = Verdict::Deny;
        d.reason = inv.id;
        d.oracle_id = id();
        d.source = DenialSource::Invariant;
        d.detail = render_invariant_message(inv, *witness);
        return d;
    }
    return AccessDecision::allow(id());
}

AccessDecision SymbolicOracle::decide(const State& state, const GroundAction& action,
                                      std::uint64_t) const {
    AccessDecision d = check_action(state, action);
    if (!d.allowed() || policy_.state_invariants.empty())
        return d;
    return check_state(apply_unchecked(state, action));
}

AccessDecision symbolic_decide(const ConstraintPolicy& policy, const GroundedTask& task,
                               const State& state, const GroundAction& action) {
    return SymbolicOracle(policy, task).decide(state, action, 0);
}

// ---------------------------------------------------------------------------

NoisyOracle::NoisyOracle(std::shared_ptr<const ConstraintOracle> inner, double epsilon,
                         std::uint64_t seed)
    : inner_(std::move(inner)), epsilon_(epsilon), seed_(seed) {
    if (!inner_)
        throw Error("noisy oracle needs an inner oracle");
    if (!(epsilon >= 0.0 && epsilon <= 0.5))
        throw Error("noise epsilon must lie in [0, 0.5], got " + std::to_string(epsilon));
}

std::string NoisyOracle::id() const {
    return "simulated-dlbac";
}

AccessDecision NoisyOracle::decide(const State& state, const GroundAction& action,
                                   std::uint64_t query_id) const {
    AccessDecision d = inner_->decide(state, action, query_id);
    d.oracle_id = id();
    if (counter_uniform(seed_, query_id) >= epsilon_)
        return d;
    if (d.allowed()) {
        d.verdict = Verdict::Deny;
        d.reason = "simulated-dlbac";
        d.source = DenialSource::Simulated;
        d.detail = action.label() + " denied by the simulated learned model";
    } else {
        d.verdict = Verdict::Allow;
        d.reason = "simulated-dlbac";
        d.source = DenialSource::None;
        d.detail.clear();
    }
    return d;
}

AccessDecision NoisyOracle::check_state(const State& state) const {
    return inner_->check_state(state);
}

// ---------------------------------------------------------------------------

AllOfOracle::AllOfOracle(std::vector<std::shared_ptr<const ConstraintOracle>> members)
    : members_(std::move(members)) {
    if (members_.empty())
        throw Error("combined oracle needs at least one member");
}

AccessDecision AllOfOracle::decide(const State& state, const GroundAction& action,
                                   std::uint64_t query_id) const {
    AccessDecision last;
    for (const auto& m : members_) {
        last = m->decide(state, action, query_id);
        if (!last.allowed())
            return last;
    }
    return AccessDecision::allow(id());
}

AccessDecision AllOfOracle::check_state(const State& state) const {
    for (const auto& m : members_) {
        auto d = m->check_state(state);
        if (!d.allowed())
            return d;
    }
    return AccessDecision::allow(id());
}

bool AllOfOracle::deterministic() const {
    return std::all_of(members_.begin(), members_.end(),
                       [](const auto& m) { return m->deterministic(); });
}

std::optional<std::uint64_t> AllOfOracle::seed() const {
    for (const auto& m : members_)
        if (auto s = m->seed())
            return s;
    return std::nullopt;
}

std::string AllOfOracle::id() const {
    std::string out;
    for (const auto& m : members_) {
        if (!out.empty())
            out += '+';
        out += m->id();
    }
    return out;
}

}  // namespace acplan
