#include "acplan/policy.hpp"

#include <set>
#include <sstream>

namespace acplan {

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& message) {
    throw ParseError(at.pos, message);
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

bool mentions_variable(const Atom& a) {
    for (const auto& t : a.args)
        if (is_variable(t))
            return true;
    return false;
}

ActionRule parse_action_rule(const SExpr& item, ActionRule::Kind kind, const DomainAst& domain,
                             std::size_t ordinal) {
    const auto& items = item.items;
    if (items.size() < 2)
        fail(item, "missing literal in (" + items.front().text + " ...)");
    ActionRule rule;
    rule.kind = kind;
    const SExpr* action_expr = nullptr;
    for (std::size_t i = 2; i < items.size(); i += 2) {
        if (!items[i].is_symbol())
            fail(items[i], "expected a keyword, found " + describe(items[i]));
        const auto& key = items[i].text;
        if (i + 1 >= items.size() || !items[i + 1].is_symbol())
            fail(items[i], "missing value after '" + key + "'");
        if (key == ":action") {
            action_expr = &items[i + 1];
        } else if (key == ":id") {
            rule.id = items[i + 1].text;
        } else {
            fail(items[i], "unknown rule keyword '" + key + "'");
        }
    }
    if (action_expr == nullptr)
        fail(item, "rule is missing ':action <schema>'");
    const ActionSchema* schema = domain.find_action(action_expr->text);
    if (schema == nullptr)
        fail(*action_expr, "unknown action '" + action_expr->text + "'");
    rule.action = schema->name;

    VariableScope scope;
    for (const auto& p : schema->params)
        scope.emplace(p.name, p.type);
    rule.literal = parse_literal(items[1], domain, scope, nullptr);
    if (kind == ActionRule::Kind::DenyWhen) {
        if (!rule.literal.positive)
            fail(items[1], "deny-when takes a positive attribute atom");
        if (!mentions_variable(rule.literal.atom))
            fail(items[1], "deny-when atom must refer to an argument of '" + schema->name + "'");
    }
    if (rule.id.empty())
        rule.id = std::string(to_string(kind)) + "-" + std::to_string(ordinal);
    return rule;
}

StateInvariant parse_invariant(const SExpr& item, const DomainAst& domain, std::size_t ordinal) {
    const auto& items = item.items;
    StateInvariant inv;
    std::size_t i = 1;
    while (i < items.size() && items[i].is_symbol()) {
        const auto& key = items[i].text;
        if (i + 1 >= items.size())
            fail(items[i], "missing value after '" + key + "'");
        if (key == ":id") {
            if (!items[i + 1].is_symbol())
                fail(items[i + 1], "invariant id must be a symbol");
            inv.id = items[i + 1].text;
        } else if (key == ":message") {
            if (!items[i + 1].is_string())
                fail(items[i + 1], "invariant message must be a string literal");
            inv.message = items[i + 1].text;
        } else {
            fail(items[i], "unknown invariant keyword '" + key + "'");
        }
        i += 2;
    }
    if (i >= items.size())
        fail(item, "invariant is missing its formula");
    if (i + 1 != items.size())
        fail(items[i + 1], "unexpected expression after invariant formula");
    inv.formula = parse_formula(items[i], domain, {}, nullptr);
    if (inv.id.empty())
        inv.id = "invariant-" + std::to_string(ordinal);
    return inv;
}

void collect_objects(const Formula& f, std::vector<std::string>& out) {
    if (f.kind == Formula::Kind::Atom) {
        for (const auto& a : f.atom.args)
            if (!is_variable(a))
                out.push_back(a);
        return;
    }
    for (const auto& c : f.children)
        collect_objects(c, out);
}

}  // namespace

std::string_view to_string(ActionRule::Kind kind) {
    switch (kind) {
    case ActionRule::Kind::Require: return "require";
    case ActionRule::Kind::Forbid: return "forbid";
    case ActionRule::Kind::DenyWhen: return "deny-when";
    }
    return "rule";
}

ConstraintPolicy parse_policy(std::string_view text, const DomainAst& domain) {
    SExpr root = read_single_sexpr(text, "policy");
    if (!root.is_list() || root.items.empty() || !root.items.front().is_symbol("policy"))
        fail(root, "expected (policy ...)");
    ConstraintPolicy policy;
    std::set<std::string> ids;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
        const SExpr& item = root.items[i];
        if (!item.is_list() || item.items.empty() || !item.items.front().is_symbol())
            fail(item, "expected a policy rule, found " + describe(item));
        const auto& head = item.items.front().text;
        if (head == "deny-when" || head == "forbid" || head == "require") {
            auto kind = head == "deny-when" ? ActionRule::Kind::DenyWhen
                        : head == "forbid"  ? ActionRule::Kind::Forbid
                                            : ActionRule::Kind::Require;
            policy.action_rules.push_back(parse_action_rule(item, kind, domain, i));
        } else if (head == "invariant") {
            policy.state_invariants.push_back(parse_invariant(item, domain, i));
        } else if (head == "contextual") {
            fail(item, "contextual conditions are not supported: they query external data at "
                       "execution time and have no planning-time translation");
        } else if (head == "current") {
            fail(item, "current conditions are not supported: they are checked during execution "
                       "and would need durative, interruptible actions");
        } else {
            fail(item.items.front(), "unknown policy rule '" + head + "'");
        }
        const std::string& id = head == "invariant" ? policy.state_invariants.back().id
                                                    : policy.action_rules.back().id;
        if (!ids.insert(id).second)
            fail(item, "duplicate rule id '" + id + "'");
    }
    return policy;
}

std::string to_text(const ConstraintPolicy& policy) {
    std::ostringstream os;
    os << "(policy";
    for (const auto& r : policy.action_rules)
        os << "\n  (" << to_string(r.kind) << ' ' << to_pddl(r.literal) << " :action " << r.action
           << " :id " << r.id << ")";
    for (const auto& inv : policy.state_invariants) {
        os << "\n  (invariant :id " << inv.id;
        if (!inv.message.empty())
            os << " :message " << quote(inv.message);
        os << "\n    " << to_pddl(inv.formula) << ")";
    }
    os << ")\n";
    return os.str();
}

void check_policy_objects(const ConstraintPolicy& policy, const ObjectTypes& objects) {
    auto check = [&](const std::string& id, const std::vector<std::string>& names) {
        for (const auto& n : names)
            if (!objects.contains(n))
                throw PolicyError("rule '" + id + "' references undeclared object '" + n + "'");
    };
    for (const auto& r : policy.action_rules) {
        std::vector<std::string> names;
        for (const auto& a : r.literal.atom.args)
            if (!is_variable(a))
                names.push_back(a);
        check(r.id, names);
    }
    for (const auto& inv : policy.state_invariants) {
        std::vector<std::string> names;
        collect_objects(inv.formula, names);
        check(inv.id, names);
    }
}

}  // namespace acplan
