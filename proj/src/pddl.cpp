#include "acplan/pddl.hpp"

#include <algorithm>
#include <sstream>

namespace acplan {

namespace {

const std::set<std::string, std::less<>> kSupportedRequirements = {
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":universal-preconditions",
    ":disjunctive-preconditions",
};

[[noreturn]] void fail(const SExpr& at, const std::string& message) {
    throw ParseError(at.pos, message);
}

const SExpr& expect_list(const SExpr& e, std::string_view what) {
    if (!e.is_list())
        fail(e, "expected " + std::string(what) + ", found " + describe(e));
    return e;
}

const std::string& expect_symbol(const SExpr& e, std::string_view what) {
    if (!e.is_symbol())
        fail(e, "expected " + std::string(what) + ", found " + describe(e));
    return e.text;
}

bool is_identifier(std::string_view s) {
    if (s.empty())
        return false;
    auto c = s.front();
    if (!((c >= 'a' && c <= 'z') || c == '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
    });
}

const std::string& expect_identifier(const SExpr& e, std::string_view what) {
    const auto& s = expect_symbol(e, what);
    if (!is_identifier(s))
        fail(e, "invalid " + std::string(what) + " '" + s + "'");
    return s;
}

std::string expect_variable(const SExpr& e) {
    const auto& s = expect_symbol(e, "variable");
    if (!is_variable(s) || !is_identifier(std::string_view(s).substr(1)))
        fail(e, "invalid variable '" + s + "'");
    return s;
}

/// Reads `a b - t c - u d` style lists starting at items[first].
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t first,
                                        bool variables, const DomainAst* domain) {
    std::vector<TypedName> out;
    std::vector<const SExpr*> pending;
    for (std::size_t i = first; i < items.size(); ++i) {
        const SExpr& e = items[i];
        if (e.is_symbol("-")) {
            if (pending.empty())
                fail(e, "type annotation '-' without preceding names");
            if (i + 1 >= items.size())
                fail(e, "missing type after '-'");
            const SExpr& type_expr = items[++i];
            if (type_expr.is_list() && !type_expr.items.empty() &&
                type_expr.items.front().is_symbol("either"))
                fail(type_expr, "'either' types are not supported");
            std::string type = expect_identifier(type_expr, "type name");
            if (domain != nullptr && !domain->has_type(type))
                fail(type_expr, "unknown type '" + type + "'");
            for (const SExpr* p : pending)
                out.push_back({p->text, type});
            pending.clear();
            continue;
        }
        if (variables)
            expect_variable(e);
        else
            expect_identifier(e, "name");
        pending.push_back(&e);
    }
    for (const SExpr* p : pending)
        out.push_back({p->text, std::string(kRootType)});
    return out;
}

void check_unique_names(const std::vector<TypedName>& names, const std::vector<SExpr>& items,
                        std::string_view what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n.name).second) {
            auto it = std::find_if(items.begin(), items.end(),
                                   [&](const SExpr& e) { return e.is_symbol(n.name); });
            fail(it != items.end() ? *it : items.front(),
                 "duplicate " + std::string(what) + " '" + n.name + "'");
        }
    }
}

std::string section_name(const SExpr& section) {
    if (!section.is_list() || section.items.empty() || !section.items.front().is_symbol())
        fail(section, "expected a section like (:name ...), found " + describe(section));
    return section.items.front().text;
}

/// Checks the `(define (<kind> <name>) ...)` envelope; returns the name.
std::string read_header(const SExpr& root, std::string_view kind) {
    expect_list(root, "(define ...)");
    if (root.items.empty() || !root.items.front().is_symbol("define"))
        fail(root, "expected (define ...)");
    if (root.items.size() < 2)
        fail(root, "missing (" + std::string(kind) + " <name>) after define");
    const SExpr& head = root.items[1];
    if (!head.is_list() || head.items.size() != 2 || !head.items.front().is_symbol(kind))
        fail(head, "expected (" + std::string(kind) + " <name>)");
    return expect_identifier(head.items[1], std::string(kind) + " name");
}

void check_atom_types(const Atom& atom, const PredicateDecl& decl, const SExpr& at,
                      const VariableScope& scope, const ObjectTypes* objects) {
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const auto& term = atom.args[i];
        const auto& declared = decl.params[i].type;
        const SExpr& term_expr = at.items[i + 1];
        std::string actual;
        if (is_variable(term)) {
            auto it = scope.find(term);
            if (it == scope.end())
                fail(term_expr, "undeclared variable '" + term + "'");
            actual = it->second;
        } else if (objects != nullptr) {
            auto it = objects->find(term);
            if (it == objects->end())
                fail(term_expr, "undeclared object '" + term + "'");
            actual = it->second;
        } else {
            continue;
        }
        if (!type_fits(actual, declared))
            fail(term_expr, "type mismatch: '" + term + "' has type " + actual + " but " +
                                decl.name + " expects " + declared + " at position " +
                                std::to_string(i + 1));
    }
}

void append_typed_list(std::ostringstream& os, const std::vector<TypedName>& names) {
    bool first = true;
    for (const auto& n : names) {
        if (!first)
            os << ' ';
        first = false;
        os << n.name << " - " << n.type;
    }
}

void collect_formula_objects(const Formula& f, std::vector<std::string>& out) {
    if (f.kind == Formula::Kind::Atom) {
        for (const auto& a : f.atom.args)
            if (!is_variable(a))
                out.push_back(a);
        return;
    }
    for (const auto& c : f.children)
        collect_formula_objects(c, out);
}

// ---------------------------------------------------------------------------
// Domain

void parse_requirements(const SExpr& section, DomainAst& d) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
        const auto& tag = expect_symbol(section.items[i], "requirement tag");
        if (!kSupportedRequirements.contains(tag))
            fail(section.items[i], "unsupported requirement '" + tag + "'");
        d.requirements.insert(tag);
    }
}

void parse_types(const SExpr& section, DomainAst& d) {
    auto typed = parse_typed_list(section.items, 1, false, nullptr);
    for (const auto& t : typed) {
        if (t.type != kRootType) {
            auto it = std::find_if(section.items.begin(), section.items.end(),
                                   [&](const SExpr& e) { return e.is_symbol(t.type); });
            fail(*it, "type hierarchies are not supported (types are flat below 'object')");
        }
        if (t.name == kRootType)
            continue;
        if (std::find(d.types.begin(), d.types.end(), t.name) != d.types.end())
            fail(section, "duplicate type '" + t.name + "'");
        d.types.push_back(t.name);
    }
}

void parse_predicates(const SExpr& section, DomainAst& d) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
        const SExpr& decl = expect_list(section.items[i], "predicate declaration");
        if (decl.items.empty())
            fail(decl, "empty predicate declaration");
        PredicateDecl p;
        p.name = expect_identifier(decl.items.front(), "predicate name");
        p.params = parse_typed_list(decl.items, 1, true, &d);
        check_unique_names(p.params, decl.items, "parameter");
        if (d.find_predicate(p.name) != nullptr)
            fail(decl.items.front(), "duplicate predicate '" + p.name + "'");
        d.predicates.push_back(std::move(p));
    }
}

std::vector<Literal> parse_precondition(const SExpr& e, const DomainAst& d,
                                        const VariableScope& scope, const ObjectTypes& constants) {
    auto reject = [&](const SExpr& at) {
        if (at.is_list() && !at.items.empty() && at.items.front().is_symbol()) {
            const auto& head = at.items.front().text;
            if (head == "or" || head == "forall" || head == "exists" || head == "imply")
                fail(at, "disjunction/quantifier '" + head +
                             "' is not allowed inside an action precondition");
        }
    };
    reject(e);
    std::vector<Literal> out;
    if (e.is_list() && !e.items.empty() && e.items.front().is_symbol("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            reject(e.items[i]);
            if (e.items[i].is_list() && !e.items[i].items.empty() &&
                e.items[i].items.front().is_symbol("and"))
                fail(e.items[i], "nested 'and' is not allowed inside an action precondition");
            out.push_back(parse_literal(e.items[i], d, scope, &constants));
        }
    } else {
        out.push_back(parse_literal(e, d, scope, &constants));
    }
    return out;
}

void parse_effect(const SExpr& e, const DomainAst& d, const VariableScope& scope,
                  const ObjectTypes& constants, ActionSchema& a) {
    auto one = [&](const SExpr& item) {
        if (item.is_list() && !item.items.empty() && item.items.front().is_symbol()) {
            const auto& head = item.items.front().text;
            if (head == "when" || head == "forall")
                fail(item, "conditional/universal effects are not supported");
            if (head == "and")
                fail(item, "nested 'and' is not allowed inside an effect");
            if (head == "increase" || head == "decrease" || head == "assign")
                fail(item, "numeric effects are not supported");
        }
        Literal lit = parse_literal(item, d, scope, &constants);
        (lit.positive ? a.add : a.del).push_back(std::move(lit.atom));
    };
    if (e.is_list() && !e.items.empty() && e.items.front().is_symbol("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i)
            one(e.items[i]);
    } else {
        one(e);
    }
    for (const auto& atom : a.add) {
        if (std::find(a.del.begin(), a.del.end(), atom) != a.del.end())
            fail(e, "atom " + to_pddl(atom) + " appears in both the add and the delete list of '" +
                        a.name + "'");
    }
}

ActionSchema parse_action(const SExpr& section, const DomainAst& d, const ObjectTypes& constants) {
    const auto& items = section.items;
    if (items.size() < 2)
        fail(section, "missing action name");
    ActionSchema a;
    a.name = expect_identifier(items[1], "action name");
    bool seen_params = false, seen_pre = false, seen_eff = false;
    VariableScope scope;
    for (std::size_t i = 2; i < items.size(); i += 2) {
        const auto& key = expect_symbol(items[i], "action keyword");
        if (i + 1 >= items.size())
            fail(items[i], "missing value after '" + key + "'");
        const SExpr& value = items[i + 1];
        if (key == ":parameters") {
            if (seen_params)
                fail(items[i], "duplicate :parameters");
            if (seen_pre || seen_eff)
                fail(items[i], ":parameters must precede :precondition and :effect");
            seen_params = true;
            expect_list(value, "parameter list");
            a.params = parse_typed_list(value.items, 0, true, &d);
            check_unique_names(a.params, value.items, "parameter");
            for (const auto& p : a.params)
                scope.emplace(p.name, p.type);
        } else if (key == ":precondition") {
            if (seen_pre)
                fail(items[i], "duplicate :precondition");
            seen_pre = true;
            a.precondition = parse_precondition(value, d, scope, constants);
        } else if (key == ":effect") {
            if (seen_eff)
                fail(items[i], "duplicate :effect");
            seen_eff = true;
            parse_effect(value, d, scope, constants, a);
        } else {
            fail(items[i], "unsupported action keyword '" + key + "'");
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// Problem

void parse_init(const SExpr& section, const DomainAst& d, const ObjectTypes& objects,
                ProblemAst& p) {
    std::vector<GroundAtom> atoms;
    for (std::size_t i = 1; i < section.items.size(); ++i) {
        const SExpr& item = section.items[i];
        if (item.is_list() && !item.items.empty() && item.items.front().is_symbol("not"))
            fail(item, "negative literals are not allowed in :init (closed-world assumption)");
        if (item.is_list() && !item.items.empty() && item.items.front().is_symbol("="))
            fail(item, "numeric fluents are not supported");
        Atom a = parse_atom(item, d, {}, &objects);
        for (std::size_t k = 0; k < a.args.size(); ++k)
            if (is_variable(a.args[k]))
                fail(item.items[k + 1], "variables are not allowed in :init");
        atoms.push_back({std::move(a.predicate), std::move(a.args)});
    }
    p.init = State(std::move(atoms));
}

}  // namespace

// ---------------------------------------------------------------------------

Formula Formula::make_atom(Atom a) {
    Formula f;
    f.kind = Kind::Atom;
    f.atom = std::move(a);
    return f;
}

Formula Formula::negation(Formula inner) {
    Formula f;
    f.kind = Kind::Not;
    f.children.push_back(std::move(inner));
    return f;
}

Formula Formula::conjunction(std::vector<Formula> fs) {
    Formula f;
    f.kind = Kind::And;
    f.children = std::move(fs);
    return f;
}

Formula Formula::disjunction(std::vector<Formula> fs) {
    Formula f;
    f.kind = Kind::Or;
    f.children = std::move(fs);
    return f;
}

Formula Formula::forall(std::vector<TypedName> vars, Formula body) {
    Formula f;
    f.kind = Kind::Forall;
    f.variables = std::move(vars);
    f.children.push_back(std::move(body));
    return f;
}

std::optional<std::size_t> ActionSchema::param_index(std::string_view variable) const {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].name == variable)
            return i;
    return std::nullopt;
}

const PredicateDecl* DomainAst::find_predicate(std::string_view n) const {
    for (const auto& p : predicates)
        if (p.name == n)
            return &p;
    return nullptr;
}

const ActionSchema* DomainAst::find_action(std::string_view n) const {
    for (const auto& a : actions)
        if (a.name == n)
            return &a;
    return nullptr;
}

bool DomainAst::has_type(std::string_view type) const {
    return type == kRootType || std::find(types.begin(), types.end(), type) != types.end();
}

bool type_fits(std::string_view actual, std::string_view declared) {
    return declared == kRootType || actual == declared;
}

ObjectTypes object_types(const DomainAst& domain, const ProblemAst& problem) {
    ObjectTypes out;
    for (const auto& c : domain.constants)
        out.emplace(c.name, c.type);
    for (const auto& o : problem.objects)
        out.emplace(o.name, o.type);
    return out;
}

Atom parse_atom(const SExpr& e, const DomainAst& domain, const VariableScope& scope,
                const ObjectTypes* objects) {
    if (!e.is_list() || e.items.empty())
        fail(e, "expected an atom (predicate args...), found " + describe(e));
    Atom a;
    a.predicate = expect_identifier(e.items.front(), "predicate name");
    const PredicateDecl* decl = domain.find_predicate(a.predicate);
    if (decl == nullptr)
        fail(e.items.front(), "unknown predicate '" + a.predicate + "'");
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& t = e.items[i];
        if (t.is_symbol() && is_variable(t.text))
            a.args.push_back(expect_variable(t));
        else
            a.args.push_back(expect_identifier(t, "object name"));
    }
    if (a.args.size() != decl->params.size())
        fail(e, "arity mismatch: '" + a.predicate + "' takes " +
                    std::to_string(decl->params.size()) + " argument(s), got " +
                    std::to_string(a.args.size()));
    check_atom_types(a, *decl, e, scope, objects);
    return a;
}

Literal parse_literal(const SExpr& e, const DomainAst& domain, const VariableScope& scope,
                      const ObjectTypes* objects) {
    if (e.is_list() && !e.items.empty() && e.items.front().is_symbol("not")) {
        if (e.items.size() != 2)
            fail(e, "'not' takes exactly one argument");
        const SExpr& inner = e.items[1];
        if (inner.is_list() && !inner.items.empty() && inner.items.front().is_symbol("not"))
            fail(inner, "double negation is not a literal");
        return Literal{false, parse_atom(inner, domain, scope, objects)};
    }
    return Literal{true, parse_atom(e, domain, scope, objects)};
}

Formula parse_formula(const SExpr& e, const DomainAst& domain, const VariableScope& scope,
                      const ObjectTypes* objects) {
    if (!e.is_list() || e.items.empty())
        fail(e, "expected a formula, found " + describe(e));
    const SExpr& head = e.items.front();
    if (head.is_symbol("and") || head.is_symbol("or")) {
        std::vector<Formula> children;
        for (std::size_t i = 1; i < e.items.size(); ++i)
            children.push_back(parse_formula(e.items[i], domain, scope, objects));
        return head.is_symbol("and") ? Formula::conjunction(std::move(children))
                                     : Formula::disjunction(std::move(children));
    }
    if (head.is_symbol("not")) {
        if (e.items.size() != 2)
            fail(e, "'not' takes exactly one argument");
        return Formula::negation(parse_formula(e.items[1], domain, scope, objects));
    }
    if (head.is_symbol("forall")) {
        if (e.items.size() != 3)
            fail(e, "forall takes a variable list and a body");
        const SExpr& vars = expect_list(e.items[1], "quantified variable list");
        auto typed = parse_typed_list(vars.items, 0, true, &domain);
        if (typed.empty())
            fail(vars, "forall without variables");
        check_unique_names(typed, vars.items, "quantified variable");
        VariableScope inner = scope;
        for (const auto& v : typed) {
            if (scope.contains(v.name)) {
                auto it = std::find_if(vars.items.begin(), vars.items.end(),
                                       [&](const SExpr& x) { return x.is_symbol(v.name); });
                fail(*it, "quantified variable '" + v.name + "' shadows an outer variable");
            }
            inner.emplace(v.name, v.type);
        }
        return Formula::forall(std::move(typed),
                               parse_formula(e.items[2], domain, inner, objects));
    }
    if (head.is_symbol("exists") || head.is_symbol("imply") || head.is_symbol("when"))
        fail(head, "'" + head.text + "' is not supported");
    return Formula::make_atom(parse_atom(e, domain, scope, objects));
}

void check_formula_objects(const Formula& f, const ObjectTypes& objects) {
    std::vector<std::string> names;
    collect_formula_objects(f, names);
    for (const auto& n : names)
        if (!objects.contains(n))
            throw Error("formula " + to_pddl(f) + " references undeclared object '" + n + "'");
}

DomainAst parse_domain(std::string_view text) {
    SExpr root = read_single_sexpr(text, "domain");
    DomainAst d;
    d.name = read_header(root, "domain");

    // Declarations are collected before actions so section order is free.
    std::map<std::string, const SExpr*> singletons;
    std::vector<const SExpr*> actions;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr& section = root.items[i];
        std::string name = section_name(section);
        if (name == ":action") {
            actions.push_back(&section);
        } else if (name == ":requirements" || name == ":types" || name == ":constants" ||
                   name == ":predicates") {
            if (!singletons.emplace(name, &section).second)
                fail(section, "duplicate section '" + name + "'");
        } else {
            fail(section, "unsupported domain section '" + name + "'");
        }
    }
    if (auto it = singletons.find(":requirements"); it != singletons.end())
        parse_requirements(*it->second, d);
    if (auto it = singletons.find(":types"); it != singletons.end())
        parse_types(*it->second, d);
    ObjectTypes constants;
    if (auto it = singletons.find(":constants"); it != singletons.end()) {
        d.constants = parse_typed_list(it->second->items, 1, false, &d);
        check_unique_names(d.constants, it->second->items, "constant");
        for (const auto& c : d.constants)
            constants.emplace(c.name, c.type);
    }
    if (auto it = singletons.find(":predicates"); it != singletons.end())
        parse_predicates(*it->second, d);
    for (const SExpr* section : actions) {
        ActionSchema a = parse_action(*section, d, constants);
        if (d.find_action(a.name) != nullptr)
            fail(section->items[1], "duplicate action '" + a.name + "'");
        d.actions.push_back(std::move(a));
    }
    return d;
}

ProblemAst parse_problem(std::string_view text, const DomainAst& domain) {
    SExpr root = read_single_sexpr(text, "problem");
    ProblemAst p;
    p.name = read_header(root, "problem");
    p.goal = Formula::conjunction({});

    std::map<std::string, const SExpr*> sections;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr& section = root.items[i];
        std::string name = section_name(section);
        if (name != ":domain" && name != ":objects" && name != ":init" && name != ":goal" &&
            name != ":requirements")
            fail(section, "unsupported problem section '" + name + "'");
        if (!sections.emplace(name, &section).second)
            fail(section, "duplicate section '" + name + "'");
    }
    auto domain_it = sections.find(":domain");
    if (domain_it == sections.end())
        fail(root, "missing (:domain <name>)");
    {
        const SExpr& s = *domain_it->second;
        if (s.items.size() != 2)
            fail(s, "expected (:domain <name>)");
        p.domain_name = expect_identifier(s.items[1], "domain name");
        if (p.domain_name != domain.name)
            fail(s.items[1], "problem is for domain '" + p.domain_name + "' but domain '" +
                                 domain.name + "' was given");
    }
    if (auto it = sections.find(":requirements"); it != sections.end()) {
        DomainAst scratch;
        parse_requirements(*it->second, scratch);
    }
    if (auto it = sections.find(":objects"); it != sections.end()) {
        p.objects = parse_typed_list(it->second->items, 1, false, &domain);
        check_unique_names(p.objects, it->second->items, "object");
        for (const auto& o : p.objects) {
            for (const auto& c : domain.constants) {
                if (c.name == o.name) {
                    auto at = std::find_if(it->second->items.begin(), it->second->items.end(),
                                           [&](const SExpr& x) { return x.is_symbol(o.name); });
                    fail(*at, "object '" + o.name + "' redeclares a domain constant");
                }
            }
        }
    }
    ObjectTypes objects = object_types(domain, p);
    if (auto it = sections.find(":init"); it != sections.end())
        parse_init(*it->second, domain, objects, p);
    if (auto it = sections.find(":goal"); it != sections.end()) {
        const SExpr& s = *it->second;
        if (s.items.size() != 2)
            fail(s, "expected (:goal <formula>)");
        p.goal = parse_formula(s.items[1], domain, {}, &objects);
    }
    return p;
}

std::string to_pddl(const Atom& a) {
    std::string out = "(" + a.predicate;
    for (const auto& t : a.args) {
        out += ' ';
        out += t;
    }
    return out + ")";
}

std::string to_pddl(const Literal& l) {
    return l.positive ? to_pddl(l.atom) : "(not " + to_pddl(l.atom) + ")";
}

std::string to_pddl(const Formula& f) {
    switch (f.kind) {
    case Formula::Kind::Atom: return to_pddl(f.atom);
    case Formula::Kind::Not: return "(not " + to_pddl(f.children.front()) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::string out = f.kind == Formula::Kind::And ? "(and" : "(or";
        for (const auto& c : f.children)
            out += " " + to_pddl(c);
        return out + ")";
    }
    case Formula::Kind::Forall: {
        std::ostringstream os;
        os << "(forall (";
        append_typed_list(os, f.variables);
        os << ") " << to_pddl(f.children.front()) << ")";
        return os.str();
    }
    }
    return {};
}

std::string pretty_print(const DomainAst& d) {
    std::ostringstream os;
    os << "(define (domain " << d.name << ")";
    if (!d.requirements.empty()) {
        os << "\n  (:requirements";
        for (const auto& r : d.requirements)
            os << ' ' << r;
        os << ")";
    }
    if (!d.types.empty()) {
        os << "\n  (:types";
        for (const auto& t : d.types)
            os << ' ' << t;
        os << ")";
    }
    if (!d.constants.empty()) {
        os << "\n  (:constants ";
        append_typed_list(os, d.constants);
        os << ")";
    }
    if (!d.predicates.empty()) {
        os << "\n  (:predicates";
        for (const auto& p : d.predicates) {
            os << "\n    (" << p.name;
            if (!p.params.empty()) {
                os << ' ';
                append_typed_list(os, p.params);
            }
            os << ")";
        }
        os << ")";
    }
    for (const auto& a : d.actions) {
        os << "\n  (:action " << a.name;
        os << "\n    :parameters (";
        append_typed_list(os, a.params);
        os << ")";
        os << "\n    :precondition (and";
        for (const auto& l : a.precondition)
            os << "\n      " << to_pddl(l);
        os << ")";
        os << "\n    :effect (and";
        for (const auto& atom : a.del)
            os << "\n      (not " << to_pddl(atom) << ")";
        for (const auto& atom : a.add)
            os << "\n      " << to_pddl(atom);
        os << "))";
    }
    os << ")\n";
    return os.str();
}

std::string pretty_print(const ProblemAst& p) {
    std::ostringstream os;
    os << "(define (problem " << p.name << ")";
    os << "\n  (:domain " << p.domain_name << ")";
    if (!p.objects.empty()) {
        os << "\n  (:objects";
        for (const auto& o : p.objects)
            os << "\n    " << o.name << " - " << o.type;
        os << ")";
    }
    os << "\n  (:init";
    for (const auto& atom : p.init)
        os << "\n    " << atom.to_string();
    os << ")";
    os << "\n  (:goal " << to_pddl(p.goal) << "))\n";
    return os.str();
}

}  // namespace acplan
