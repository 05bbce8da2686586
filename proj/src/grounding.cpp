#include "acplan/grounding.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace acplan {

namespace {

void collect_quantified_types(const Formula& f, std::set<std::string>& out) {
    if (f.kind == Formula::Kind::Forall)
        for (const auto& v : f.variables)
            out.insert(v.type);
    for (const auto& c : f.children)
        collect_quantified_types(c, out);
}

GroundAction make_ground_action(const ActionSchema& schema, std::vector<std::string> args) {
    Binding binding;
    for (std::size_t i = 0; i < schema.params.size(); ++i)
        binding.emplace(schema.params[i].name, args[i]);
    GroundAction g;
    g.schema = schema.name;
    g.args = std::move(args);
    for (const auto& lit : schema.precondition) {
        GroundAtom atom = bind_atom(lit.atom, binding);
        (lit.positive ? g.pre_pos : g.pre_neg).push_back(atom);
        g.precondition.push_back({lit.positive, std::move(atom)});
    }
    for (const auto& atom : schema.add)
        g.add.push_back(bind_atom(atom, binding));
    for (const auto& atom : schema.del)
        g.del.push_back(bind_atom(atom, binding));
    return g;
}

/// Calls `visit` for every type-correct argument tuple of `schema`.
void for_each_grounding(const ActionSchema& schema, const ObjectsByType& objects,
                        const std::function<void(std::vector<std::string>)>& visit) {
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : schema.params) {
        auto it = objects.find(p.type);
        if (it == objects.end() || it->second.empty())
            return;
        domains.push_back(&it->second);
    }
    std::vector<std::size_t> idx(domains.size(), 0);
    for (;;) {
        std::vector<std::string> args;
        args.reserve(domains.size());
        for (std::size_t i = 0; i < domains.size(); ++i)
            args.push_back((*domains[i])[idx[i]]);
        visit(std::move(args));
        std::size_t k = domains.size();
        while (k > 0) {
            --k;
            if (++idx[k] < domains[k]->size())
                break;
            idx[k] = 0;
            if (k == 0)
                return;
        }
        if (domains.empty())
            return;
    }
}

bool static_preconditions_hold(const GroundAction& g, const GroundedTask& task) {
    for (const auto& a : g.pre_pos)
        if (task.static_predicates.contains(a.predicate) && !task.init.contains(a))
            return false;
    for (const auto& a : g.pre_neg)
        if (task.static_predicates.contains(a.predicate) && task.init.contains(a))
            return false;
    return true;
}

/// Whether the atom, with variables resolved through `binding`, is in `state`;
/// compares in place instead of building a GroundAtom.
bool holds(const Atom& atom, const State& state, const Binding& binding) {
    std::array<std::string_view, 8> fixed{};
    std::vector<std::string_view> spill;
    std::string_view* args = fixed.data();
    if (atom.args.size() > fixed.size()) {
        spill.resize(atom.args.size());
        args = spill.data();
    }
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const std::string& term = atom.args[i];
        if (is_variable(term)) {
            auto it = binding.find(term);
            if (it == binding.end())
                throw Error("unbound variable '" + term + "' in " + to_pddl(atom));
            args[i] = it->second;
        } else {
            args[i] = term;
        }
    }
    const std::size_t n = atom.args.size();
    auto less = [&](const GroundAtom& g) {
        if (auto c = g.predicate.compare(atom.predicate); c != 0)
            return c < 0;
        return std::lexicographical_compare(g.args.begin(), g.args.end(), args, args + n,
                                            [](std::string_view a, std::string_view b) { return a < b; });
    };
    const auto& atoms = state.atoms();
    auto it = std::partition_point(atoms.begin(), atoms.end(), less);
    return it != atoms.end() && it->predicate == atom.predicate &&
           std::equal(it->args.begin(), it->args.end(), args, args + n);
}

bool eval_in(const Formula& f, const State& state, const ObjectsByType& objects, Binding& binding);

bool eval_forall(const Formula& f, std::size_t i, const State& state, const ObjectsByType& objects,
                 Binding& binding) {
    if (i == f.variables.size())
        return eval_in(f.children.front(), state, objects, binding);
    const auto& var = f.variables[i];
    auto it = objects.find(var.type);
    if (it == objects.end())
        return true;
    auto slot = binding.insert_or_assign(var.name, std::string()).first;
    bool ok = true;
    for (const auto& obj : it->second) {
        slot->second = obj;
        if (!eval_forall(f, i + 1, state, objects, binding)) {
            ok = false;
            break;
        }
    }
    binding.erase(slot);
    return ok;
}

bool eval_in(const Formula& f, const State& state, const ObjectsByType& objects, Binding& binding) {
    switch (f.kind) {
    case Formula::Kind::Atom: return holds(f.atom, state, binding);
    case Formula::Kind::Not: return !eval_in(f.children.front(), state, objects, binding);
    case Formula::Kind::And:
        for (const auto& c : f.children)
            if (!eval_in(c, state, objects, binding))
                return false;
        return true;
    case Formula::Kind::Or:
        for (const auto& c : f.children)
            if (eval_in(c, state, objects, binding))
                return true;
        return false;
    case Formula::Kind::Forall: return eval_forall(f, 0, state, objects, binding);
    }
    return false;
}

std::optional<Binding> falsifying_binding_impl(const Formula& f, const State& state,
                                               const ObjectsByType& objects, Binding& binding) {
    if (f.kind != Formula::Kind::Forall)
        return eval_in(f, state, objects, binding) ? std::nullopt : std::optional<Binding>(binding);

    std::optional<Binding> result;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == f.variables.size()) {
            result = falsifying_binding_impl(f.children.front(), state, objects, binding);
            return result.has_value();
        }
        const auto& var = f.variables[i];
        auto it = objects.find(var.type);
        if (it == objects.end())
            return false;
        for (const auto& obj : it->second) {
            binding[var.name] = obj;
            bool found = rec(i + 1);
            binding.erase(var.name);
            if (found)
                return true;
        }
        return false;
    };
    rec(0);
    return result;
}

}  // namespace

std::string GroundLiteral::to_string() const {
    return positive ? atom.to_string() : "(not " + atom.to_string() + ")";
}

std::string GroundAction::label() const {
    std::string out = "(" + schema;
    for (const auto& a : args) {
        out += ' ';
        out += a;
    }
    return out + ")";
}

const GroundAction* GroundedTask::find(std::string_view schema,
                                       const std::vector<std::string>& args) const {
    auto it = std::lower_bound(actions.begin(), actions.end(), std::pair(schema, &args),
                               [](const GroundAction& a, const auto& key) {
                                   if (auto c = a.schema.compare(key.first); c != 0)
                                       return c < 0;
                                   return a.args < *key.second;
                               });
    if (it != actions.end() && it->schema == schema && it->args == args)
        return &*it;
    return nullptr;
}

GroundAtom bind_atom(const Atom& atom, const Binding& binding) {
    GroundAtom g;
    g.predicate = atom.predicate;
    g.args.reserve(atom.args.size());
    for (const auto& term : atom.args) {
        if (is_variable(term)) {
            auto it = binding.find(term);
            if (it == binding.end())
                throw Error("unbound variable '" + term + "' in " + to_pddl(atom));
            g.args.push_back(it->second);
        } else {
            g.args.push_back(term);
        }
    }
    return g;
}

GroundedTask ground(const DomainAst& domain, const ProblemAst& problem, GroundOptions options) {
    if (problem.domain_name != domain.name)
        throw GroundingError("problem '" + problem.name + "' is for domain '" +
                             problem.domain_name + "', not '" + domain.name + "'");
    GroundedTask task;
    task.domain = domain;
    task.problem = problem;
    task.object_type = object_types(domain, problem);
    task.init = problem.init;
    task.goal = problem.goal;

    task.objects_by_type[std::string(kRootType)];
    for (const auto& t : domain.types)
        task.objects_by_type[t];
    for (const auto& [name, type] : task.object_type) {
        task.objects_by_type[type].push_back(name);
        if (type != kRootType)
            task.objects_by_type[std::string(kRootType)].push_back(name);
    }
    for (auto& [type, names] : task.objects_by_type)
        std::sort(names.begin(), names.end());

    std::set<std::string> quantified;
    collect_quantified_types(problem.goal, quantified);
    for (const auto& type : quantified) {
        auto it = task.objects_by_type.find(type);
        if (it == task.objects_by_type.end() || it->second.empty())
            throw GroundingError("goal quantifies over type '" + type + "', which has no objects");
    }

    for (const auto& p : domain.predicates)
        task.static_predicates.insert(p.name);
    for (const auto& a : domain.actions) {
        for (const auto& atom : a.add)
            task.static_predicates.erase(atom.predicate);
        for (const auto& atom : a.del)
            task.static_predicates.erase(atom.predicate);
    }

    for (const auto& schema : domain.actions) {
        for_each_grounding(schema, task.objects_by_type, [&](std::vector<std::string> args) {
            GroundAction g = make_ground_action(schema, std::move(args));
            if (!options.prune_static || static_preconditions_hold(g, task))
                task.actions.push_back(std::move(g));
        });
    }
    std::sort(task.actions.begin(), task.actions.end());
    task.actions.erase(std::unique(task.actions.begin(), task.actions.end()), task.actions.end());
    return task;
}

GroundAction instantiate(const GroundedTask& task, std::string_view schema_name,
                         const std::vector<std::string>& args) {
    const ActionSchema* schema = task.domain.find_action(schema_name);
    if (schema == nullptr)
        throw Error("unknown action '" + std::string(schema_name) + "'");
    if (args.size() != schema->params.size())
        throw Error("action '" + schema->name + "' takes " + std::to_string(schema->params.size()) +
                    " argument(s), got " + std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i) {
        auto it = task.object_type.find(args[i]);
        if (it == task.object_type.end())
            throw Error("undeclared object '" + args[i] + "'");
        if (!type_fits(it->second, schema->params[i].type))
            throw Error("object '" + args[i] + "' has type " + it->second + " but parameter " +
                        schema->params[i].name + " of '" + schema->name + "' expects " +
                        schema->params[i].type);
    }
    return make_ground_action(*schema, args);
}

std::vector<GroundAction> all_groundings(const GroundedTask& task) {
    std::vector<GroundAction> out;
    for (const auto& schema : task.domain.actions)
        for_each_grounding(schema, task.objects_by_type, [&](std::vector<std::string> args) {
            out.push_back(make_ground_action(schema, std::move(args)));
        });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool evaluate(const Formula& f, const State& state, const ObjectsByType& objects,
              const Binding& binding) {
    Binding scratch = binding;
    return eval_in(f, state, objects, scratch);
}

std::optional<Binding> falsifying_binding(const Formula& f, const State& state,
                                          const ObjectsByType& objects) {
    Binding binding;
    return falsifying_binding_impl(f, state, objects, binding);
}

std::optional<std::string> first_failing_precondition(const GroundAction& a, const State& state) {
    for (const auto& lit : a.precondition)
        if (state.contains(lit.atom) != lit.positive)
            return lit.to_string();
    return std::nullopt;
}

bool applicable(const GroundAction& a, const State& state) {
    return std::all_of(a.pre_pos.begin(), a.pre_pos.end(),
                       [&](const GroundAtom& x) { return state.contains(x); }) &&
           std::none_of(a.pre_neg.begin(), a.pre_neg.end(),
                        [&](const GroundAtom& x) { return state.contains(x); });
}

State apply_unchecked(const State& state, const GroundAction& a) {
    State next = state;
    for (const auto& atom : a.del)
        next.erase(atom);
    for (const auto& atom : a.add)
        next.insert(atom);
    return next;
}

State apply(const State& state, const GroundAction& a) {
    if (auto failing = first_failing_precondition(a, state))
        throw PreconditionError(a.label(), *failing);
    return apply_unchecked(state, a);
}

}  // namespace acplan
