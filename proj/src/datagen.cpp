#include "acplan/datagen.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "acplan/random.hpp"

namespace acplan {

namespace {

using Clock = std::chrono::steady_clock;

void merge(GenStats& into, const GenStats& s) {
    into.attempts += s.attempts;
    into.emitted += s.emitted;
    into.skipped_unsolvable += s.skipped_unsolvable;
    into.discarded_still_valid += s.discarded_still_valid;
    into.dead_end_resamples += s.dead_end_resamples;
    into.certification_failures += s.certification_failures;
}

using Attempt =
    std::function<std::optional<CorpusItem>(std::size_t k, std::uint64_t seed, GenStats& stats)>;

/// Runs attempts k = 0, 1, ... with seed counter_draw(spec.seed, k) until
/// spec.count items exist. Attempts run in batches across spec.workers
/// threads but are consumed in k order, so the corpus does not depend on
/// the worker count.
CorpusResult run_attempts(const GenSpec& spec, const Attempt& attempt) {
    CorpusResult result;
    auto start = Clock::now();
    const std::size_t workers = std::max<std::size_t>(1, spec.workers);
    const std::size_t batch = workers == 1 ? 1 : workers * 4;
    const std::size_t limit = spec.count * std::max<std::size_t>(1, spec.max_attempts_per_item);
    std::size_t next = 0;
    while (result.items.size() < spec.count && next < limit) {
        std::size_t n = std::min(batch, limit - next);
        std::vector<std::optional<CorpusItem>> items(n);
        std::vector<GenStats> stats(n);
        auto work = [&](std::size_t w) {
            for (std::size_t j = w; j < n; j += workers) {
                stats[j].attempts = 1;
                items[j] = attempt(next + j, counter_draw(spec.seed, next + j), stats[j]);
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < std::min(workers, n); ++w)
                pool.emplace_back(work, w);
        }
        for (std::size_t j = 0; j < n && result.items.size() < spec.count; ++j) {
            merge(result.stats, stats[j]);
            if (items[j]) {
                items[j]->id = result.items.size();
                result.items.push_back(std::move(*items[j]));
                ++result.stats.emitted;
            }
        }
        next += n;
    }
    result.stats.wall_time = Clock::now() - start;
    return result;
}

std::string subject_of(const GroundAction& a) { return a.args.empty() ? std::string() : a.args.front(); }

/// The argument a deny-when rule for this schema talks about, else the last one.
std::string object_of(const GroundAction& a, const GroundedTask& task, const ConstraintPolicy& policy) {
    const ActionSchema* schema = task.domain.find_action(a.schema);
    for (const auto& rule : policy.action_rules) {
        if (rule.kind != ActionRule::Kind::DenyWhen || rule.action != a.schema || schema == nullptr)
            continue;
        for (const auto& term : rule.literal.atom.args)
            if (auto idx = schema->param_index(term))
                return a.args[*idx];
    }
    return a.args.empty() ? std::string() : a.args.back();
}

bool permitted(const ConstraintOracle& oracle, const State& state, const GroundAction& action,
               const State& next, std::uint64_t query_id) {
    return oracle.decide(state, action, query_id).allowed() && oracle.check_state(next).allowed();
}

std::vector<State> trajectory(const GroundedTask& task, const Plan& plan) {
    std::vector<State> states{task.init};
    for (const auto& step : plan.steps)
        states.push_back(apply_unchecked(states.back(), step));
    return states;
}

std::optional<Plan> mutate(MutationKind kind, const GroundedTask& task, const Plan& base,
                           const std::vector<State>& states, const std::vector<GroundAction>& all,
                           const ConstraintOracle& oracle, CounterRng& rng) {
    const auto& steps = base.steps;
    switch (kind) {
    case MutationKind::DropStep: {
        if (steps.empty())
            return std::nullopt;
        Plan out = base;
        out.steps.erase(out.steps.begin() + static_cast<std::ptrdiff_t>(rng.below(steps.size())));
        return out;
    }
    case MutationKind::SwapDependent: {
        std::vector<std::size_t> sites;
        for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
            const auto& a = steps[i];
            const auto& b = steps[i + 1];
            bool enables = std::any_of(a.add.begin(), a.add.end(), [&](const GroundAtom& x) {
                return std::find(b.pre_pos.begin(), b.pre_pos.end(), x) != b.pre_pos.end();
            });
            bool unblocks = std::any_of(a.del.begin(), a.del.end(), [&](const GroundAtom& x) {
                return std::find(b.pre_neg.begin(), b.pre_neg.end(), x) != b.pre_neg.end();
            });
            if (enables || unblocks)
                sites.push_back(i);
        }
        if (sites.empty())
            return std::nullopt;
        Plan out = base;
        std::size_t i = sites[rng.below(sites.size())];
        std::swap(out.steps[i], out.steps[i + 1]);
        return out;
    }
    case MutationKind::SubstituteObject: {
        struct Site {
            std::size_t step;
            GroundAction action;
        };
        std::vector<Site> sites;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const ActionSchema* schema = task.domain.find_action(steps[i].schema);
            for (std::size_t p = 0; p < steps[i].args.size(); ++p) {
                auto it = task.objects_by_type.find(schema->params[p].type);
                if (it == task.objects_by_type.end())
                    continue;
                for (const auto& obj : it->second) {
                    if (obj == steps[i].args[p])
                        continue;
                    auto args = steps[i].args;
                    args[p] = obj;
                    GroundAction candidate = instantiate(task, steps[i].schema, args);
                    if (!applicable(candidate, states[i]))
                        sites.push_back({i, std::move(candidate)});
                }
            }
        }
        if (sites.empty())
            return std::nullopt;
        Site& site = sites[rng.below(sites.size())];
        Plan out = base;
        out.steps[site.step] = std::move(site.action);
        return out;
    }
    case MutationKind::InsertDenied: {
        std::vector<std::pair<std::size_t, const GroundAction*>> sites;
        for (std::size_t i = 0; i < states.size(); ++i)
            for (const auto& a : all)
                if (applicable(a, states[i]) &&
                    !permitted(oracle, states[i], a, apply_unchecked(states[i], a), 0))
                    sites.emplace_back(i, &a);
        if (sites.empty())
            return std::nullopt;
        auto [at, action] = sites[rng.below(sites.size())];
        Plan out = base;
        out.steps.insert(out.steps.begin() + static_cast<std::ptrdiff_t>(at), *action);
        return out;
    }
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(GenMode m) {
    switch (m) {
    case GenMode::Logs: return "logs";
    case GenMode::PlansForward: return "plans-forward";
    case GenMode::PlansReverse: return "plans-reverse";
    case GenMode::PlansInvalid: return "plans-invalid";
    }
    return "logs";
}

GenMode parse_gen_mode(std::string_view s) {
    if (s == "logs")
        return GenMode::Logs;
    if (s == "plans-forward" || s == "forward")
        return GenMode::PlansForward;
    if (s == "plans-reverse" || s == "reverse")
        return GenMode::PlansReverse;
    if (s == "plans-invalid" || s == "invalid")
        return GenMode::PlansInvalid;
    throw Error("unknown generation mode '" + std::string(s) +
                "' (expected logs, plans-forward, plans-reverse or plans-invalid)");
}

std::string_view to_string(MutationKind k) {
    switch (k) {
    case MutationKind::DropStep: return "drop";
    case MutationKind::SwapDependent: return "swap";
    case MutationKind::SubstituteObject: return "substitute";
    case MutationKind::InsertDenied: return "insert-denied";
    }
    return "drop";
}

MutationKind parse_mutation_kind(std::string_view s) {
    for (auto k : kAllMutations)
        if (to_string(k) == s)
            return k;
    throw Error("unknown mutation kind '" + std::string(s) +
                "' (expected drop, swap, substitute or insert-denied)");
}

std::string_view to_string(Label l) { return l == Label::Valid ? "valid" : "invalid"; }

std::string_view to_string(ItemProvenance p) {
    switch (p) {
    case ItemProvenance::Forward: return "forward";
    case ItemProvenance::Reverse: return "reverse";
    case ItemProvenance::Mutated: return "mutated";
    }
    return "forward";
}

void check_spec(const GenSpec& spec) {
    if (spec.count == 0)
        throw Error("count must be positive");
    if (spec.mode == GenMode::PlansReverse && spec.depth == 0)
        throw Error("depth must be positive in reverse mode");
    if (spec.mode == GenMode::Logs && spec.walk_length == 0)
        throw Error("walk length must be positive");
    if (spec.max_expansions == 0)
        throw Error("max_expansions must be positive");
}

std::vector<std::pair<std::string, std::size_t>> movable_positions(const DomainAst& domain) {
    std::set<std::pair<std::string, std::size_t>> out;
    for (const auto& schema : domain.actions)
        for (const auto& d : schema.del)
            for (const auto& a : schema.add) {
                if (a.predicate != d.predicate || a.args.size() != d.args.size())
                    continue;
                std::optional<std::size_t> differs;
                std::size_t n_diff = 0;
                for (std::size_t p = 0; p < a.args.size(); ++p)
                    if (a.args[p] != d.args[p]) {
                        differs = p;
                        ++n_diff;
                    }
                if (n_diff == 1 && is_variable(a.args[*differs]) && is_variable(d.args[*differs]))
                    out.emplace(a.predicate, *differs);
            }
    return {out.begin(), out.end()};
}

State perturb_init(const GroundedTask& task, std::uint64_t seed) {
    auto positions = movable_positions(task.domain);
    CounterRng rng(seed);
    State out;
    for (const auto& atom : task.init) {
        GroundAtom next = atom;
        for (const auto& [predicate, pos] : positions) {
            if (atom.predicate != predicate || pos >= atom.args.size())
                continue;
            const PredicateDecl* decl = task.domain.find_predicate(predicate);
            auto it = task.objects_by_type.find(decl->params[pos].type);
            if (it == task.objects_by_type.end() || it->second.empty())
                continue;
            next.args[pos] = it->second[rng.below(it->second.size())];
        }
        out.insert(std::move(next));
    }
    return out;
}

GroundedTask with_init(const GroundedTask& task, State init, std::optional<Formula> goal) {
    GroundedTask out = task;
    out.problem.init = init;
    out.init = std::move(init);
    if (goal) {
        out.problem.goal = *goal;
        out.goal = std::move(*goal);
    }
    return out;
}

std::vector<DecisionRecord> gen_logs(const GroundedTask& task, const ConstraintPolicy& policy,
                                     const GenSpec& spec, const ConstraintOracle& oracle,
                                     DecisionLogWriter* sink) {
    check_spec(spec);
    const SymbolicOracle truth(policy, task);
    const std::vector<GroundAction> actions = all_groundings(task);
    if (actions.empty())
        throw Error("the task has no ground actions to query");
    CounterRng rng(spec.seed);
    State state = task.init;
    std::size_t walked = 0;

    auto step_walk = [&] {
        std::vector<const GroundAction*> moves;
        if (walked < spec.walk_length)
            for (const auto& a : task.actions)
                if (applicable(a, state) && permitted(truth, state, a, apply_unchecked(state, a), 0))
                    moves.push_back(&a);
        if (moves.empty()) {
            state = task.init;
            walked = 0;
            return;
        }
        state = apply_unchecked(state, *moves[rng.below(moves.size())]);
        ++walked;
    };

    constexpr std::size_t kMaxDraws = 10'000;
    std::vector<DecisionRecord> records;
    records.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        std::optional<Verdict> want;
        if (spec.balanced)
            want = i % 2 == 0 ? Verdict::Allow : Verdict::Deny;
        const GroundAction* action = nullptr;
        AccessDecision gt;
        for (std::size_t draw = 0; draw < kMaxDraws; ++draw) {
            const GroundAction& candidate = actions[rng.below(actions.size())];
            gt = truth.decide(state, candidate, i);
            if (!want || gt.verdict == *want) {
                action = &candidate;
                break;
            }
            step_walk();
        }
        if (action == nullptr)
            throw Error("no query with ground truth " + std::string(to_string(*want)) + " found after " +
                        std::to_string(kMaxDraws) + " draws; cannot balance the log");
        DecisionRecord r;
        r.query_id = i;
        r.subject = subject_of(*action);
        r.action = action->schema;
        r.object = object_of(*action, task, policy);
        r.state_digest = state.digest();
        r.ground_truth = gt.verdict;
        r.verdict = oracle.decide(state, *action, i).verdict;
        r.oracle_id = oracle.id();
        r.seed = spec.seed;
        if (sink != nullptr)
            log_decision(*sink, r);
        records.push_back(std::move(r));
        step_walk();
    }
    return records;
}

CorpusResult gen_plans_forward(const GroundedTask& task, const ConstraintPolicy& policy,
                               const GenSpec& spec) {
    check_spec(spec);
    auto oracle = std::make_shared<const SymbolicOracle>(policy, task);
    return run_attempts(spec, [&](std::size_t, std::uint64_t seed, GenStats& stats) -> std::optional<CorpusItem> {
        GroundedTask variant = with_init(task, perturb_init(task, seed));
        SearchConfig config;
        config.max_expansions = spec.max_expansions;
        config.oracle = oracle;
        SolveResult solved = solve(variant, config);
        if (solved.status != SearchStatus::Solved) {
            ++stats.skipped_unsolvable;
            return std::nullopt;
        }
        if (!validate(variant, *oracle, format_plan(*solved.plan)).valid) {
            ++stats.certification_failures;
            return std::nullopt;
        }
        CorpusItem item;
        item.problem = std::move(variant.problem);
        item.plan = std::move(*solved.plan);
        item.provenance = ItemProvenance::Forward;
        item.seed = seed;
        return item;
    });
}

CorpusResult gen_plans_reverse(const GroundedTask& task, const ConstraintPolicy& policy,
                               const GenSpec& spec) {
    check_spec(spec);
    if (spec.depth == 0)
        throw Error("depth must be positive in reverse mode");
    const SymbolicOracle oracle(policy, task);
    return run_attempts(spec, [&](std::size_t, std::uint64_t seed, GenStats& stats) -> std::optional<CorpusItem> {
        CounterRng rng(seed);
        std::vector<std::size_t> candidates;
        for (std::size_t retry = 0; retry <= spec.max_walk_retries; ++retry) {
            if (retry > 0)
                ++stats.dead_end_resamples;
            const State init = perturb_init(task, rng());
            State state = init;
            Plan plan;
            while (plan.steps.size() < spec.depth) {
                candidates.clear();
                for (std::size_t a = 0; a < task.actions.size(); ++a)
                    if (applicable(task.actions[a], state))
                        candidates.push_back(a);
                std::optional<State> next;
                while (!candidates.empty() && !next) {
                    std::size_t pick = rng.below(candidates.size());
                    const GroundAction& action = task.actions[candidates[pick]];
                    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
                    State succ = apply_unchecked(state, action);
                    if (!permitted(oracle, state, action, succ, plan.steps.size()))
                        continue;
                    plan.steps.push_back(action);
                    next = std::move(succ);
                }
                if (!next)
                    break;
                state = std::move(*next);
            }
            // A dead end, or a walk that came back to its start and so has no goal to state.
            if (plan.steps.size() < spec.depth || state == init)
                continue;

            std::vector<Formula> goal;
            std::vector<Formula> negated;
            for (const auto& atom : state)
                if (!init.contains(atom))
                    goal.push_back(Formula::make_atom(Atom{atom.predicate, atom.args}));
            for (const auto& atom : init)
                if (!state.contains(atom))
                    negated.push_back(Formula::negation(Formula::make_atom(Atom{atom.predicate, atom.args})));
            goal.insert(goal.end(), negated.begin(), negated.end());
            GroundedTask variant = with_init(task, init, Formula::conjunction(std::move(goal)));
            if (!validate(variant, oracle, format_plan(plan)).valid) {
                ++stats.certification_failures;
                return std::nullopt;
            }
            CorpusItem item;
            item.problem = std::move(variant.problem);
            item.plan = std::move(plan);
            item.provenance = ItemProvenance::Reverse;
            item.seed = seed;
            return item;
        }
        return std::nullopt;
    });
}

CorpusResult gen_plans_invalid(const GroundedTask& task, const ConstraintPolicy& policy,
                               const GenSpec& spec) {
    check_spec(spec);
    if (spec.mutation_kinds.empty())
        return {};
    auto oracle = std::make_shared<const SymbolicOracle>(policy, task);
    SearchConfig config;
    config.max_expansions = spec.max_expansions;
    config.oracle = oracle;
    SolveResult solved = solve(task, config);
    if (solved.status != SearchStatus::Solved)
        throw Error("no valid base plan to mutate (search " + std::string(to_string(solved.status)) + ")");
    const Plan base = *solved.plan;
    const std::vector<State> states = trajectory(task, base);
    const std::vector<GroundAction> all = all_groundings(task);
    const std::vector<MutationKind> kinds(spec.mutation_kinds.begin(), spec.mutation_kinds.end());

    return run_attempts(spec, [&](std::size_t k, std::uint64_t seed, GenStats& stats) -> std::optional<CorpusItem> {
        MutationKind kind = kinds[k % kinds.size()];
        CounterRng rng(seed);
        auto mutant = mutate(kind, task, base, states, all, *oracle, rng);
        if (!mutant) {
            ++stats.discarded_still_valid;
            return std::nullopt;
        }
        ValidationReport report = validate(task, *oracle, format_plan(*mutant));
        if (report.valid) {
            ++stats.discarded_still_valid;
            return std::nullopt;
        }
        CorpusItem item;
        item.problem = task.problem;
        item.plan = std::move(*mutant);
        item.label = Label::Invalid;
        item.kind = report.failed_step->kind;
        item.provenance = ItemProvenance::Mutated;
        item.seed = seed;
        item.mutation = kind;
        return item;
    });
}

CorpusResult gen_plans(const GroundedTask& task, const ConstraintPolicy& policy, const GenSpec& spec) {
    switch (spec.mode) {
    case GenMode::PlansForward: return gen_plans_forward(task, policy, spec);
    case GenMode::PlansReverse: return gen_plans_reverse(task, policy, spec);
    case GenMode::PlansInvalid: return gen_plans_invalid(task, policy, spec);
    case GenMode::Logs: break;
    }
    throw Error("gen_plans needs a plans-* mode");
}

nlohmann::ordered_json to_json(const CorpusItem& item, const DomainAst& domain) {
    nlohmann::ordered_json j;
    j["id"] = item.id;
    j["domain_text"] = pretty_print(domain);
    j["problem_text"] = pretty_print(item.problem);
    j["plan_text"] = format_plan(item.plan);
    j["label"] = to_string(item.label);
    if (item.kind)
        j["kind"] = to_string(*item.kind);
    j["provenance"] = to_string(item.provenance);
    j["seed"] = item.seed;
    return j;
}

void write_corpus(std::ostream& out, const std::vector<CorpusItem>& items, const DomainAst& domain) {
    for (const auto& item : items)
        out << to_json(item, domain).dump() << '\n';
    if (!out)
        throw Error("failed to write corpus");
}

double LogMetrics::accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(true_allow + true_deny) / static_cast<double>(total);
}

double LogMetrics::precision() const {
    auto predicted = true_allow + false_allow;
    return predicted == 0 ? 0.0 : static_cast<double>(true_allow) / static_cast<double>(predicted);
}

double LogMetrics::recall() const {
    auto actual = true_allow + false_deny;
    return actual == 0 ? 0.0 : static_cast<double>(true_allow) / static_cast<double>(actual);
}

LogMetrics log_metrics(const std::vector<DecisionRecord>& records) {
    LogMetrics m;
    for (const auto& r : records) {
        ++m.total;
        bool truth = r.ground_truth == Verdict::Allow;
        bool said = r.verdict == Verdict::Allow;
        if (truth && said)
            ++m.true_allow;
        else if (!truth && said)
            ++m.false_allow;
        else if (!truth)
            ++m.true_deny;
        else
            ++m.false_deny;
    }
    return m;
}

void write_metrics_csv(std::ostream& out, const LogMetrics& m) {
    out << "total,true_allow,false_allow,true_deny,false_deny,accuracy,precision,recall\n";
    out << m.total << ',' << m.true_allow << ',' << m.false_allow << ',' << m.true_deny << ','
        << m.false_deny << ',' << m.accuracy() << ',' << m.precision() << ',' << m.recall() << '\n';
}

void write_stats_csv(std::ostream& out, const GenStats& s, GenMode mode) {
    out << "mode,attempts,emitted,skipped_unsolvable,discarded_still_valid,dead_end_resamples,"
           "certification_failures,wall_time_s\n";
    out << to_string(mode) << ',' << s.attempts << ',' << s.emitted << ',' << s.skipped_unsolvable << ','
        << s.discarded_still_valid << ',' << s.dead_end_resamples << ',' << s.certification_failures
        << ',' << s.wall_time.count() << '\n';
}

}  // namespace acplan
