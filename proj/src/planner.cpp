#include "acplan/planner.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace acplan {

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    State state;
    std::size_t parent;
    const GroundAction* action;
    std::size_t depth;
};

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

Plan reconstruct(const std::vector<Node>& nodes, std::size_t leaf) {
    Plan plan;
    for (std::size_t i = leaf; nodes[i].parent != kNoParent; i = nodes[i].parent)
        plan.steps.push_back(*nodes[i].action);
    std::reverse(plan.steps.begin(), plan.steps.end());
    return plan;
}

/// Successor of `state` under `action` if the oracle permits it, else nullopt.
class SuccessorGenerator {
public:
    SuccessorGenerator(const GroundedTask& task, const SearchConfig& config, SearchStats& stats)
        : task_(task), oracle_(config.oracle.get()), stats_(stats) {}

    template <typename Visit>
    void expand(const State& state, Visit&& visit) {
        for (const auto& action : task_.actions) {
            if (!applicable(action, state))
                continue;
            ++stats_.generated;
            State next = apply_unchecked(state, action);
            if (oracle_ != nullptr) {
                if (!oracle_->decide(state, action, next_query_++).allowed() ||
                    !oracle_->check_state(next).allowed()) {
                    ++stats_.pruned_by_constraints;
                    continue;
                }
            }
            if (!visit(action, std::move(next)))
                return;
        }
    }

private:
    const GroundedTask& task_;
    const ConstraintOracle* oracle_;
    SearchStats& stats_;
    std::uint64_t next_query_ = 0;
};

void check_config(const SearchConfig& config) {
    if (config.max_expansions == 0)
        throw Error("max_expansions must be positive");
}

SolveResult solve_bfs(const GroundedTask& task, const SearchConfig& config, SearchStats& stats) {
    SolveResult result;
    if (evaluate(task.goal, task.init, task.objects_by_type)) {
        result.status = SearchStatus::Solved;
        result.plan = Plan{};
        return result;
    }
    std::vector<Node> nodes{{task.init, kNoParent, nullptr, 0}};
    std::unordered_set<State> seen{task.init};
    std::deque<std::size_t> open{0};
    SuccessorGenerator successors(task, config, stats);

    while (!open.empty()) {
        if (stats.expansions >= config.max_expansions) {
            result.status = SearchStatus::ResourceLimit;
            return result;
        }
        std::size_t current = open.front();
        open.pop_front();
        ++stats.expansions;
        std::optional<std::size_t> goal_node;
        State state = nodes[current].state;
        successors.expand(state, [&](const GroundAction& action, State next) {
            if (!seen.insert(next).second) {
                ++stats.duplicates;
                return true;
            }
            bool is_goal = evaluate(task.goal, next, task.objects_by_type);
            nodes.push_back({std::move(next), current, &action, nodes[current].depth + 1});
            if (is_goal) {
                goal_node = nodes.size() - 1;
                return false;
            }
            open.push_back(nodes.size() - 1);
            return true;
        });
        if (goal_node) {
            result.status = SearchStatus::Solved;
            result.plan = reconstruct(nodes, *goal_node);
            return result;
        }
    }
    result.status = SearchStatus::Unsolvable;
    return result;
}

SolveResult solve_astar(const GroundedTask& task, const SearchConfig& config, SearchStats& stats) {
    struct Entry {
        std::size_t f, h, seq, node;
        bool operator>(const Entry& o) const {
            return std::tie(f, h, seq) > std::tie(o.f, o.h, o.seq);
        }
    };
    SolveResult result;
    std::vector<Node> nodes{{task.init, kNoParent, nullptr, 0}};
    std::unordered_set<State> seen{task.init};
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::size_t seq = 0;
    auto h0 = unsatisfied_goal_conjuncts(task.goal, task.init, task.objects_by_type);
    open.push({h0, h0, seq++, 0});
    SuccessorGenerator successors(task, config, stats);

    while (!open.empty()) {
        Entry top = open.top();
        open.pop();
        if (evaluate(task.goal, nodes[top.node].state, task.objects_by_type)) {
            result.status = SearchStatus::Solved;
            result.plan = reconstruct(nodes, top.node);
            return result;
        }
        if (stats.expansions >= config.max_expansions) {
            result.status = SearchStatus::ResourceLimit;
            return result;
        }
        ++stats.expansions;
        State state = nodes[top.node].state;
        std::size_t depth = nodes[top.node].depth;
        successors.expand(state, [&](const GroundAction& action, State next) {
            if (!seen.insert(next).second) {
                ++stats.duplicates;
                return true;
            }
            auto h = unsatisfied_goal_conjuncts(task.goal, next, task.objects_by_type);
            nodes.push_back({std::move(next), top.node, &action, depth + 1});
            open.push({depth + 1 + h, h, seq++, nodes.size() - 1});
            return true;
        });
    }
    result.status = SearchStatus::Unsolvable;
    return result;
}

std::size_t count_unsatisfied(const Formula& f, const State& state, const ObjectsByType& objects,
                              Binding& binding) {
    if (f.kind == Formula::Kind::And) {
        std::size_t n = 0;
        for (const auto& c : f.children)
            n += count_unsatisfied(c, state, objects, binding);
        return n;
    }
    if (f.kind == Formula::Kind::Forall) {
        std::size_t n = 0;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == f.variables.size()) {
                n += count_unsatisfied(f.children.front(), state, objects, binding);
                return;
            }
            const auto& var = f.variables[i];
            auto it = objects.find(var.type);
            if (it == objects.end())
                return;
            for (const auto& obj : it->second) {
                binding[var.name] = obj;
                rec(i + 1);
            }
            binding.erase(var.name);
        };
        rec(0);
        return n;
    }
    return evaluate(f, state, objects, binding) ? 0 : 1;
}

[[noreturn]] void plan_error(std::size_t line, std::size_t column, const std::string& msg) {
    throw ParseError(SourcePos{line, column}, msg);
}

}  // namespace

std::string_view to_string(SearchAlgorithm a) {
    return a == SearchAlgorithm::Bfs ? "bfs" : "astar-goalcount";
}

SearchAlgorithm parse_search_algorithm(std::string_view s) {
    if (s == "bfs")
        return SearchAlgorithm::Bfs;
    if (s == "astar-goalcount")
        return SearchAlgorithm::AstarGoalCount;
    throw Error("unknown search algorithm '" + std::string(s) + "' (expected bfs or astar-goalcount)");
}

std::string_view to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::Unsolvable: return "unsolvable";
    case SearchStatus::ResourceLimit: return "resource-limit";
    }
    return "unknown";
}

std::size_t unsatisfied_goal_conjuncts(const Formula& goal, const State& state,
                                       const ObjectsByType& objects) {
    Binding binding;
    return count_unsatisfied(goal, state, objects, binding);
}

SolveResult solve(const GroundedTask& task, const SearchConfig& config) {
    check_config(config);
    SearchStats stats;
    auto start = Clock::now();
    SolveResult result = config.algorithm == SearchAlgorithm::Bfs ? solve_bfs(task, config, stats)
                                                                  : solve_astar(task, config, stats);
    stats.wall_time = Clock::now() - start;
    result.stats = stats;
    return result;
}

EnumerationResult enumerate_plans(const GroundedTask& task, const SearchConfig& config,
                                  std::size_t max_len) {
    check_config(config);
    EnumerationResult result;
    auto start = Clock::now();
    SearchStats& stats = result.stats;
    SuccessorGenerator successors(task, config, stats);
    std::unordered_set<State> on_path{task.init};
    std::vector<GroundAction> path;
    bool aborted = false;

    std::function<void(const State&)> dfs = [&](const State& state) {
        if (evaluate(task.goal, state, task.objects_by_type))
            result.plans.push_back(Plan{path});
        if (path.size() == max_len)
            return;
        if (stats.expansions >= config.max_expansions) {
            aborted = true;
            return;
        }
        ++stats.expansions;
        successors.expand(state, [&](const GroundAction& action, State next) {
            if (on_path.contains(next)) {
                ++stats.duplicates;
                return true;
            }
            on_path.insert(next);
            path.push_back(action);
            dfs(next);
            path.pop_back();
            on_path.erase(next);
            return !aborted;
        });
    };
    dfs(task.init);

    std::sort(result.plans.begin(), result.plans.end());
    result.status = aborted ? SearchStatus::ResourceLimit : SearchStatus::Solved;
    stats.wall_time = Clock::now() - start;
    return result;
}

// ---------------------------------------------------------------------------

std::string PlanStep::label() const {
    std::string out = "(" + schema;
    for (const auto& a : args)
        out += " " + a;
    return out + ")";
}

std::vector<PlanStep> parse_plan_text(std::string_view text) {
    std::vector<PlanStep> steps;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        ++line_no;
        begin = end + 1;

        if (auto semi = line.find(';'); semi != std::string_view::npos)
            line = line.substr(0, semi);
        std::size_t col = 0;
        auto skip_ws = [&] {
            while (col < line.size() && (line[col] == ' ' || line[col] == '\t' || line[col] == '\r'))
                ++col;
        };
        skip_ws();
        if (col == line.size())
            continue;

        // Optional "N:" prefix.
        if (std::isdigit(static_cast<unsigned char>(line[col]))) {
            std::size_t digits = col;
            while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits])))
                ++digits;
            std::size_t after = digits;
            while (after < line.size() && (line[after] == ' ' || line[after] == '\t'))
                ++after;
            if (after >= line.size() || line[after] != ':')
                plan_error(line_no, col + 1, "expected ':' after step number");
            col = after + 1;
            skip_ws();
        }
        if (col == line.size() || line[col] != '(')
            plan_error(line_no, col + 1, "expected '(' starting a plan step");

        std::vector<SExpr> exprs;
        try {
            exprs = read_sexprs(line.substr(col));
        } catch (const ParseError& e) {
            std::size_t c = e.pos().line == 1 ? col + e.pos().column : e.pos().column;
            plan_error(line_no, c, e.message());
        }
        if (exprs.size() != 1)
            plan_error(line_no, col + exprs[1].pos.column, "expected exactly one step per line");
        const SExpr& step = exprs.front();
        if (step.items.empty())
            plan_error(line_no, col + 1, "empty plan step");
        PlanStep ps;
        ps.line = line_no;
        for (std::size_t i = 0; i < step.items.size(); ++i) {
            const SExpr& item = step.items[i];
            if (!item.is_symbol() || is_variable(item.text))
                plan_error(line_no, col + item.pos.column,
                           "plan steps contain only an action name and object names, found " +
                               describe(item));
            (i == 0 ? ps.schema : ps.args.emplace_back()) = item.text;
        }
        steps.push_back(std::move(ps));
    }
    return steps;
}

std::string format_plan(const Plan& plan, bool numbered) {
    std::string out;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        if (numbered)
            out += std::to_string(i + 1) + ": ";
        out += plan.steps[i].label();
        out += '\n';
    }
    return out;
}

}  // namespace acplan
