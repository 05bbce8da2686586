#include "acplan/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acplan/datagen.hpp"
#include "acplan/decision_log.hpp"
#include "acplan/kb.hpp"
#include "acplan/planner.hpp"
#include "acplan/random.hpp"
#include "acplan/policy.hpp"
#include "acplan/validator.hpp"

namespace acplan::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Writes to `path`, or to `fallback` when the path is empty.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_)
                throw Error("cannot write '" + path + "'");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }
    void finish() {
        out_->flush();
        if (!*out_)
            throw Error("write failed");
    }

private:
    std::ofstream file_;
    std::ostream* out_;
};

struct TaskFlags {
    std::string domain;
    std::string problem;
    std::string policy;
    bool no_policy = false;
    std::string kb;
    bool inject_kb = false;
    std::string recorded;
};

void add_task_flags(CLI::App& cmd, TaskFlags& f) {
    cmd.add_option("domain", f.domain, "PDDL domain file")->required()->check(CLI::ExistingFile);
    cmd.add_option("problem", f.problem, "PDDL problem file")->required()->check(CLI::ExistingFile);
    cmd.add_option("--policy", f.policy,
                   "constraint policy file (default: <domain>.policy next to the domain, if present)")
        ->check(CLI::ExistingFile);
    cmd.add_flag("--no-policy", f.no_policy, "ignore any policy file");
    cmd.add_option("--kb", f.kb, "static knowledge-base JSON file")->check(CLI::ExistingFile);
    cmd.add_option("--kb-recorded", f.recorded,
                   "recorded chat replies used instead of a live endpoint")
        ->check(CLI::ExistingFile);
    cmd.add_flag("--inject-kb", f.inject_kb,
                 "add personal/non_personal facts from the knowledge base before planning");
}

struct LoadedTask {
    GroundedTask task;
    ConstraintPolicy policy;
    std::shared_ptr<AttributeKb> kb;
};

std::shared_ptr<AttributeKb> load_kb(const TaskFlags& f) {
    auto kb = std::make_shared<AttributeKb>(f.kb.empty() ? AttributeKb()
                                                         : AttributeKb::from_json(read_file(f.kb)));
    if (!f.recorded.empty())
        kb->set_endpoint(std::make_unique<RecordedChatEndpoint>(
            RecordedChatEndpoint::from_json(read_file(f.recorded))));
    else if (auto endpoint = endpoint_from_environment())
        kb->set_endpoint(std::move(endpoint));
    return kb;
}

LoadedTask load_task(const TaskFlags& f, std::ostream& err) {
    DomainAst domain = parse_domain(read_file(f.domain));
    ProblemAst problem = parse_problem(read_file(f.problem), domain);
    LoadedTask loaded;
    loaded.kb = load_kb(f);
    if (f.inject_kb) {
        std::vector<std::string> conflicts;
        problem = inject_facts(*loaded.kb, problem, attributable_objects(domain, problem), &conflicts);
        for (const auto& c : conflicts)
            err << "warning: " << c << '\n';
    }
    std::string policy_path = f.policy;
    if (policy_path.empty() && !f.no_policy) {
        fs::path sibling = fs::path(f.domain).replace_extension(".policy");
        if (fs::exists(sibling))
            policy_path = sibling.string();
    }
    loaded.task = ground(domain, problem);
    if (!policy_path.empty() && !f.no_policy)
        loaded.policy = parse_policy(read_file(policy_path), domain);
    return loaded;
}

/// "symbolic", "kb" or "noisy:<eps>" (noise over the symbolic oracle).
std::shared_ptr<const ConstraintOracle> make_oracle(const std::string& spec, const LoadedTask& t,
                                                    std::uint64_t seed) {
    if (spec == "symbolic")
        return std::make_shared<const SymbolicOracle>(t.policy, t.task);
    if (spec == "kb")
        return std::make_shared<const KbOracle>(t.policy, t.task, t.kb);
    if (spec.starts_with("noisy:")) {
        double eps = 0;
        std::string num = spec.substr(6);
        std::size_t used = 0;
        try {
            eps = std::stod(num, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (num.empty() || used != num.size())
            throw Error("bad noise level in oracle spec '" + spec + "'");
        auto inner = std::make_shared<const SymbolicOracle>(t.policy, t.task);
        return std::make_shared<const NoisyOracle>(inner, eps, seed);
    }
    throw Error("unknown oracle '" + spec + "' (expected symbolic, noisy:<eps> or kb)");
}

int cmd_plan(const TaskFlags& f, const std::string& oracle_spec, const std::string& algorithm,
             std::size_t max_expansions, std::uint64_t seed, const std::string& output,
             std::ostream& out, std::ostream& err) {
    LoadedTask t = load_task(f, err);
    SearchConfig config;
    config.algorithm = parse_search_algorithm(algorithm);
    config.max_expansions = max_expansions;
    config.oracle = make_oracle(oracle_spec, t, seed);
    if (!config.oracle->deterministic())
        err << "warning: the " << config.oracle->id()
            << " oracle is noisy; the plan respects the constraints only with some probability\n";
    SolveResult result = solve(t.task, config);

    nlohmann::ordered_json stats;
    stats["status"] = to_string(result.status);
    stats["algorithm"] = to_string(config.algorithm);
    stats["oracle"] = config.oracle->id();
    stats["plan_length"] = result.plan ? nlohmann::ordered_json(result.plan->cost()) : nlohmann::ordered_json();
    stats["expansions"] = result.stats.expansions;
    stats["generated"] = result.stats.generated;
    stats["pruned_by_constraints"] = result.stats.pruned_by_constraints;
    stats["duplicates"] = result.stats.duplicates;
    stats["wall_time_s"] = result.stats.wall_time.count();
    err << stats.dump() << '\n';

    if (result.status == SearchStatus::Unsolvable) {
        err << "no plan: the search space is exhausted\n";
        return kUnsolvable;
    }
    if (result.status == SearchStatus::ResourceLimit) {
        err << "no plan: expansion limit " << max_expansions << " reached\n";
        return kResourceLimit;
    }
    Output o(output, out);
    o.stream() << format_plan(*result.plan);
    o.finish();
    return kOk;
}

int cmd_validate(const TaskFlags& f, const std::string& plan_path, const std::string& oracle_spec,
                 std::uint64_t seed, bool json, bool all, std::ostream& out, std::ostream& err) {
    LoadedTask t = load_task(f, err);
    auto oracle = make_oracle(oracle_spec, t, seed);
    ValidationReport report = validate(t.task, *oracle, read_file(plan_path),
                                       ValidateOptions{.continue_past_constraints = all});
    if (json)
        out << to_json(report).dump(2) << '\n';
    else
        out << explain(report) << '\n';
    return report.valid ? kOk : kInvalidPlan;
}

int cmd_gen_logs(const TaskFlags& f, const std::string& oracle_spec, GenSpec spec,
                 const std::string& output, const std::string& metrics_csv, std::ostream& out,
                 std::ostream& err) {
    LoadedTask t = load_task(f, err);
    auto oracle = make_oracle(oracle_spec, t, spec.seed);
    spec.mode = GenMode::Logs;
    Output o(output, out);
    DecisionLogWriter writer(o.stream());
    auto records = gen_logs(t.task, t.policy, spec, *oracle, &writer);
    writer.close();
    LogMetrics m = log_metrics(records);
    err << "records " << m.total << ", accuracy " << m.accuracy() << ", precision " << m.precision()
        << ", recall " << m.recall() << " (allow is the positive class)\n";
    if (!metrics_csv.empty()) {
        Output csv(metrics_csv, err);
        write_metrics_csv(csv.stream(), m);
        csv.finish();
    }
    return kOk;
}

int cmd_gen_plans(const TaskFlags& f, GenSpec spec, const std::vector<std::string>& mutations,
                  double invalid_ratio, const std::string& output, const std::string& stats_csv,
                  std::ostream& out, std::ostream& err) {
    if (invalid_ratio < 0.0 || invalid_ratio > 1.0)
        throw Error("--invalid-ratio must lie in [0, 1]");
    if (!mutations.empty()) {
        spec.mutation_kinds.clear();
        for (const auto& m : mutations)
            spec.mutation_kinds.insert(parse_mutation_kind(m));
    }
    if (spec.mode == GenMode::Logs)
        throw Error("gen-plans needs --mode forward, reverse or invalid");
    LoadedTask t = load_task(f, err);

    std::vector<CorpusItem> items;
    GenStats total;
    auto add = [&](CorpusResult r) {
        for (auto& item : r.items) {
            item.id = items.size();
            items.push_back(std::move(item));
        }
        total.attempts += r.stats.attempts;
        total.emitted += r.stats.emitted;
        total.skipped_unsolvable += r.stats.skipped_unsolvable;
        total.discarded_still_valid += r.stats.discarded_still_valid;
        total.dead_end_resamples += r.stats.dead_end_resamples;
        total.certification_failures += r.stats.certification_failures;
        total.wall_time += r.stats.wall_time;
    };
    std::size_t requested = spec.count;
    if (spec.mode == GenMode::PlansInvalid || invalid_ratio == 0.0) {
        add(gen_plans(t.task, t.policy, spec));
    } else {
        auto n_invalid = static_cast<std::size_t>(std::llround(invalid_ratio * static_cast<double>(spec.count)));
        if (n_invalid < spec.count) {
            GenSpec valid = spec;
            valid.count = spec.count - n_invalid;
            add(gen_plans(t.task, t.policy, valid));
        }
        if (n_invalid > 0) {
            GenSpec invalid = spec;
            invalid.mode = GenMode::PlansInvalid;
            invalid.count = n_invalid;
            invalid.seed = counter_draw(spec.seed, 0xffffffffull);
            add(gen_plans(t.task, t.policy, invalid));
        }
    }
    Output o(output, out);
    write_corpus(o.stream(), items, t.task.domain);
    o.finish();
    err << "emitted " << items.size() << " of " << requested << " items (" << total.attempts
        << " attempts, " << total.skipped_unsolvable << " unsolvable, " << total.discarded_still_valid
        << " discarded mutants, " << total.dead_end_resamples << " walk resamples)\n";
    if (!stats_csv.empty()) {
        Output csv(stats_csv, err);
        write_stats_csv(csv.stream(), total, spec.mode);
        csv.finish();
    }
    return items.size() == requested ? kOk : kUnsolvable;
}

int cmd_kb(const std::string& object, const std::string& context, const TaskFlags& f,
           std::ostream& out) {
    auto kb = load_kb(f);
    KbAnswer a = query_attribute(*kb, object, context);
    nlohmann::ordered_json j;
    j["object"] = a.object;
    j["attribute"] = to_string(a.attribute);
    j["provenance"] = to_string(a.provenance);
    j["raw_response"] = a.raw_response;
    if (!a.warning.empty())
        j["warning"] = a.warning;
    out << j.dump(2) << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constraint-aware PDDL planning, validation and synthetic data generation", "acplan"};
    app.require_subcommand(1);

    TaskFlags task;
    std::string oracle = "symbolic";
    std::string algorithm = "bfs";
    std::size_t max_expansions = 1'000'000;
    std::uint64_t seed = 0;
    std::string output;

    auto* plan = app.add_subcommand("plan", "find a constraint-respecting plan");
    add_task_flags(*plan, task);
    plan->add_option("--oracle", oracle, "symbolic | noisy:<eps> | kb")->capture_default_str();
    plan->add_option("--algorithm", algorithm, "bfs | astar-goalcount")->capture_default_str();
    plan->add_option("--max-expansions", max_expansions)->capture_default_str()->check(CLI::PositiveNumber);
    plan->add_option("--seed", seed, "seed of a noisy oracle")->capture_default_str();
    plan->add_option("-o,--output", output, "plan file (default: standard output)");

    std::string plan_path;
    bool json = false;
    bool all = false;
    auto* validate_cmd = app.add_subcommand("validate", "check a plan step by step");
    add_task_flags(*validate_cmd, task);
    validate_cmd->add_option("plan", plan_path, "plan file")->required()->check(CLI::ExistingFile);
    validate_cmd->add_option("--oracle", oracle, "symbolic | noisy:<eps> | kb")->capture_default_str();
    validate_cmd->add_option("--seed", seed, "seed of a noisy oracle")->capture_default_str();
    validate_cmd->add_flag("--json", json, "print the report as JSON");
    validate_cmd->add_flag("--all", all, "keep simulating past constraint failures and list them all");

    GenSpec spec;
    std::string metrics_csv;
    auto* logs = app.add_subcommand("gen-logs", "generate a labeled access-decision log (JSONL)");
    add_task_flags(*logs, task);
    logs->add_option("--oracle", oracle, "symbolic | noisy:<eps> | kb")->capture_default_str();
    logs->add_option("--count", spec.count)->capture_default_str()->check(CLI::PositiveNumber);
    logs->add_option("--seed", seed)->capture_default_str();
    logs->add_flag("--balanced", spec.balanced, "alternate allow and deny ground truths");
    logs->add_option("--walk-length", spec.walk_length)->capture_default_str()->check(CLI::PositiveNumber);
    logs->add_option("-o,--output", output, "log file (default: standard output)");
    logs->add_option("--metrics-csv", metrics_csv, "write accuracy/precision/recall as CSV");

    std::string mode = "forward";
    std::vector<std::string> mutations;
    double invalid_ratio = 0.0;
    std::string stats_csv;
    auto* plans = app.add_subcommand("gen-plans", "generate a (problem, plan, label) corpus (JSONL)");
    add_task_flags(*plans, task);
    plans->add_option("--mode", mode, "forward | reverse | invalid")->capture_default_str();
    plans->add_option("--count", spec.count)->capture_default_str()->check(CLI::PositiveNumber);
    plans->add_option("--seed", seed)->capture_default_str();
    plans->add_option("--depth", spec.depth, "reverse walk length")->capture_default_str();
    plans->add_option("--mutations", mutations, "drop, swap, substitute, insert-denied (default: all)")
        ->delimiter(',');
    plans->add_option("--invalid-ratio", invalid_ratio,
                      "fraction of items replaced by invalid mutants in forward/reverse mode")
        ->capture_default_str();
    plans->add_option("--max-expansions", spec.max_expansions)->capture_default_str()->check(CLI::PositiveNumber);
    plans->add_option("--workers", spec.workers)->capture_default_str()->check(CLI::PositiveNumber);
    plans->add_option("-o,--output", output, "corpus file (default: standard output)");
    plans->add_option("--stats-csv", stats_csv, "write generation counters as CSV");

    std::string object;
    std::string context;
    auto* kb = app.add_subcommand("kb", "ask whether an object is personal");
    kb->add_option("object", object)->required();
    kb->add_option("--context", context);
    kb->add_option("--kb", task.kb, "static knowledge-base JSON file")->check(CLI::ExistingFile);
    kb->add_option("--kb-recorded", task.recorded, "recorded chat replies")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*plan)
            return cmd_plan(task, oracle, algorithm, max_expansions, seed, output, out, err);
        if (*validate_cmd)
            return cmd_validate(task, plan_path, oracle, seed, json, all, out, err);
        spec.seed = seed;
        if (*logs)
            return cmd_gen_logs(task, oracle, spec, output, metrics_csv, out, err);
        if (*plans) {
            spec.mode = parse_gen_mode(mode);
            return cmd_gen_plans(task, spec, mutations, invalid_ratio, output, stats_csv, out, err);
        }
        if (*kb)
            return cmd_kb(object, context, task, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace acplan::cli
