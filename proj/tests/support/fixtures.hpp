#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "acplan/grounding.hpp"
#include "acplan/pddl.hpp"
#include "acplan/planner.hpp"
#include "acplan/policy.hpp"

namespace support {

inline std::string fixture_path(const std::string& name) {
    return std::string(ACPLAN_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in)
        throw std::runtime_error("missing fixture " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Fixture {
    acplan::DomainAst domain;
    acplan::ProblemAst problem;
    acplan::GroundedTask task;
    acplan::ConstraintPolicy policy;
};

inline Fixture load(const std::string& domain, const std::string& problem, const std::string& policy) {
    Fixture f;
    f.domain = acplan::parse_domain(read_fixture(domain));
    f.problem = acplan::parse_problem(read_fixture(problem), f.domain);
    f.task = acplan::ground(f.domain, f.problem);
    f.policy = acplan::parse_policy(read_fixture(policy), f.domain);
    return f;
}

inline Fixture care_home() {
    return load("care-home.pddl", "care-home-problem.pddl", "care-home.policy");
}

inline Fixture river() { return load("river.pddl", "river-problem.pddl", "river.policy"); }

inline std::vector<std::string> labels(const acplan::Plan& plan) {
    std::vector<std::string> out;
    for (const auto& s : plan.steps)
        out.push_back(s.label());
    return out;
}

}  // namespace support
