#include "acplan/decision_log.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace acplan {

namespace {

const char* const kFields[] = {"query_id",     "subject",      "action",  "object", "state_digest",
                               "ground_truth", "verdict",      "oracle_id", "seed"};

}  // namespace

std::string to_json_line(const DecisionRecord& r) {
    nlohmann::ordered_json j;
    j["query_id"] = r.query_id;
    j["subject"] = r.subject;
    j["action"] = r.action;
    j["object"] = r.object;
    j["state_digest"] = r.state_digest;
    j["ground_truth"] = to_string(r.ground_truth);
    j["verdict"] = to_string(r.verdict);
    j["oracle_id"] = r.oracle_id;
    j["seed"] = r.seed;
    return j.dump();
}

DecisionRecord parse_json_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("malformed decision record: ") + e.what());
    }
    if (!j.is_object())
        throw Error("malformed decision record: expected a JSON object");
    for (const char* f : kFields)
        if (!j.contains(f))
            throw Error(std::string("decision record is missing field '") + f + "'");
    if (j.size() != std::size(kFields))
        throw Error("decision record has unexpected fields");
    try {
        DecisionRecord r;
        r.query_id = j.at("query_id").get<std::uint64_t>();
        r.subject = j.at("subject").get<std::string>();
        r.action = j.at("action").get<std::string>();
        r.object = j.at("object").get<std::string>();
        r.state_digest = j.at("state_digest").get<std::string>();
        r.ground_truth = parse_verdict(j.at("ground_truth").get<std::string>());
        r.verdict = parse_verdict(j.at("verdict").get<std::string>());
        r.oracle_id = j.at("oracle_id").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed decision record: ") + e.what());
    }
}

DecisionLogWriter::DecisionLogWriter(std::ostream& out) : out_(&out) {}

DecisionLogWriter::DecisionLogWriter(const std::string& path) : file_(path), out_(&file_) {
    if (!file_)
        throw Error("cannot open decision log '" + path + "' for writing");
}

DecisionLogWriter::~DecisionLogWriter() {
    if (!closed_ && out_ != nullptr)
        out_->flush();
}

void DecisionLogWriter::write(const DecisionRecord& record) {
    if (closed_)
        throw Error("decision log is closed");
    if (last_id_ && record.query_id <= *last_id_)
        throw Error("decision log query ids must be strictly increasing (got " +
                    std::to_string(record.query_id) + " after " + std::to_string(*last_id_) + ")");
    *out_ << to_json_line(record) << '\n';
    if (!*out_)
        throw Error("failed to write decision record " + std::to_string(record.query_id));
    last_id_ = record.query_id;
    ++written_;
}

void DecisionLogWriter::close() {
    if (closed_)
        return;
    out_->flush();
    closed_ = true;
    if (!*out_)
        throw Error("failed to flush decision log");
    if (file_.is_open())
        file_.close();
}

void log_decision(DecisionLogWriter& sink, const DecisionRecord& record) {
    sink.write(record);
}

std::vector<DecisionRecord> read_decision_log(std::istream& in) {
    std::vector<DecisionRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        out.push_back(parse_json_line(line));
    }
    return out;
}

}  // namespace acplan
