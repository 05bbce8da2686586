#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acplan/oracle.hpp"

namespace acplan {

/// One (subject, action, object) access query with its ground truth and the
/// verdict of the oracle under test.
struct DecisionRecord {
    std::uint64_t query_id = 0;
    std::string subject;
    std::string action;
    std::string object;
    std::string state_digest;
    Verdict ground_truth = Verdict::Allow;
    Verdict verdict = Verdict::Allow;
    std::string oracle_id;
    std::uint64_t seed = 0;

    friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

/// Single JSON object, keys in schema order, no trailing newline.
std::string to_json_line(const DecisionRecord& r);
/// Throws Error on malformed input or missing/extra fields.
DecisionRecord parse_json_line(std::string_view line);

/// Append-only JSONL sink. Query ids must be strictly increasing.
class DecisionLogWriter {
public:
    explicit DecisionLogWriter(std::ostream& out);
    /// Opens (truncates) `path`; throws Error when it cannot be opened.
    explicit DecisionLogWriter(const std::string& path);

    DecisionLogWriter(const DecisionLogWriter&) = delete;
    DecisionLogWriter& operator=(const DecisionLogWriter&) = delete;
    ~DecisionLogWriter();

    /// Throws Error on I/O failure or a non-increasing query id.
    void write(const DecisionRecord& record);
    /// Flushes; throws Error if the stream went bad.
    void close();

    std::size_t written() const noexcept { return written_; }

private:
    std::ofstream file_;
    std::ostream* out_;
    std::optional<std::uint64_t> last_id_;
    std::size_t written_ = 0;
    bool closed_ = false;
};

void log_decision(DecisionLogWriter& sink, const DecisionRecord& record);

/// Reads every non-empty line of a decision log.
std::vector<DecisionRecord> read_decision_log(std::istream& in);

}  // namespace acplan
