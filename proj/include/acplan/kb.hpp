#pragma once

// Object-privacy attribution: a static JSON knowledge base, optionally
// backed by an OpenAI-style chat-completions endpoint, whose answers become
// (personal x) / (non_personal x) facts for the planner.

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "acplan/error.hpp"
#include "acplan/oracle.hpp"
#include "acplan/pddl.hpp"

namespace acplan {

inline constexpr std::string_view kPersonalPredicate = "personal";
inline constexpr std::string_view kNonPersonalPredicate = "non_personal";

enum class Attribute { Personal, NonPersonal };
enum class Provenance { Static, Llm, Default };

std::string_view to_string(Attribute a);
std::string_view to_string(Provenance p);
/// Accepts "personal" and "non_personal".
Attribute parse_attribute(std::string_view s);

struct KbQuery {
    std::string object;
    std::string context;
};

struct KbAnswer {
    std::string object;
    Attribute attribute = Attribute::Personal;
    Provenance provenance = Provenance::Default;
    /// Endpoint reply verbatim; empty for static and default answers.
    std::string raw_response;
    /// Set when the default was used because the endpoint failed or was unclear.
    std::string warning;

    friend bool operator==(const KbAnswer&, const KbAnswer&) = default;
};

class TransportError : public Error {
public:
    using Error::Error;
};

/// A chat model that answers one prompt. Implementations throw TransportError
/// when no reply could be obtained.
class ChatEndpoint {
public:
    virtual ~ChatEndpoint() = default;
    virtual std::string complete(const KbQuery& query, const std::string& prompt) = 0;
};

/// POSTs {model, messages, temperature: 0, top_p: 1, n: 1} to
/// `<url>` (e.g. http://host:8080/v1/chat/completions) and returns
/// choices[0].message.content.
class HttpChatEndpoint final : public ChatEndpoint {
public:
    HttpChatEndpoint(std::string url, std::string api_key, std::string model,
                     double timeout_seconds = 30.0);

    std::string complete(const KbQuery& query, const std::string& prompt) override;

private:
    std::string scheme_host_port_;
    std::string path_;
    std::string api_key_;
    std::string model_;
    double timeout_seconds_;
};

/// Offline stub: canned replies keyed by object name. The file is a JSON
/// object {"<object>": "<reply text>", ...}; a "<object>|<context>" key
/// takes precedence when a context is given.
class RecordedChatEndpoint final : public ChatEndpoint {
public:
    explicit RecordedChatEndpoint(std::map<std::string, std::string> replies);
    static RecordedChatEndpoint from_json(std::string_view text);

    std::string complete(const KbQuery& query, const std::string& prompt) override;

private:
    std::map<std::string, std::string> replies_;
};

/// Endpoint from ACPLAN_LLM_URL / ACPLAN_LLM_API_KEY / ACPLAN_LLM_MODEL, or
/// null when ACPLAN_LLM_URL is unset.
std::unique_ptr<ChatEndpoint> endpoint_from_environment();

std::string build_prompt(std::string_view object, std::string_view context);

/// First case-insensitive "yes" or "no" word in `reply`.
std::optional<bool> parse_yes_no(std::string_view reply);

/// Object -> attribute map with an optional endpoint for unknown objects.
/// Answers are cached; concurrent queries are safe and endpoint calls are
/// serialized.
class AttributeKb {
public:
    enum class Source { StaticFile, LlmEndpoint, Mixed };

    AttributeKb() = default;
    explicit AttributeKb(std::map<std::string, Attribute> entries);
    /// Moves entries, endpoint and cache; `other` must not be in use concurrently.
    AttributeKb(AttributeKb&& other) noexcept;

    /// Static KB file: {"diary": "personal", "dishes": "non_personal", ...}.
    static AttributeKb from_json(std::string_view text);

    void set_endpoint(std::unique_ptr<ChatEndpoint> endpoint);

    KbAnswer query(const KbQuery& q);

    const std::map<std::string, Attribute>& entries() const noexcept { return entries_; }
    Source source() const;
    std::size_t endpoint_calls() const;

private:
    std::map<std::string, Attribute> entries_;
    std::unique_ptr<ChatEndpoint> endpoint_;
    std::map<std::string, KbAnswer> cache_;
    mutable std::shared_mutex cache_mutex_;
    std::mutex endpoint_mutex_;
    std::size_t endpoint_calls_ = 0;
};

/// Static entry, else endpoint (one retry on transport error), else the
/// conservative default `personal`.
KbAnswer query_attribute(AttributeKb& kb, std::string_view object, std::string_view context = {});

/// Adds one attribute fact per object. Objects that already carry a
/// personal/non_personal fact keep it; disagreements with a static or
/// endpoint answer (not with the default) are appended to `conflicts`.
ProblemAst inject_facts(AttributeKb& kb, const ProblemAst& problem,
                        const std::vector<std::string>& objects,
                        std::vector<std::string>* conflicts = nullptr);

/// Problem objects whose type fits the parameter of the `personal` predicate.
std::vector<std::string> attributable_objects(const DomainAst& domain, const ProblemAst& problem);

/// Symbolic policy evaluation where missing personal/non_personal facts about
/// an action's arguments are filled in from the knowledge base.
class KbOracle final : public ConstraintOracle {
public:
    KbOracle(ConstraintPolicy policy, const GroundedTask& task, std::shared_ptr<AttributeKb> kb);

    AccessDecision decide(const State& state, const GroundAction& action,
                          std::uint64_t query_id) const override;
    AccessDecision check_state(const State& state) const override;
    bool deterministic() const override { return true; }
    std::string id() const override { return "kb"; }

private:
    State with_attributes(const State& state, const std::vector<std::string>& objects) const;

    SymbolicOracle inner_;
    std::shared_ptr<AttributeKb> kb_;
    std::set<std::string, std::less<>> attributable_;
    std::vector<std::string> all_attributable_;
};

}  // namespace acplan
