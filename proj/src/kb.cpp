#include "acplan/kb.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace acplan {

std::string_view to_string(Attribute a) {
    return a == Attribute::Personal ? kPersonalPredicate : kNonPersonalPredicate;
}

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::Static: return "static";
    case Provenance::Llm: return "llm";
    case Provenance::Default: return "default";
    }
    return "default";
}

Attribute parse_attribute(std::string_view s) {
    if (s == kPersonalPredicate)
        return Attribute::Personal;
    if (s == kNonPersonalPredicate)
        return Attribute::NonPersonal;
    throw Error("invalid attribute '" + std::string(s) + "' (expected personal or non_personal)");
}

// ---------------------------------------------------------------------------

HttpChatEndpoint::HttpChatEndpoint(std::string url, std::string api_key, std::string model,
                                   double timeout_seconds)
    : api_key_(std::move(api_key)), model_(std::move(model)), timeout_seconds_(timeout_seconds) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error("endpoint URL '" + url + "' lacks a scheme (http:// or https://)");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host_port_ = url;
        path_ = "/v1/chat/completions";
    } else {
        scheme_host_port_ = url.substr(0, path_start);
        path_ = url.substr(path_start);
    }
    if (model_.empty())
        model_ = "gpt-4";
}

std::string HttpChatEndpoint::complete(const KbQuery&, const std::string& prompt) {
    nlohmann::json body = {
        {"model", model_},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", 0},
        {"top_p", 1},
        {"n", 1},
    };
    httplib::Client client(scheme_host_port_);
    auto secs = static_cast<time_t>(timeout_seconds_);
    auto usecs = static_cast<time_t>((timeout_seconds_ - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    httplib::Headers headers;
    if (!api_key_.empty())
        headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res)
        throw TransportError("chat endpoint request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw TransportError("chat endpoint returned HTTP " + std::to_string(res->status));
    try {
        auto reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed chat endpoint response: ") + e.what());
    }
}

RecordedChatEndpoint::RecordedChatEndpoint(std::map<std::string, std::string> replies)
    : replies_(std::move(replies)) {}

RecordedChatEndpoint RecordedChatEndpoint::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("malformed recorded-responses file: ") + e.what());
    }
    if (!j.is_object())
        throw Error("recorded-responses file must be a JSON object");
    std::map<std::string, std::string> replies;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string())
            throw Error("recorded response for '" + key + "' must be a string");
        replies.emplace(key, value.get<std::string>());
    }
    return RecordedChatEndpoint(std::move(replies));
}

std::string RecordedChatEndpoint::complete(const KbQuery& query, const std::string&) {
    if (!query.context.empty())
        if (auto it = replies_.find(query.object + "|" + query.context); it != replies_.end())
            return it->second;
    if (auto it = replies_.find(query.object); it != replies_.end())
        return it->second;
    throw TransportError("no recorded response for '" + query.object + "'");
}

std::unique_ptr<ChatEndpoint> endpoint_from_environment() {
    const char* url = std::getenv("ACPLAN_LLM_URL");
    if (url == nullptr || *url == '\0')
        return nullptr;
    const char* key = std::getenv("ACPLAN_LLM_API_KEY");
    const char* model = std::getenv("ACPLAN_LLM_MODEL");
    return std::make_unique<HttpChatEndpoint>(url, key ? key : "", model ? model : "");
}

std::string build_prompt(std::string_view object, std::string_view context) {
    std::string prompt = "Answer strictly 'yes' or 'no': would a ";
    prompt += object;
    prompt += " in a care-home resident's room be considered a personal, private belonging?";
    prompt += " Context: ";
    prompt += context.empty() ? std::string_view("none") : context;
    return prompt;
}

std::optional<bool> parse_yes_no(std::string_view reply) {
    std::size_t i = 0;
    while (i < reply.size()) {
        while (i < reply.size() && !std::isalpha(static_cast<unsigned char>(reply[i])))
            ++i;
        std::size_t start = i;
        while (i < reply.size() && std::isalpha(static_cast<unsigned char>(reply[i])))
            ++i;
        std::string word(reply.substr(start, i - start));
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (word == "yes")
            return true;
        if (word == "no")
            return false;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

AttributeKb::AttributeKb(std::map<std::string, Attribute> entries) : entries_(std::move(entries)) {}

AttributeKb::AttributeKb(AttributeKb&& other) noexcept
    : entries_(std::move(other.entries_)), endpoint_(std::move(other.endpoint_)),
      cache_(std::move(other.cache_)), endpoint_calls_(other.endpoint_calls_) {}

AttributeKb AttributeKb::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("malformed knowledge-base file: ") + e.what());
    }
    if (!j.is_object())
        throw Error("knowledge-base file must be a JSON object");
    std::map<std::string, Attribute> entries;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string())
            throw Error("knowledge-base entry '" + key + "' must be a string");
        std::string name = key;
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        entries[name] = parse_attribute(value.get<std::string>());
    }
    return AttributeKb(std::move(entries));
}

void AttributeKb::set_endpoint(std::unique_ptr<ChatEndpoint> endpoint) {
    std::scoped_lock lock(endpoint_mutex_);
    endpoint_ = std::move(endpoint);
}

AttributeKb::Source AttributeKb::source() const {
    if (endpoint_ && entries_.empty())
        return Source::LlmEndpoint;
    if (endpoint_)
        return Source::Mixed;
    return Source::StaticFile;
}

std::size_t AttributeKb::endpoint_calls() const {
    std::shared_lock lock(cache_mutex_);
    return endpoint_calls_;
}

KbAnswer AttributeKb::query(const KbQuery& q) {
    KbAnswer answer;
    answer.object = q.object;
    if (auto it = entries_.find(q.object); it != entries_.end()) {
        answer.attribute = it->second;
        answer.provenance = Provenance::Static;
        return answer;
    }
    const std::string key = q.object + '\x1f' + q.context;
    {
        std::shared_lock lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end())
            return it->second;
    }

    std::scoped_lock serial(endpoint_mutex_);
    {
        std::shared_lock lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end())
            return it->second;
    }
    answer.attribute = Attribute::Personal;
    answer.provenance = Provenance::Default;
    if (endpoint_) {
        std::string prompt = build_prompt(q.object, q.context);
        std::optional<std::string> reply;
        std::string last_error;
        for (int attempt = 0; attempt < 2 && !reply; ++attempt) {
            {
                std::unique_lock lock(cache_mutex_);
                ++endpoint_calls_;
            }
            try {
                reply = endpoint_->complete(q, prompt);
            } catch (const TransportError& e) {
                last_error = e.what();
            }
        }
        if (!reply) {
            answer.warning = "endpoint unreachable after retry (" + last_error +
                             "); defaulting to personal";
        } else if (auto yes = parse_yes_no(*reply)) {
            answer.attribute = *yes ? Attribute::Personal : Attribute::NonPersonal;
            answer.provenance = Provenance::Llm;
            answer.raw_response = *reply;
        } else {
            answer.raw_response = *reply;
            answer.warning = "reply contains no yes/no answer; defaulting to personal";
        }
    }
    std::unique_lock lock(cache_mutex_);
    cache_.emplace(key, answer);
    return answer;
}

KbAnswer query_attribute(AttributeKb& kb, std::string_view object, std::string_view context) {
    return kb.query(KbQuery{std::string(object), std::string(context)});
}

std::vector<std::string> attributable_objects(const DomainAst& domain, const ProblemAst& problem) {
    const PredicateDecl* decl = domain.find_predicate(kPersonalPredicate);
    if (decl == nullptr || decl->params.size() != 1)
        return {};
    std::vector<std::string> out;
    for (const auto& o : problem.objects)
        if (type_fits(o.type, decl->params.front().type))
            out.push_back(o.name);
    return out;
}

ProblemAst inject_facts(AttributeKb& kb, const ProblemAst& problem,
                        const std::vector<std::string>& objects,
                        std::vector<std::string>* conflicts) {
    ProblemAst out = problem;
    for (const auto& obj : objects) {
        GroundAtom personal{std::string(kPersonalPredicate), {obj}};
        GroundAtom non_personal{std::string(kNonPersonalPredicate), {obj}};
        bool has_p = problem.init.contains(personal);
        bool has_np = problem.init.contains(non_personal);
        KbAnswer answer = query_attribute(kb, obj);
        const GroundAtom& fact = answer.attribute == Attribute::Personal ? personal : non_personal;
        if (has_p || has_np) {
            if (!problem.init.contains(fact) && answer.provenance != Provenance::Default &&
                conflicts != nullptr)
                conflicts->push_back("'" + obj + "': knowledge base says " +
                                     std::string(to_string(answer.attribute)) +
                                     " but the problem states " +
                                     (has_p ? "personal" : "non_personal") + "; keeping the problem fact");
            continue;
        }
        out.init.insert(fact);
    }
    return out;
}

// ---------------------------------------------------------------------------

KbOracle::KbOracle(ConstraintPolicy policy, const GroundedTask& task, std::shared_ptr<AttributeKb> kb)
    : inner_(std::move(policy), task), kb_(std::move(kb)) {
    if (!kb_)
        throw Error("kb oracle needs a knowledge base");
    all_attributable_ = attributable_objects(task.domain, task.problem);
    attributable_.insert(all_attributable_.begin(), all_attributable_.end());
}

State KbOracle::with_attributes(const State& state, const std::vector<std::string>& objects) const {
    State out = state;
    for (const auto& obj : objects) {
        if (!attributable_.contains(obj))
            continue;
        GroundAtom personal{std::string(kPersonalPredicate), {obj}};
        GroundAtom non_personal{std::string(kNonPersonalPredicate), {obj}};
        if (state.contains(personal) || state.contains(non_personal))
            continue;
        KbAnswer a = kb_->query(KbQuery{obj, {}});
        out.insert(a.attribute == Attribute::Personal ? personal : non_personal);
    }
    return out;
}

AccessDecision KbOracle::decide(const State& state, const GroundAction& action,
                                std::uint64_t query_id) const {
    auto d = inner_.decide(with_attributes(state, action.args), action, query_id);
    d.oracle_id = id();
    return d;
}

AccessDecision KbOracle::check_state(const State& state) const {
    auto d = inner_.check_state(with_attributes(state, all_attributable_));
    d.oracle_id = id();
    return d;
}

}  // namespace acplan
