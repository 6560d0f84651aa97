#include "resumeft/gateway.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "resumeft/digest.hpp"

namespace resumeft {

using json = nlohmann::json;

namespace {

constexpr std::string_view kParseInstruction =
    R"(You are a resume parser. Extract the candidate's information from the resume text and answer with one JSON object and nothing else. The object must have exactly these keys:
"name" (string), "email" (string), "phone" (string), "skills" (array of strings),
"experience" (array of objects with "title", "company", "start_date", "end_date", "description"),
"education" (array of objects with "degree", "institution", "end_date"),
"department" (string, the candidate's profession category).
Use "" for unknown strings and [] for unknown lists. Write dates as YYYY-MM, or YYYY when only the year is known, and "present" for ongoing positions. Do not invent information that is not in the resume.)";

struct SplitUrl {
    std::string scheme_host_port;
    std::string path_prefix;
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw std::invalid_argument("endpoint base_url must start with http:// or https://: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    std::string prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {url.substr(0, path_start), prefix};
}

void append_transcript(const EndpointConfig& config, std::mutex* mutex, const json& entry) {
    if (config.transcript_path.empty()) return;
    std::unique_lock<std::mutex> lock;
    if (mutex) lock = std::unique_lock<std::mutex>(*mutex);
    std::ofstream out(config.transcript_path, std::ios::app);
    if (!out) {
        spdlog::warn("cannot append transcript to {}", config.transcript_path);
        return;
    }
    out << entry.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

}  // namespace

std::string_view parse_instruction() { return kParseInstruction; }

void EndpointConfig::validate() const {
    if (base_url.empty()) throw std::invalid_argument("endpoint base_url is empty");
    split_url(base_url);
    if (timeout.count() <= 0) throw std::invalid_argument("endpoint timeout must be positive");
    if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
    if (max_parallel_requests < 1 || max_parallel_requests > 4096)
        throw std::invalid_argument("max_parallel_requests must be in [1, 4096]");
    if (backoff_initial.count() < 0 || backoff_max < backoff_initial)
        throw std::invalid_argument("backoff bounds are inconsistent");
}

std::string EndpointConfig::digest() const {
    json j = {{"base_url", base_url},
              {"model_id", model_id},
              {"timeout_ms", timeout.count()},
              {"max_retries", max_retries},
              {"max_parallel_requests", max_parallel_requests},
              {"temperature", temperature}};
    return sha256_hex(j.dump());
}

std::string EndpointConfig::api_key_from_env(std::string_view variable) {
    const char* v = std::getenv(std::string(variable).c_str());
    return v ? std::string(v) : std::string{};
}

json post_json_with_retry(const EndpointConfig& config, std::string_view path, const json& body,
                          std::mutex* transcript_mutex) {
    const auto url = split_url(config.base_url);
    const std::string full_path = url.path_prefix + std::string(path);
    const std::string payload = body.dump(-1, ' ', false, json::error_handler_t::replace);

    std::optional<EndpointError> last;
    const int attempts = config.max_retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            auto delay = config.backoff_initial * (1LL << std::min(attempt - 1, 20));
            delay = std::min<std::chrono::milliseconds>(delay, config.backoff_max);
            spdlog::warn("{}{}: attempt {}/{} failed ({}); retrying in {} ms", config.base_url,
                         path, attempt, attempts, last->what(), delay.count());
            std::this_thread::sleep_for(delay);
        }

        httplib::Client client(url.scheme_host_port);
        client.set_connection_timeout(config.timeout);
        client.set_read_timeout(config.timeout);
        client.set_write_timeout(config.timeout);
        if (!config.api_key.empty()) client.set_bearer_token_auth(config.api_key);

        const auto started = std::chrono::steady_clock::now();
        auto res = client.Post(full_path, payload, "application/json");
        const auto elapsed = std::chrono::steady_clock::now() - started;

        json entry = {{"path", full_path}, {"attempt", attempt + 1}, {"request", body}};
        if (!res) {
            const bool timed_out = res.error() == httplib::Error::Read &&
                                   elapsed >= config.timeout * 9 / 10;
            auto kind = timed_out ? EndpointError::Kind::timeout : EndpointError::Kind::transport;
            last.emplace(kind,
                         (timed_out ? "timeout: " : "transport failure: ") +
                             httplib::to_string(res.error()),
                         attempt + 1);
            entry["error"] = last->what();
            append_transcript(config, transcript_mutex, entry);
            continue;
        }
        entry["status"] = res->status;
        entry["response"] = res->body;
        append_transcript(config, transcript_mutex, entry);

        if (res->status == 429 || res->status >= 500) {
            last.emplace(EndpointError::Kind::http_status,
                         "HTTP " + std::to_string(res->status), attempt + 1, res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw EndpointError(EndpointError::Kind::http_status,
                                "HTTP " + std::to_string(res->status) + ": " + res->body,
                                attempt + 1, res->status);
        }
        try {
            return json::parse(res->body);
        } catch (const json::parse_error&) {
            throw EndpointError(EndpointError::Kind::bad_response,
                                "endpoint returned non-JSON body", attempt + 1, res->status);
        }
    }
    throw EndpointError(last->kind(),
                        std::string(last->what()) + " (after " + std::to_string(attempts) +
                            " attempts)",
                        attempts, last->http_status());
}

HttpCompletionClient::HttpCompletionClient(EndpointConfig config)
    : config_(std::move(config)), slots_(std::max(1, config_.max_parallel_requests)) {
    config_.validate();
}

std::string HttpCompletionClient::complete(const std::vector<ChatMessage>& messages) {
    json body;
    body["model"] = config_.model_id;
    body["temperature"] = config_.temperature;
    auto& msgs = body["messages"] = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});

    slots_.acquire();
    json response;
    try {
        response = post_json_with_retry(config_, "/chat/completions", body, &transcript_mutex_);
    } catch (...) {
        slots_.release();
        throw;
    }
    slots_.release();

    try {
        const auto& content = response.at("choices").at(0).at("message").at("content");
        if (content.is_null()) return {};
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw EndpointError(EndpointError::Kind::bad_response,
                            std::string("unexpected chat-completions response shape: ") + e.what(),
                            1);
    }
}

std::optional<RepairResult> repair_json_response(std::string_view raw) {
    const auto open = raw.find('{');
    const auto close = raw.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        return std::nullopt;

    RepairResult result;
    result.json_text = std::string(raw.substr(open, close - open + 1));

    std::string outside = std::string(raw.substr(0, open)) + "\n" + std::string(raw.substr(close + 1));
    bool fence = false;
    for (auto pos = outside.find("```"); pos != std::string::npos; pos = outside.find("```")) {
        fence = true;
        auto end = pos + 3;
        // An opening fence may carry a language tag up to the end of its line.
        while (end < outside.size() && outside[end] != '\n' && outside[end] != '`' &&
               !std::isspace(static_cast<unsigned char>(outside[end])))
            ++end;
        outside.erase(pos, end - pos);
    }
    const bool prose = std::any_of(outside.begin(), outside.end(),
                                   [](unsigned char c) { return !std::isspace(c); });
    if (fence) result.repairs.emplace_back("code_fence");
    if (prose) result.repairs.emplace_back("trim_prose");
    return result;
}

ParseResult extract_record(std::string raw_response, const SkillAliasMap& aliases) {
    auto repaired = repair_json_response(raw_response);
    if (!repaired)
        throw ExtractionError("no JSON object found in model response", std::move(raw_response));

    json doc;
    try {
        doc = json::parse(repaired->json_text);
    } catch (const json::parse_error& e) {
        throw ExtractionError(std::string("model response is not valid JSON: ") + e.what(),
                              std::move(raw_response));
    }

    ParseResult result;
    result.repairs_applied = std::move(repaired->repairs);
    ResumeRecord decoded;
    try {
        std::vector<std::string> filled;
        decoded = record_from_json_lenient(doc, &filled);
        if (!filled.empty()) result.repairs_applied.emplace_back("missing_keys");
    } catch (const SchemaError& e) {
        throw ExtractionError(e.what(), std::move(raw_response), e.violations());
    }

    auto [record, report] = normalize_record(std::move(decoded), aliases);
    if (auto violations = validate(record); !violations.empty()) {
        throw ExtractionError(SchemaError(violations).what(), std::move(raw_response),
                              std::move(violations));
    }
    result.record = std::move(record);
    result.normalization = std::move(report);
    result.raw_response = std::move(raw_response);
    return result;
}

std::vector<ChatMessage> parse_messages(std::string_view raw_text) {
    return {{"system", std::string(parse_instruction())}, {"user", std::string(raw_text)}};
}

ParseResult parse_resume(std::string_view raw_text, CompletionClient& client,
                         const SkillAliasMap& aliases) {
    if (trim(raw_text).empty()) throw std::invalid_argument("parse_resume: empty resume text");
    return extract_record(client.complete(parse_messages(raw_text)), aliases);
}

ParseResult parse_resume(std::string_view raw_text, const EndpointConfig& config,
                         const SkillAliasMap& aliases) {
    HttpCompletionClient client(config);
    return parse_resume(raw_text, client, aliases);
}

}  // namespace resumeft
