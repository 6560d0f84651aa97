#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resumeft/normalize.hpp"
#include "resumeft/schema.hpp"

namespace resumeft {

/// Versioned parsing instruction. Used as the system prompt when parsing and
/// as the "instruction" field of exported training lines.
inline constexpr std::string_view kParseInstructionVersion = "resume-parse-v1";
std::string_view parse_instruction();

inline constexpr std::string_view kDefaultApiKeyEnv = "RESUMEFT_API_KEY";

struct EndpointConfig {
    std::string base_url;  // e.g. "http://127.0.0.1:8080/v1"
    std::string model_id;
    std::string api_key;
    std::chrono::milliseconds timeout{60'000};
    int max_retries = 2;
    int max_parallel_requests = 4;
    std::chrono::milliseconds backoff_initial{250};
    std::chrono::milliseconds backoff_max{4'000};
    double temperature = 0.0;
    std::string transcript_path;  // JSONL audit log, disabled when empty

    /// Throws std::invalid_argument on a bad configuration.
    void validate() const;

    /// Digest over everything except the API key.
    std::string digest() const;

    static std::string api_key_from_env(std::string_view variable = kDefaultApiKeyEnv);
};

class GatewayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Transport failure, timeout, or non-success HTTP status after retries.
class EndpointError : public GatewayError {
public:
    enum class Kind { transport, timeout, http_status, bad_response };

    EndpointError(Kind kind, std::string message, int attempts, int http_status = 0)
        : GatewayError(std::move(message)), kind_(kind), attempts_(attempts), status_(http_status) {}

    Kind kind() const noexcept { return kind_; }
    int attempts() const noexcept { return attempts_; }
    int http_status() const noexcept { return status_; }

private:
    Kind kind_;
    int attempts_;
    int status_;
};

/// The model answered but no schema-conformant record could be recovered.
class ExtractionError : public GatewayError {
public:
    ExtractionError(std::string message, std::string raw_response,
                    std::vector<Violation> violations = {})
        : GatewayError(std::move(message)),
          raw_response_(std::move(raw_response)),
          violations_(std::move(violations)) {}

    const std::string& raw_response() const noexcept { return raw_response_; }
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::string raw_response_;
    std::vector<Violation> violations_;
};

struct ChatMessage {
    std::string role;
    std::string content;
};

/// A chat-completions style text generator.
class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

/// Speaks the widely used `POST {base_url}/chat/completions` JSON shape.
/// Shareable across threads; at most max_parallel_requests are in flight.
class HttpCompletionClient final : public CompletionClient {
public:
    explicit HttpCompletionClient(EndpointConfig config);

    std::string complete(const std::vector<ChatMessage>& messages) override;

    const EndpointConfig& config() const noexcept { return config_; }

private:
    EndpointConfig config_;
    std::counting_semaphore<4096> slots_;
    std::mutex transcript_mutex_;
};

/// POSTs `body` to `base_url + path` with retry and backoff; returns the
/// parsed response JSON. Shared by the completion and embedding clients.
nlohmann::json post_json_with_retry(const EndpointConfig& config, std::string_view path,
                                    const nlohmann::json& body, std::mutex* transcript_mutex);

struct RepairResult {
    std::string json_text;
    std::vector<std::string> repairs;  // "code_fence", "trim_prose"
};

/// Keeps exactly the span from the first '{' to the last '}'. Markdown code
/// fences and other text outside that span are dropped and reported.
std::optional<RepairResult> repair_json_response(std::string_view raw);

struct ParseResult {
    ResumeRecord record;
    std::vector<std::string> repairs_applied;
    std::string raw_response;
    NormalizationReport normalization;
};

/// repair -> decode -> normalize -> validate. Throws ExtractionError.
ParseResult extract_record(std::string raw_response, const SkillAliasMap& aliases);

std::vector<ChatMessage> parse_messages(std::string_view raw_text);

/// Prompts the model with the parsing instruction and `raw_text`.
ParseResult parse_resume(std::string_view raw_text, CompletionClient& client,
                         const SkillAliasMap& aliases = SkillAliasMap::defaults());

ParseResult parse_resume(std::string_view raw_text, const EndpointConfig& config,
                         const SkillAliasMap& aliases = SkillAliasMap::defaults());

}  // namespace resumeft
