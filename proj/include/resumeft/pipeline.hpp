#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resumeft/dataset.hpp"
#include "resumeft/evaluator.hpp"
#include "resumeft/gateway.hpp"
#include "resumeft/synth.hpp"

namespace resumeft {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ExitCode : int {
    ok = 0,
    usage = 1,
    config_error = 2,
    data_error = 3,
    endpoint_error = 4,
    threshold_unmet = 5,
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exclusive `.resumeft.lock` in a working directory, released on
/// destruction. Throws ConfigError when another command holds it.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::filesystem::path& dir);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::filesystem::path path_;
};

using ClientFactory = std::function<std::unique_ptr<CompletionClient>(const EndpointConfig&)>;

/// Empty path gives the built-in alias map. Load problems are ConfigErrors.
SkillAliasMap load_alias_map(const std::string& path);

/// Writes `contents` to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// ---- ingest -------------------------------------------------------------

struct IngestOptions {
    std::string input_dir;
    std::string out_dir;
    EndpointConfig endpoint;
    std::string alias_map;
    ClientFactory client_factory;  // HttpCompletionClient when unset
};

struct IngestFailure {
    std::string source_id;
    std::string source_path;
    std::string error;
    std::string raw_response;
    bool endpoint_error = false;
};

struct IngestSummary {
    std::size_t parsed = 0;
    std::size_t skipped = 0;
    std::vector<IngestFailure> failures;
};

/// Parses every *.txt file of `input_dir` into out_dir/parsed/<stem>.json.
/// Files whose digest matches the previous ingest_manifest.json entry are
/// skipped. Per-file problems land in failures.json and never stop the run.
IngestSummary cmd_ingest(const IngestOptions& options);

// ---- synth --------------------------------------------------------------

struct SynthOptions {
    std::string out_dir;
    std::string profiles_dir;  // built-in profiles when empty
    std::size_t count = 100;
    std::uint64_t seed = 0;
};

struct SynthSummary {
    std::size_t generated = 0;
    std::string output_path;
};

/// Writes out_dir/synthetic.jsonl, one {"source_id", "record"} per line.
SynthSummary cmd_synth(const SynthOptions& options);

std::vector<SyntheticResume> read_synthetic_jsonl(const std::string& path);

// ---- build --------------------------------------------------------------

struct BuildOptions {
    std::string out_dir;
    std::string real_dir;        // an ingest output directory
    std::string synthetic_path;  // a synthetic.jsonl file
    std::uint64_t seed = 42;
    SplitRatios ratios;
    bool stratify = false;
    std::string alias_map;
    std::string base_model_id = "base-model";
};

struct BuildSummary {
    std::size_t real = 0;
    std::size_t synthetic = 0;
    std::size_t total = 0;
    std::size_t duplicates_removed = 0;
    SplitSizes sizes;
    NormalizationReport normalization;
};

/// merge -> normalize -> split -> export. Writes train/val/test.jsonl,
/// bundle.json, lora_config.json and manifest.json under out_dir.
BuildSummary cmd_build(const BuildOptions& options);

std::vector<BundleEntry> read_ingested(const std::string& ingest_dir);

// ---- evaluate -----------------------------------------------------------

struct ModelEndpoint {
    ModelSpec spec;
    EndpointConfig endpoint;
};

/// Parses `label=NAME,model_id=ID,url=URL,tag=TAG,params=P`. A bare value is
/// taken as the label. Missing fields come from `defaults`; model_id falls
/// back to the label.
ModelEndpoint parse_model_flag(std::string_view value, const EndpointConfig& defaults);

struct Thresholds {
    std::optional<double> em, f1, bleu, rouge, overall;  // percentages
};

struct EvaluateOptions {
    std::string dataset_dir;
    std::string out_dir;
    std::vector<ModelEndpoint> models;
    std::string embedder = "offline";  // or "http"
    std::size_t embedding_dimension = 384;
    EndpointConfig embedding_endpoint;
    int parallelism = 4;
    std::string alias_map;
    Thresholds thresholds;
    std::string timestamp;  // run manifest only; now (UTC) when empty
    ClientFactory client_factory;
};

struct EvaluateSummary {
    AggregateReport report;
    std::vector<std::string> unmet_thresholds;
    std::vector<std::string> unreachable_models;  // every sample hit an endpoint error
};

/// Evaluates every model on the test split of dataset_dir/bundle.json and
/// writes report.txt, report.json, report.csv and run_manifest.json.
EvaluateSummary cmd_evaluate(const EvaluateOptions& options);

/// Improvement lines for every model family with both a fine-tuned and a
/// base row.
std::string render_improvements(const std::vector<ReportRow>& rows);

/// Writes the three report files. Returns {file name, sha256} pairs.
std::vector<std::pair<std::string, std::string>> write_reports(const AggregateReport& report,
                                                              const std::filesystem::path& out_dir);

std::vector<std::string> check_thresholds(const std::vector<ReportRow>& rows,
                                          const Thresholds& thresholds);

// ---- report -------------------------------------------------------------

/// Merges the rows of several report.json files and re-renders them.
AggregateReport cmd_report(const std::vector<std::string>& inputs, const std::string& out_dir);

}  // namespace resumeft
