#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "resumeft/normalize.hpp"
#include "resumeft/schema.hpp"

namespace resumeft {

enum class Provenance { real, synthetic };
enum class Split { train, val, test };

std::string_view to_string(Provenance p);
std::string_view to_string(Split s);
Provenance provenance_from_string(std::string_view s);
Split split_from_string(std::string_view s);

struct BundleEntry {
    ResumeRecord record;
    Provenance provenance = Provenance::real;
    std::string source_id;
    std::string raw_text;

    bool operator==(const BundleEntry&) const = default;
};

struct SplitRatios {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;

    void validate() const;
};

struct SplitSizes {
    std::size_t train = 0;
    std::size_t val = 0;
    std::size_t test = 0;

    bool operator==(const SplitSizes&) const = default;
};

/// |val| = floor(val * N), |test| = floor(test * N), the rest is train.
SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios);

struct DatasetBundle {
    std::vector<BundleEntry> entries;  // ordered by source_id
    std::map<std::string, Split> split_assignment;
    std::size_t duplicates_removed = 0;
    std::optional<std::uint64_t> seed;
    SplitRatios ratios;
    bool stratified = false;

    bool is_split() const noexcept { return !split_assignment.empty(); }
    std::vector<const BundleEntry*> entries_in(Split s) const;
    SplitSizes sizes() const;

    nlohmann::ordered_json to_json() const;
    static DatasetBundle from_json(const nlohmann::json& j);
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Union of both lists with provenance set per list. Records with identical
/// canonical bytes collapse to the one with the smallest source_id. Throws
/// DataError on invalid records, empty raw_text, or a source_id reused with
/// different content.
DatasetBundle merge(std::vector<BundleEntry> real, std::vector<BundleEntry> synthetic);

/// Normalizes every record in place and returns the combined report.
NormalizationReport normalize_bundle(DatasetBundle& bundle, const SkillAliasMap& aliases);

/// Deterministic partition: entries sorted by source_id, Fisher-Yates with
/// SplitMix64(seed), then val, test, train in that order. With `stratify`
/// the same procedure runs independently per department.
DatasetBundle split(DatasetBundle bundle, std::uint64_t seed, const SplitRatios& ratios = {},
                    bool stratify = false);

/// One {"instruction", "input", "output"} object per line, LF endings,
/// entries ordered by source_id. Returns the number of lines written.
std::size_t export_instruction_jsonl(const DatasetBundle& bundle, Split split, std::ostream& out);
std::size_t export_instruction_jsonl(const DatasetBundle& bundle, Split split,
                                     const std::string& path);

struct LoraTrainingConfig {
    int rank = 16;
    int alpha = 16;
    std::vector<std::string> target_modules{"q_proj", "k_proj", "v_proj", "o_proj"};
    int batch_size = 8;
    double learning_rate = 5e-5;
    int max_steps = 200;
    int warmup_steps = 5;
    std::string base_model_id;

    void validate() const;
    nlohmann::ordered_json to_json() const;
    static LoraTrainingConfig from_json(const nlohmann::json& j);

    bool operator==(const LoraTrainingConfig&) const = default;
};

LoraTrainingConfig emit_lora_config(std::string base_model_id);

/// Writes the config as pretty JSON and returns the written text.
std::string write_lora_config(const LoraTrainingConfig& config, const std::string& path);

}  // namespace resumeft
