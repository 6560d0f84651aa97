#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resumeft/embedding.hpp"
#include "resumeft/gateway.hpp"
#include "resumeft/metrics.hpp"
#include "resumeft/normalize.hpp"

namespace resumeft {

struct TestSample {
    std::string source_id;
    std::string raw_text;
    ResumeRecord reference;
};

struct ModelSpec {
    std::string label;            // model family, e.g. "Phi-4"
    std::string parameter_label;  // e.g. "14"
    std::string tag = "base";     // "fine-tuned" or "base"
};

struct SampleResult {
    std::string model_label;
    std::string tag;
    std::string source_id;
    SampleScore score;
    bool failed = false;
    bool endpoint_error = false;  // the endpoint itself failed, not the extraction
    std::string error;
    std::vector<std::string> repairs;

    bool operator==(const SampleResult&) const = default;
};

/// Rounds to two decimals, halves away from zero.
double round_percent(double value);

/// One model's aggregate. Means are over every test sample, failures
/// included as zeros; the *_pct accessors give rounded percentages.
struct ReportRow {
    std::string model_label;
    std::string parameter_label;
    std::string tag;
    double em = 0.0;
    double f1 = 0.0;
    double bleu = 0.0;
    double rouge = 0.0;
    double overall = 0.0;
    bool overall_reported = true;
    std::size_t samples = 0;
    std::size_t failures = 0;

    double em_pct() const { return round_percent(em * 100.0); }
    double f1_pct() const { return round_percent(f1 * 100.0); }
    double bleu_pct() const { return round_percent(bleu * 100.0); }
    double rouge_pct() const { return round_percent(rouge * 100.0); }
    double overall_pct() const { return round_percent(overall * 100.0); }

    bool operator==(const ReportRow&) const = default;
};

/// Builds a row directly from percentages (e.g. numbers reported elsewhere).
ReportRow row_from_percentages(std::string label, std::string params, std::string tag, double em,
                               double f1, double bleu, double rouge,
                               std::optional<double> overall = std::nullopt);

struct ModelEvaluation {
    ReportRow row;
    std::vector<SampleResult> samples;  // source_id order
};

struct EvalOptions {
    int parallelism = 4;
    SkillAliasMap aliases = SkillAliasMap::defaults();
};

/// Parses every sample with `client`, scores it against its reference and
/// averages. Per-sample parse failures are recorded and scored zero.
ModelEvaluation evaluate_model(std::span<const TestSample> test_split, const ModelSpec& model,
                               CompletionClient& client, EmbeddingProvider& embedder,
                               const EvalOptions& options = {});

/// Arithmetic mean of per-sample scores into a row.
ReportRow aggregate(const ModelSpec& model, std::span<const SampleResult> samples);

struct AggregateReport {
    std::vector<ReportRow> rows;
    std::vector<SampleResult> samples;

    std::vector<const SampleResult*> failures() const;

    nlohmann::ordered_json to_json() const;
    static AggregateReport from_json(const nlohmann::json& j);

    bool operator==(const AggregateReport&) const = default;
};

enum class Column { em, f1, bleu, rouge, overall };
inline constexpr Column kColumns[] = {Column::em, Column::f1, Column::bleu, Column::rouge,
                                      Column::overall};
std::string_view column_name(Column c);
double column_value(const ReportRow& row, Column c);  // rounded percentage

/// Rows grouped fine-tuned first, then base, then any other tag (stable
/// within a group); best[i][c] is true when row i holds the column maximum.
struct ComparisonTable {
    std::vector<ReportRow> rows;
    std::vector<std::array<bool, 5>> best;

    std::string render_text() const;
    std::string render_csv() const;
    nlohmann::ordered_json render_json() const;
};

ComparisonTable compare(std::vector<ReportRow> rows);

/// 100 * (fine - base) / base per column on the rounded percentages, rounded
/// to two decimals; nullopt where base is zero. Labels must match.
struct Improvement {
    std::array<std::optional<double>, 5> by_column;

    std::optional<double> operator[](Column c) const {
        return by_column[static_cast<std::size_t>(c)];
    }
};
Improvement improvement(const ReportRow& fine_tuned, const ReportRow& base);

}  // namespace resumeft
