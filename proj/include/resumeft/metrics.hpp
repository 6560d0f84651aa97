#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "resumeft/embedding.hpp"
#include "resumeft/schema.hpp"

namespace resumeft {

/// Version tag recorded in run manifests; bump when any metric changes.
inline constexpr std::string_view kMetricSuiteVersion = "metrics-v1";

/// Lowercased (ASCII) tokens split on runs of non-alphanumeric bytes. Bytes
/// >= 0x80 count as alphanumeric so UTF-8 words stay whole.
using TokenSequence = std::vector<std::string>;
TokenSequence tokenize(std::string_view text);

/// Unit-cost edit distance over Unicode code points (invalid UTF-8 bytes
/// count as one unit each).
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - d(a, b) / max(|a|, |b|); 1.0 when both are empty.
double levenshtein_ratio(std::string_view a, std::string_view b);

/// Mean levenshtein_ratio over the union of leaf paths. A path present on
/// one side only is compared against "". Two empty views score 1.0.
double exact_match(const FlatView& reference, const FlatView& predicted);
double exact_match(const ResumeRecord& reference, const ResumeRecord& predicted);

struct SemanticScore {
    double clamped = 0.0;  // in [0, 1]
    double raw = 0.0;      // cosine as returned, in [-1, 1]
};

SemanticScore semantic_similarity(std::string_view reference, std::string_view predicted,
                                  EmbeddingProvider& provider);

/// Cosine of the embeddings of the two rendered FlatViews, clamped to [0, 1].
SemanticScore semantic_f1(const ResumeRecord& reference, const ResumeRecord& predicted,
                          EmbeddingProvider& provider);

/// Sentence BLEU, orders 1-4, uniform weights, single reference.
///
/// p_n = clipped n-gram matches / max(1, h - n + 1). Every order whose match
/// count is zero is smoothed (Chen & Cherry method 4, K = 5): the k-th such
/// order, counting from 1, gets p_n = 1 / (2^k * K / ln h) / max(1, h - n + 1),
/// provided h > 1. BLEU = BP * exp(sum(ln p_n) / 4) with BP = exp(1 - r/h)
/// when h < r and 1 otherwise. An empty hypothesis or any precision still
/// zero after smoothing gives 0.
double bleu4_smoothed(const TokenSequence& reference, const TokenSequence& hypothesis);

struct RougeScores {
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;

    double combined() const noexcept { return (rouge1 + rouge2 + rougeL) / 3.0; }
};

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

/// Balanced F-measures of unigram, bigram and LCS overlap after Porter
/// stemming every token. Both sequences empty gives 1.0 everywhere, exactly
/// one empty gives 0.0. For a single order where neither side has any
/// n-gram, that component is 1.0.
RougeScores rouge_scores(const TokenSequence& reference, const TokenSequence& hypothesis);
double rouge_combined(const TokenSequence& reference, const TokenSequence& hypothesis);

struct SampleScore {
    double em = 0.0;
    double f1_sem = 0.0;
    double bleu = 0.0;
    double rouge = 0.0;
    double overall = 0.0;
    double raw_cosine = 0.0;

    bool operator==(const SampleScore&) const = default;
};

/// Unweighted mean of the four metric values.
double overall_similarity(double em, double f1_sem, double bleu, double rouge);

/// All metrics on the FlatView rendering of both records.
SampleScore score_sample(const ResumeRecord& reference, const ResumeRecord& predicted,
                         EmbeddingProvider& provider);

}  // namespace resumeft
