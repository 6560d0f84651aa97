#include "resumeft/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <map>
#include <stdexcept>

#include "resumeft/porter.hpp"

namespace resumeft {

namespace {

bool word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

// Lenient UTF-8 decode; malformed bytes become single units.
std::u32string code_points(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
        bool ok = len != 0 && i + len <= s.size();
        for (std::size_t k = 1; ok && k < len; ++k)
            ok = (static_cast<unsigned char>(s[i + k]) & 0xc0) == 0x80;
        if (!ok) {
            out.push_back(0xdc00 + c);  // lone surrogate range, never a valid scalar
            ++i;
            continue;
        }
        char32_t cp = len == 1 ? c : c & (0xff >> (len + 1));
        for (std::size_t k = 1; k < len; ++k)
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3f);
        out.push_back(cp);
        i += len;
    }
    return out;
}

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const TokenSequence& tokens, std::size_t n) {
    NgramCounts counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

std::size_t clipped_overlap(const NgramCounts& hyp, const NgramCounts& ref) {
    std::size_t total = 0;
    for (const auto& [gram, count] : hyp) {
        auto it = ref.find(gram);
        if (it != ref.end()) total += std::min(count, it->second);
    }
    return total;
}

std::size_t total_count(const NgramCounts& c) {
    std::size_t n = 0;
    for (const auto& [_, v] : c) n += v;
    return n;
}

double f_measure(std::size_t overlap, std::size_t hyp_total, std::size_t ref_total) {
    if (hyp_total == 0 && ref_total == 0) return 1.0;
    if (hyp_total == 0 || ref_total == 0 || overlap == 0) return 0.0;
    const double p = static_cast<double>(overlap) / static_cast<double>(hyp_total);
    const double r = static_cast<double>(overlap) / static_cast<double>(ref_total);
    return 2.0 * p * r / (p + r);
}

TokenSequence stemmed(const TokenSequence& tokens) {
    TokenSequence out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(porter_stem(t));
    return out;
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
    TokenSequence tokens;
    std::string current;
    for (unsigned char c : text) {
        if (word_byte(c)) {
            current += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

namespace {

bool is_ascii(std::string_view s) {
    for (unsigned char c : s)
        if (c >= 0x80) return false;
    return true;
}

template <typename Char>
std::size_t edit_distance(const Char* a, std::size_t n, const Char* b, std::size_t m) {
    while (n > 0 && m > 0 && *a == *b) ++a, ++b, --n, --m;
    while (n > 0 && m > 0 && a[n - 1] == b[m - 1]) --n, --m;
    if (n == 0) return m;
    if (m == 0) return n;
    std::size_t small[65];
    std::vector<std::size_t> large;
    std::size_t* row = small;
    if (m + 1 > std::size(small)) {
        large.resize(m + 1);
        row = large.data();
    }
    for (std::size_t j = 0; j <= m; ++j) row[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[m];
}

// {distance, longer length} in code points
std::pair<std::size_t, std::size_t> distance_and_length(std::string_view a, std::string_view b) {
    if (is_ascii(a) && is_ascii(b))
        return {edit_distance(a.data(), a.size(), b.data(), b.size()), std::max(a.size(), b.size())};
    const auto ca = code_points(a);
    const auto cb = code_points(b);
    return {edit_distance(ca.data(), ca.size(), cb.data(), cb.size()), std::max(ca.size(), cb.size())};
}

}  // namespace

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    return distance_and_length(a, b).first;
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
    const auto [distance, longest] = distance_and_length(a, b);
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(distance) / static_cast<double>(longest);
}

double exact_match(const FlatView& reference, const FlatView& predicted) {
    std::map<std::string_view, std::pair<std::string_view, std::string_view>> fields;
    for (const auto& [path, value] : reference.pairs) fields[path].first = value;
    for (const auto& [path, value] : predicted.pairs) fields[path].second = value;
    if (fields.empty()) return 1.0;
    double sum = 0.0;
    for (const auto& [_, values] : fields) sum += levenshtein_ratio(values.first, values.second);
    return sum / static_cast<double>(fields.size());
}

double exact_match(const ResumeRecord& reference, const ResumeRecord& predicted) {
    return exact_match(flatten(reference), flatten(predicted));
}

SemanticScore semantic_similarity(std::string_view reference, std::string_view predicted,
                                  EmbeddingProvider& provider) {
    const auto a = provider.embed(reference);
    const auto b = provider.embed(predicted);
    SemanticScore s;
    s.raw = cosine(a, b);
    s.clamped = std::clamp(s.raw, 0.0, 1.0);
    return s;
}

SemanticScore semantic_f1(const ResumeRecord& reference, const ResumeRecord& predicted,
                          EmbeddingProvider& provider) {
    return semantic_similarity(flatten(reference).render(), flatten(predicted).render(), provider);
}

double bleu4_smoothed(const TokenSequence& reference, const TokenSequence& hypothesis) {
    constexpr int kMaxOrder = 4;
    constexpr double kK = 5.0;
    const std::size_t h = hypothesis.size();
    const std::size_t r = reference.size();
    if (h == 0) return 0.0;

    double log_sum = 0.0;
    int smoothed = 0;
    for (int n = 1; n <= kMaxOrder; ++n) {
        const auto hyp = ngrams(hypothesis, static_cast<std::size_t>(n));
        const auto ref = ngrams(reference, static_cast<std::size_t>(n));
        const std::size_t matches = clipped_overlap(hyp, ref);
        const double denom = static_cast<double>(std::max<std::size_t>(1, total_count(hyp)));
        double p;
        if (matches > 0) {
            p = static_cast<double>(matches) / denom;
        } else if (h > 1) {
            ++smoothed;
            p = 1.0 / (std::pow(2.0, smoothed) * kK / std::log(static_cast<double>(h))) / denom;
        } else {
            return 0.0;
        }
        log_sum += std::log(p) / kMaxOrder;
    }
    const double bp =
        h < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(h)) : 1.0;
    return std::clamp(bp * std::exp(log_sum), 0.0, 1.0);
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScores rouge_scores(const TokenSequence& reference_raw, const TokenSequence& hypothesis_raw) {
    if (reference_raw.empty() && hypothesis_raw.empty()) return {1.0, 1.0, 1.0};
    if (reference_raw.empty() || hypothesis_raw.empty()) return {0.0, 0.0, 0.0};
    const auto reference = stemmed(reference_raw);
    const auto hypothesis = stemmed(hypothesis_raw);

    RougeScores s;
    for (std::size_t n : {1u, 2u}) {
        const auto hyp = ngrams(hypothesis, n);
        const auto ref = ngrams(reference, n);
        const double f = f_measure(clipped_overlap(hyp, ref), total_count(hyp), total_count(ref));
        (n == 1 ? s.rouge1 : s.rouge2) = f;
    }
    s.rougeL = f_measure(lcs_length(reference, hypothesis), hypothesis.size(), reference.size());
    return s;
}

double rouge_combined(const TokenSequence& reference, const TokenSequence& hypothesis) {
    return rouge_scores(reference, hypothesis).combined();
}

double overall_similarity(double em, double f1_sem, double bleu, double rouge) {
    return (em + f1_sem + bleu + rouge) / 4.0;
}

SampleScore score_sample(const ResumeRecord& reference, const ResumeRecord& predicted,
                         EmbeddingProvider& provider) {
    const auto ref_view = flatten(reference);
    const auto pred_view = flatten(predicted);
    const auto ref_text = ref_view.render();
    const auto pred_text = pred_view.render();
    const auto ref_tokens = tokenize(ref_text);
    const auto pred_tokens = tokenize(pred_text);

    SampleScore s;
    s.em = exact_match(ref_view, pred_view);
    const auto sem = semantic_similarity(ref_text, pred_text, provider);
    s.f1_sem = sem.clamped;
    s.raw_cosine = sem.raw;
    s.bleu = bleu4_smoothed(ref_tokens, pred_tokens);
    s.rouge = rouge_combined(ref_tokens, pred_tokens);
    s.overall = overall_similarity(s.em, s.f1_sem, s.bleu, s.rouge);
    return s;
}

}  // namespace resumeft
