#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "oracles.hpp"
#include "resumeft/metrics.hpp"

using namespace resumeft;
using doctest::Approx;

namespace {

TokenSequence toks(const char* s) { return tokenize(s); }

class ConstantCosineProvider final : public EmbeddingProvider {
public:
    // embeds the reference to e1 and anything else to (-0.2, sqrt(0.96))
    explicit ConstantCosineProvider(std::string reference) : reference_(std::move(reference)) {}
    EmbeddingVector embed(std::string_view text) override {
        if (text == reference_) return {{1.0, 0.0}};
        return {{-0.2, std::sqrt(0.96)}};
    }
    std::size_t dimension() const noexcept override { return 2; }
    std::string describe() const override { return "constant"; }

private:
    std::string reference_;
};

}  // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("Hello, World!  foo_bar 42") == TokenSequence{"hello", "world", "foo", "bar", "42"});
    CHECK(tokenize("").empty());
    CHECK(tokenize(" -- ").empty());
    CHECK(tokenize("caf\xC3\xA9 ok") == TokenSequence{"caf\xC3\xA9", "ok"});
    CHECK(tokenize("name: Ann\nemail: ") == tokenize("name: Ann\nemail: "));
}

TEST_CASE("levenshtein examples") {
    CHECK(levenshtein_ratio("abc", "abc") == 1.0);
    CHECK(levenshtein_distance("kitten", "sitting") == 3);
    CHECK(levenshtein_ratio("kitten", "sitting") == Approx(4.0 / 7.0));
    CHECK(levenshtein_ratio("", "x") == 0.0);
    CHECK(levenshtein_ratio("", "") == 1.0);
    // code points, not bytes
    CHECK(levenshtein_distance("\xC3\xA9", "e") == 1);
    CHECK(levenshtein_ratio("\xC3\xA9t\xC3\xA9", "ete") == Approx(1.0 / 3.0));
}

TEST_CASE("levenshtein_ratio equals the recursive oracle on all short strings over {a,b}") {
    // The {a,b,c} up-to-8 sweep lives in the acceptance suite.
    const auto strings = testsupport::all_strings("ab", 5);
    std::size_t mismatches = 0;
    for (const auto& a : strings)
        for (const auto& b : strings)
            mismatches += levenshtein_ratio(a, b) != testsupport::naive_ratio(a, b);
    CHECK(mismatches == 0);
}

TEST_CASE("levenshtein on long and non-ASCII strings matches a full-matrix oracle") {
    // Each symbol is one code point; the oracle works on symbol indices.
    const std::vector<std::string> symbols = {"a", "b", "\xC3\xA9", "\xC3\x9F", "\xE2\x82\xAC"};
    auto full_matrix = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
        for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
        for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
        for (std::size_t i = 1; i <= a.size(); ++i)
            for (std::size_t j = 1; j <= b.size(); ++j)
                d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
        return d[a.size()][b.size()];
    };
    testsupport::Random rng(404);
    for (int t = 0; t < 300; ++t) {
        // half the cases stay ASCII, lengths reach past 64
        const std::size_t alphabet = t % 2 ? symbols.size() : 2;
        std::vector<int> ia, ib;
        std::string a, b;
        for (std::size_t i = 0, n = rng.below(130); i < n; ++i) ia.push_back(int(rng.below(alphabet)));
        for (std::size_t i = 0, n = rng.below(130); i < n; ++i) ib.push_back(int(rng.below(alphabet)));
        for (int s : ia) a += symbols[s];
        for (int s : ib) b += symbols[s];
        const auto expected = full_matrix(ia, ib);
        CHECK(levenshtein_distance(a, b) == expected);
        const auto m = std::max(ia.size(), ib.size());
        CHECK(levenshtein_ratio(a, b) == (m == 0 ? 1.0 : 1.0 - double(expected) / double(m)));
    }
}

TEST_CASE("exact_match over the union of leaf paths") {
    FlatView ref{{{"name", "Ann"}, {"department", "IT"}}};
    FlatView pred{{{"name", "Ann"}, {"department", ""}}};
    CHECK(exact_match(ref, pred) == Approx(0.5));

    FlatView missing{{{"name", "Ann"}}};
    CHECK(exact_match(ref, missing) == Approx(0.5));
    CHECK(exact_match(FlatView{}, FlatView{}) == 1.0);

    ResumeRecord empty;
    CHECK(exact_match(empty, empty) == 1.0);

    ResumeRecord a;
    a.skills = {"x", "y"};
    ResumeRecord b;
    b.skills = {"x"};
    // name, email, phone, department, skills[0] match; skills[1] vs ""
    CHECK(exact_match(a, b) == Approx(5.0 / 6.0));
}

TEST_CASE("BLEU") {
    SUBCASE("hand-derived fixture without smoothing") {
        // precisions 5/7, 4/6, 3/5, 2/4 -> (120/840)^(1/4)
        const double expected = std::pow(5.0 / 7 * 4.0 / 6 * 3.0 / 5 * 2.0 / 4, 0.25);
        CHECK(expected == Approx(0.614788).epsilon(1e-6));
        CHECK(bleu4_smoothed(toks("a b c d e"), toks("a b c d e f g")) == Approx(expected).epsilon(1e-12));
    }
    SUBCASE("identity with four or more tokens") {
        CHECK(bleu4_smoothed(toks("a b c d"), toks("a b c d")) == Approx(1.0));
        CHECK(bleu4_smoothed(toks("one two three four five six"), toks("one two three four five six")) ==
              Approx(1.0));
    }
    SUBCASE("no shared unigram is smoothed, not zero") {
        // h = r = 4 and every order is smoothed: p_n = ln(4) / (2^n * 5) / (h - n + 1)
        const double ln4 = std::log(4.0);
        double log_sum = 0.0;
        for (int n = 1; n <= 4; ++n) log_sum += std::log(ln4 / (std::pow(2.0, n) * 5.0) / (4 - n + 1)) / 4;
        const double v = bleu4_smoothed(toks("a b c d"), toks("w x y z"));
        CHECK(v > 0.0);
        CHECK(v < 0.05);
        CHECK(v == Approx(std::exp(log_sum)).epsilon(1e-12));
    }
    SUBCASE("smoothing counter only advances on zero orders") {
        // ref "a b c d", hyp "a b x y": p1 = 2/4, p2 = 1/3, p3 smoothed k=1, p4 smoothed k=2
        const double k = 5.0 / std::log(4.0);
        const double p3 = 1.0 / (2 * k) / 2;
        const double p4 = 1.0 / (4 * k) / 1;
        const double expected = std::exp((std::log(0.5) + std::log(1.0 / 3) + std::log(p3) + std::log(p4)) / 4);
        CHECK(bleu4_smoothed(toks("a b c d"), toks("a b x y")) == Approx(expected).epsilon(1e-12));
    }
    SUBCASE("brevity penalty") {
        const double bp = std::exp(1.0 - 6.0 / 4.0);
        CHECK(bleu4_smoothed(toks("a b c d e f"), toks("a b c d")) == Approx(bp).epsilon(1e-12));
    }
    SUBCASE("degenerate inputs") {
        CHECK(bleu4_smoothed(toks("a b"), {}) == 0.0);
        CHECK(bleu4_smoothed({}, {}) == 0.0);
        CHECK(bleu4_smoothed(toks("a"), toks("b")) == 0.0);
    }
}

TEST_CASE("ROUGE") {
    const auto s = rouge_scores(toks("the cat sat"), toks("the cat"));
    CHECK(s.rouge1 == Approx(0.8));
    CHECK(s.rouge2 == Approx(2.0 / 3.0));
    CHECK(s.rougeL == Approx(0.8));
    CHECK(rouge_combined(toks("the cat sat"), toks("the cat")) == Approx((0.8 + 2.0 / 3 + 0.8) / 3).epsilon(1e-12));

    CHECK(rouge_scores(toks("running"), toks("run")).rouge1 == 1.0);
    CHECK(rouge_combined(toks("a b c"), toks("a b c")) == 1.0);
    CHECK(rouge_combined({}, {}) == 1.0);
    CHECK(rouge_combined(toks("a"), {}) == 0.0);
    CHECK(rouge_combined({}, toks("a")) == 0.0);
    // single tokens: no bigrams on either side, so ROUGE-2 counts as a match
    CHECK(rouge_scores(toks("cats"), toks("cat")).rouge2 == 1.0);
}

TEST_CASE("LCS matches brute-force enumeration") {
    testsupport::Random rng(31);
    const std::vector<std::string> vocab = {"a", "b", "c", "d"};
    for (int t = 0; t < 400; ++t) {
        TokenSequence a, b;
        const auto la = rng.below(11), lb = rng.below(11);
        for (std::size_t i = 0; i < la; ++i) a.push_back(rng.pick(vocab));
        for (std::size_t i = 0; i < lb; ++i) b.push_back(rng.pick(vocab));
        CHECK(lcs_length(a, b) == testsupport::brute_force_lcs(a, b));
    }
}

TEST_CASE("appending a matching token never lowers ROUGE-1 recall") {
    // Counting oracle for unigram overlap; tokens a..e are their own stems.
    struct Counts {
        double overlap, hyp, ref;
    };
    auto counts = [](const TokenSequence& ref, const TokenSequence& hyp) {
        std::map<std::string, int> rc, hc;
        for (const auto& t : ref) ++rc[t];
        for (const auto& t : hyp) ++hc[t];
        int overlap = 0;
        for (const auto& [k, v] : hc) overlap += std::min(v, rc[k]);
        return Counts{double(overlap), double(hyp.size()), double(ref.size())};
    };
    testsupport::Random rng(5);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
    for (int t = 0; t < 300; ++t) {
        TokenSequence ref, hyp;
        for (std::size_t i = 0, n = 1 + rng.below(8); i < n; ++i) ref.push_back(rng.pick(vocab));
        for (std::size_t i = 0, n = 1 + rng.below(8); i < n; ++i) hyp.push_back(rng.pick(vocab));
        auto longer = hyp;
        longer.push_back(rng.pick(ref));
        const auto before = counts(ref, hyp), after = counts(ref, longer);
        CHECK(after.overlap / after.ref >= before.overlap / before.ref);

        // the library's ROUGE-1 F is the harmonic mean of these counts
        const double f = after.overlap == 0 ? 0.0 : 2 * after.overlap / (after.hyp + after.ref);
        CHECK(rouge_scores(ref, longer).rouge1 == Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("overall similarity") {
    CHECK(overall_similarity(1, 1, 1, 1) == 1.0);
    CHECK(overall_similarity(1, 0, 0, 0) == 0.25);
    CHECK(overall_similarity(0.8, 0.9, 0.4, 0.7) == Approx(0.7));
}

TEST_CASE("semantic similarity") {
    OfflineEmbedder offline;
    CHECK(semantic_similarity("name: Ann", "name: Ann", offline).clamped == Approx(1.0));
    // "aaaa" and "bbbb" have one trigram each and they differ
    CHECK(semantic_similarity("aaaa", "bbbb", offline).clamped == 0.0);

    ConstantCosineProvider negative("ref");
    const auto s = semantic_similarity("ref", "other", negative);
    CHECK(s.raw == Approx(-0.2));
    CHECK(s.clamped == 0.0);
}

TEST_CASE("property: bounds and identity on random records") {
    testsupport::Random rng(77);
    OfflineEmbedder offline;
    for (int i = 0; i < 200; ++i) {
        const auto a = testsupport::random_canonical_record(rng);
        const auto b = testsupport::random_canonical_record(rng);
        const auto s = score_sample(a, b, offline);
        for (double v : {s.em, s.f1_sem, s.bleu, s.rouge, s.overall}) CHECK((v >= 0.0 && v <= 1.0));
        const auto same = score_sample(a, a, offline);
        CHECK(same.em == Approx(1.0).epsilon(1e-9));
        CHECK(same.f1_sem == Approx(1.0).epsilon(1e-9));
        CHECK(same.bleu == Approx(1.0).epsilon(1e-9));
        CHECK(same.rouge == Approx(1.0).epsilon(1e-9));
        CHECK(same.overall == Approx(1.0).epsilon(1e-9));
    }
}
