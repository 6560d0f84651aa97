#include "resumeft/porter.hpp"

#include <array>

namespace resumeft {

namespace {

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

class Stemmer {
public:
    explicit Stemmer(std::string_view word) : b_(word) {}

    std::string run() {
        if (b_.size() <= 2) return b_;
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return b_;
    }

private:
    std::string b_;

    // Consonant test at position i of the current word (prefix up to `len`).
    bool cons(std::size_t i) const {
        switch (b_[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // m(): number of VC sequences in b_[0, len).
    int measure(std::size_t len) const {
        int n = 0;
        std::size_t i = 0;
        while (i < len && cons(i)) ++i;
        while (i < len) {
            while (i < len && !cons(i)) ++i;
            if (i >= len) break;
            while (i < len && cons(i)) ++i;
            ++n;
        }
        return n;
    }

    bool vowel_in(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool double_cons(std::size_t len) const {
        return len >= 2 && b_[len - 1] == b_[len - 2] && cons(len - 1);
    }

    // *o: stem ends cvc and the final c is not w, x or y.
    bool cvc(std::size_t len) const {
        if (len < 3 || !cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
        char c = b_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view s) const {
        return b_.size() >= s.size() && std::string_view(b_).substr(b_.size() - s.size()) == s;
    }

    std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

    void replace(std::string_view suffix, std::string_view with) {
        b_.resize(stem_len(suffix));
        b_ += with;
    }

    // Applies the longest matching rule when its stem has m > min_measure.
    template <std::size_t N>
    void apply_rules(const std::array<Rule, N>& rules, int min_measure) {
        const Rule* best = nullptr;
        for (const auto& r : rules)
            if (ends(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
        if (best && measure(stem_len(best->suffix)) > min_measure)
            replace(best->suffix, best->replacement);
    }

    void step1a() {
        if (ends("sses"))
            replace("sses", "ss");
        else if (ends("ies"))
            replace("ies", "i");
        else if (ends("ss"))
            return;
        else if (ends("s"))
            replace("s", "");
    }

    void step1b() {
        if (ends("eed")) {
            if (measure(stem_len("eed")) > 0) replace("eed", "ee");
            return;
        }
        std::string_view suffix;
        if (ends("ed"))
            suffix = "ed";
        else if (ends("ing"))
            suffix = "ing";
        else
            return;
        if (!vowel_in(stem_len(suffix))) return;
        replace(suffix, "");
        if (ends("at") || ends("bl") || ends("iz")) {
            b_ += 'e';
        } else if (double_cons(b_.size())) {
            char c = b_.back();
            if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
        } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
            b_ += 'e';
        }
    }

    void step1c() {
        if (ends("y") && vowel_in(b_.size() - 1)) b_.back() = 'i';
    }

    void step2() {
        static constexpr std::array<Rule, 20> kRules = {{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
        }};
        apply_rules(kRules, 0);
    }

    void step3() {
        static constexpr std::array<Rule, 7> kRules = {{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_rules(kRules, 0);
    }

    void step4() {
        static constexpr std::array<std::string_view, 19> kSuffixes = {
            "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
            "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
        std::string_view best;
        for (auto s : kSuffixes)
            if (ends(s) && s.size() > best.size()) best = s;
        if (best.empty()) return;
        const std::size_t len = stem_len(best);
        if (measure(len) <= 1) return;
        if (best == "ion" && (len == 0 || (b_[len - 1] != 's' && b_[len - 1] != 't'))) return;
        b_.resize(len);
    }

    void step5a() {
        if (!ends("e")) return;
        const std::size_t len = b_.size() - 1;
        const int m = measure(len);
        if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
    }

    void step5b() {
        if (measure(b_.size()) > 1 && double_cons(b_.size()) && b_.back() == 'l') b_.pop_back();
    }
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace resumeft
