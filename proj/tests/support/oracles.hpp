#pragma once

// Independent reference implementations and random inputs for tests. None
// of this calls into the library under test.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "resumeft/schema.hpp"

namespace testsupport {

/// Textbook exponential recursion; only usable for short strings.
inline std::size_t naive_edit_distance(const std::string& a, std::size_t i, const std::string& b,
                                       std::size_t j) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    if (a[i] == b[j]) return naive_edit_distance(a, i + 1, b, j + 1);
    return 1 + std::min({naive_edit_distance(a, i + 1, b, j),       // delete
                         naive_edit_distance(a, i, b, j + 1),       // insert
                         naive_edit_distance(a, i + 1, b, j + 1)}); // substitute
}

inline double naive_ratio(const std::string& a, const std::string& b) {
    const auto m = std::max(a.size(), b.size());
    if (m == 0) return 1.0;
    return 1.0 - static_cast<double>(naive_edit_distance(a, 0, b, 0)) / static_cast<double>(m);
}

/// All strings over `alphabet` with length in [0, max_len].
inline std::vector<std::string> all_strings(const std::string& alphabet, std::size_t max_len) {
    std::vector<std::string> out{""};
    std::vector<std::string> frontier{""};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& s : frontier)
            for (char c : alphabet) next.push_back(s + c);
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

/// Longest common subsequence by enumerating every subsequence of `a`.
inline std::size_t brute_force_lcs(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
    std::size_t best = 0;
    const std::uint32_t n = static_cast<std::uint32_t>(a.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const auto len = static_cast<std::size_t>(__builtin_popcount(mask));
        if (len <= best) continue;
        std::size_t j = 0;
        bool ok = true;
        for (std::uint32_t i = 0; i < n && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            while (j < b.size() && b[j] != a[i]) ++j;
            if (j == b.size()) ok = false;
            else ++j;
        }
        if (ok) best = len;
    }
    return best;
}

class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    bool coin() { return engine_() & 1u; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

    std::string word(std::size_t min_len = 1, std::size_t max_len = 9) {
        static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
        std::string s;
        const auto len = min_len + below(max_len - min_len + 1);
        for (std::size_t i = 0; i < len; ++i) s += letters[below(letters.size())];
        if (coin()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
        return s;
    }

    std::string phrase(std::size_t words) {
        std::string s;
        for (std::size_t i = 0; i < words; ++i) s += (i ? " " : "") + word();
        return s;
    }

private:
    std::mt19937_64 engine_;
};

inline std::string two_digits(int m) { return (m < 10 ? "0" : "") + std::to_string(m); }

/// A valid record already in canonical form.
inline resumeft::ResumeRecord random_canonical_record(Random& rng) {
    resumeft::ResumeRecord r;
    r.name = rng.word() + " " + rng.word();
    if (rng.below(4) == 0) r.name += " \xC3\x89lodie";  // some non-ASCII text
    r.email = rng.coin() ? rng.word(3, 8) + "@" + rng.word(3, 8) + ".com" : "";
    r.phone = rng.coin() ? "+1 555-" + std::to_string(100 + rng.below(900)) + "-" +
                               std::to_string(1000 + rng.below(9000))
                         : "";
    const auto skills = rng.below(6);
    for (std::size_t i = 0; i < skills; ++i) r.skills.push_back("Skill" + std::to_string(i) + rng.word());
    int year = 2000 + static_cast<int>(rng.below(15));
    const auto jobs = rng.below(4);
    for (std::size_t i = 0; i < jobs; ++i) {
        resumeft::ExperienceEntry e;
        e.title = rng.phrase(1 + rng.below(3));
        e.company = rng.phrase(1 + rng.below(2));
        e.start_date = std::to_string(year) + "-" + two_digits(1 + static_cast<int>(rng.below(12)));
        year += 1 + static_cast<int>(rng.below(3));
        e.end_date = (i + 1 == jobs && rng.coin()) ? "present" : std::to_string(year);
        e.description = rng.phrase(rng.below(12));
        r.experience.push_back(std::move(e));
    }
    if (rng.coin()) {
        r.education.push_back({rng.phrase(3), rng.phrase(2), rng.coin() ? std::to_string(1995 + rng.below(10)) : ""});
    }
    r.department = rng.phrase(1 + rng.below(2));
    return r;
}

/// A valid record in the messy shapes normalization has to deal with:
/// human-written dates, aliased and padded skills, missing name/department.
inline resumeft::ResumeRecord random_messy_record(Random& rng) {
    static const std::vector<std::string> months = {"Jan", "February", "Mar.", "april", "Sept",
                                                    "OCT", "Nov", "December"};
    static const std::vector<int> month_numbers = {1, 2, 3, 4, 9, 10, 11, 12};
    static const std::vector<std::string> junk = {"sometime ago", "Q3 2019", "summer", "20/20/2020"};
    static const std::vector<std::string> skill_pool = {
        "js", " JavaScript ", "PY", "python3", "ML", "Machine Learning", "k8s", "Excel",
        "ms excel", "Rust", "Go", "golang", "SQL", "postgres", "React.js", "Public Speaking"};

    auto date = [&](int year, int month_index) -> std::string {
        switch (rng.below(7)) {
            case 0: return months[month_index] + " " + std::to_string(year);
            case 1: return two_digits(month_numbers[month_index]) + "/" + std::to_string(year);
            case 2: return std::to_string(month_numbers[month_index]) + "/" + std::to_string(year);
            case 3: return std::to_string(year) + "-" + two_digits(month_numbers[month_index]);
            case 4: return std::to_string(year);
            case 5: return rng.pick(junk);
            default: return "  " + months[month_index] + ", " + std::to_string(year) + " ";
        }
    };

    auto r = random_canonical_record(rng);
    if (rng.below(3) == 0) r.name.clear();
    if (rng.below(3) == 0) r.department.clear();
    r.skills.clear();
    const auto n = rng.below(7);
    for (std::size_t i = 0; i < n; ++i) {
        auto s = rng.pick(skill_pool);
        if (std::find(r.skills.begin(), r.skills.end(), s) == r.skills.end()) r.skills.push_back(s);
    }
    int year = 1998 + static_cast<int>(rng.below(10));
    for (auto& e : r.experience) {
        e.start_date = date(year, static_cast<int>(rng.below(months.size())));
        year += 1 + static_cast<int>(rng.below(3));
        e.end_date = rng.below(5) == 0 ? (rng.coin() ? "Present" : "current")
                                       : date(year, static_cast<int>(rng.below(months.size())));
        year += 1;
    }
    for (auto& ed : r.education) ed.end_date = rng.coin() ? date(1995, 3) : "";
    return r;
}

}  // namespace testsupport
