#include "resumeft/normalize.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

namespace resumeft {

namespace {

struct MonthName {
    std::string_view full;
    std::string_view abbrev;
};

constexpr std::array<MonthName, 12> kMonths = {{{"january", "jan"},
                                                {"february", "feb"},
                                                {"march", "mar"},
                                                {"april", "apr"},
                                                {"may", "may"},
                                                {"june", "jun"},
                                                {"july", "jul"},
                                                {"august", "aug"},
                                                {"september", "sep"},
                                                {"october", "oct"},
                                                {"november", "nov"},
                                                {"december", "dec"}}};

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string two_digit(int month) {
    std::string out = std::to_string(month);
    return month < 10 ? "0" + out : out;
}

std::optional<int> month_from_name(std::string_view word) {
    if (!word.empty() && word.back() == '.') word.remove_suffix(1);
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
        if (word == kMonths[i].full || word == kMonths[i].abbrev) return static_cast<int>(i) + 1;
    }
    if (word == "sept") return 9;
    return std::nullopt;
}

std::optional<int> month_from_digits(std::string_view s) {
    if (s.size() > 2 || !all_digits(s)) return std::nullopt;
    int m = std::stoi(std::string(s));
    if (m < 1 || m > 12) return std::nullopt;
    return m;
}

constexpr std::string_view kDefaultAliases[][2] = {
    {"js", "JavaScript"},
    {"javascript", "JavaScript"},
    {"ts", "TypeScript"},
    {"typescript", "TypeScript"},
    {"py", "Python"},
    {"python", "Python"},
    {"python3", "Python"},
    {"c++", "C++"},
    {"cpp", "C++"},
    {"c#", "C#"},
    {"csharp", "C#"},
    {"golang", "Go"},
    {"node", "Node.js"},
    {"nodejs", "Node.js"},
    {"node.js", "Node.js"},
    {"reactjs", "React"},
    {"react.js", "React"},
    {"react", "React"},
    {"ms excel", "Microsoft Excel"},
    {"excel", "Microsoft Excel"},
    {"microsoft excel", "Microsoft Excel"},
    {"ms word", "Microsoft Word"},
    {"microsoft word", "Microsoft Word"},
    {"ms office", "Microsoft Office"},
    {"microsoft office", "Microsoft Office"},
    {"postgres", "PostgreSQL"},
    {"postgresql", "PostgreSQL"},
    {"k8s", "Kubernetes"},
    {"kubernetes", "Kubernetes"},
    {"ml", "Machine Learning"},
    {"machine learning", "Machine Learning"},
    {"aws", "Amazon Web Services"},
    {"amazon web services", "Amazon Web Services"},
    {"hr", "Human Resources"},
    {"human resources", "Human Resources"},
    {"pr", "Public Relations"},
    {"public relations", "Public Relations"},
    {"emr", "Electronic Medical Records"},
    {"electronic medical records", "Electronic Medical Records"},
    {"cpr", "CPR Certification"},
    {"cpr certification", "CPR Certification"},
};

}  // namespace

std::string casefold(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

bool is_concrete_date(std::string_view s) {
    if (s.size() == 4) return all_digits(s);
    return s.size() == 7 && all_digits(s.substr(0, 4)) && s[4] == '-' &&
           all_digits(s.substr(5, 2));
}

bool is_canonical_date(std::string_view s) {
    return s.empty() || s == kPresent || is_concrete_date(s);
}

std::optional<std::string> normalize_date(std::string_view raw) {
    const std::string s = casefold(trim(raw));
    if (s.empty()) return std::string{};
    if (s == "present" || s == "current" || s == "now") return std::string(kPresent);

    if (s.size() == 4 && all_digits(s)) return s;

    // YYYY-MM
    if (s.size() == 7 && s[4] == '-' && all_digits(s.substr(0, 4))) {
        if (auto m = month_from_digits(s.substr(5)); m && s.substr(5).size() == 2)
            return s.substr(0, 4) + "-" + two_digit(*m);
        return std::nullopt;
    }

    // MM/YYYY or M/YYYY
    if (auto slash = s.find('/'); slash != std::string::npos) {
        auto month = std::string_view(s).substr(0, slash);
        auto year = std::string_view(s).substr(slash + 1);
        if (year.size() != 4 || !all_digits(year)) return std::nullopt;
        if (auto m = month_from_digits(month)) return std::string(year) + "-" + two_digit(*m);
        return std::nullopt;
    }

    // Month YYYY, Mon YYYY, Mon. YYYY, Month, YYYY
    auto space = s.find_last_of(' ');
    if (space == std::string::npos) return std::nullopt;
    std::string_view year = std::string_view(s).substr(space + 1);
    std::string_view word = std::string_view(s).substr(0, space);
    while (!word.empty() && word.back() == ' ') word.remove_suffix(1);
    if (!word.empty() && word.back() == ',') word.remove_suffix(1);
    if (year.size() != 4 || !all_digits(year)) return std::nullopt;
    if (auto m = month_from_name(word)) return std::string(year) + "-" + two_digit(*m);
    return std::nullopt;
}

SkillAliasMap::SkillAliasMap(const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [alias, canonical] : entries) {
        auto key = casefold(trim(alias));
        auto value = trim(canonical);
        if (key.empty() || value.empty())
            throw std::invalid_argument("skill alias map: empty alias or canonical value");
        auto [it, inserted] = entries_.emplace(key, value);
        if (!inserted && it->second != value)
            throw std::invalid_argument("skill alias map: alias '" + key +
                                        "' maps to both '" + it->second + "' and '" + value + "'");
    }
    for (const auto& [alias, canonical] : entries_) {
        auto it = entries_.find(casefold(canonical));
        if (it != entries_.end() && it->second != canonical)
            throw std::invalid_argument("skill alias map: chain '" + alias + "' -> '" + canonical +
                                        "' -> '" + it->second + "'");
    }
}

SkillAliasMap SkillAliasMap::from_json(const nlohmann::json& object) {
    if (!object.is_object())
        throw std::invalid_argument("skill alias map: expected a JSON object of alias -> canonical");
    std::vector<std::pair<std::string, std::string>> entries;
    for (auto it = object.begin(); it != object.end(); ++it) {
        if (!it->is_string())
            throw std::invalid_argument("skill alias map: value for '" + it.key() +
                                        "' is not a string");
        entries.emplace_back(it.key(), it->get<std::string>());
    }
    return SkillAliasMap(entries);
}

SkillAliasMap SkillAliasMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open skill alias map: " + path);
    return from_json(nlohmann::json::parse(in));
}

nlohmann::json default_skill_aliases_json() {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [alias, canonical] : kDefaultAliases) j[std::string(alias)] = canonical;
    return j;
}

SkillAliasMap SkillAliasMap::defaults() { return from_json(default_skill_aliases_json()); }

const std::string* SkillAliasMap::lookup(std::string_view skill) const {
    auto it = entries_.find(casefold(trim(skill)));
    return it == entries_.end() ? nullptr : &it->second;
}

NormalizationReport& NormalizationReport::operator+=(const NormalizationReport& other) {
    dates_rewritten += other.dates_rewritten;
    skills_unified += other.skills_unified;
    placeholders_inserted += other.placeholders_inserted;
    unparseable_dates.insert(unparseable_dates.end(), other.unparseable_dates.begin(),
                             other.unparseable_dates.end());
    return *this;
}

std::vector<std::string> unify_skills(const std::vector<std::string>& skills,
                                      const SkillAliasMap& aliases, std::size_t* rewrites) {
    std::vector<std::string> out;
    out.reserve(skills.size());
    std::unordered_set<std::string> seen;
    std::size_t changed = 0;
    for (const auto& raw : skills) {
        std::string value = trim(raw);
        if (const auto* canonical = aliases.lookup(value)) value = *canonical;
        if (value.empty() || !seen.insert(value).second) {
            ++changed;
            continue;
        }
        if (value != raw) ++changed;
        out.push_back(std::move(value));
    }
    if (rewrites) *rewrites += changed;
    return out;
}

std::pair<ResumeRecord, NormalizationReport> fill_missing(ResumeRecord record) {
    NormalizationReport report;
    if (trim(record.name).empty()) {
        record.name = kNamePlaceholder;
        ++report.placeholders_inserted;
    }
    if (trim(record.department).empty()) {
        record.department = kDepartmentPlaceholder;
        ++report.placeholders_inserted;
    }
    return {std::move(record), std::move(report)};
}

std::pair<ResumeRecord, NormalizationReport> normalize_record(ResumeRecord record,
                                                              const SkillAliasMap& aliases) {
    NormalizationReport report;
    auto fix_date = [&](std::string& value, std::string path) {
        auto canonical = normalize_date(value);
        if (!canonical) {
            report.unparseable_dates.emplace_back(std::move(path), value);
            return;
        }
        if (*canonical != value) {
            value = std::move(*canonical);
            ++report.dates_rewritten;
        }
    };
    for (std::size_t i = 0; i < record.experience.size(); ++i) {
        auto base = "experience[" + std::to_string(i) + "]";
        fix_date(record.experience[i].start_date, base + ".start_date");
        fix_date(record.experience[i].end_date, base + ".end_date");
    }
    for (std::size_t i = 0; i < record.education.size(); ++i)
        fix_date(record.education[i].end_date, "education[" + std::to_string(i) + "].end_date");

    record.skills = unify_skills(record.skills, aliases, &report.skills_unified);

    auto [filled, fill_report] = fill_missing(std::move(record));
    report += fill_report;
    return {std::move(filled), std::move(report)};
}

}  // namespace resumeft
