#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resumeft/schema.hpp"

namespace resumeft {

inline constexpr std::string_view kNamePlaceholder = "John Doe";
inline constexpr std::string_view kDepartmentPlaceholder = "Unknown";
inline constexpr std::string_view kPresent = "present";

/// Canonicalizes a resume date.
///
/// Accepted inputs (case-insensitive, surrounding whitespace ignored):
///   "January 2020", "Jan 2020", "Jan. 2020", "January, 2020" -> "2020-01"
///   "03/2019", "3/2019"                                      -> "2019-03"
///   "2019-03"                                                -> "2019-03"
///   "2019"                                                   -> "2019"
///   "present", "current", "now"                              -> "present"
///   ""                                                       -> ""
/// Anything else yields std::nullopt; callers keep the original verbatim.
std::optional<std::string> normalize_date(std::string_view raw);

/// True for "YYYY" or "YYYY-MM".
bool is_concrete_date(std::string_view s);

/// True for any value normalize_date can emit (concrete, "present" or "").
bool is_canonical_date(std::string_view s);

std::string casefold(std::string_view s);
std::string trim(std::string_view s);

/// Alias (case-folded) -> canonical skill. Construction rejects chains,
/// i.e. a canonical value whose folded form is an alias for something else.
class SkillAliasMap {
public:
    SkillAliasMap() = default;
    explicit SkillAliasMap(const std::vector<std::pair<std::string, std::string>>& entries);

    static SkillAliasMap from_json(const nlohmann::json& object);
    static SkillAliasMap load(const std::string& path);
    static SkillAliasMap defaults();

    /// Canonical form for `skill`, or nullptr when it is not aliased.
    const std::string* lookup(std::string_view skill) const;

    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

private:
    std::map<std::string, std::string> entries_;
};

/// The default alias set shipped in data/skill_aliases.json.
nlohmann::json default_skill_aliases_json();

struct NormalizationReport {
    std::size_t dates_rewritten = 0;
    std::size_t skills_unified = 0;
    std::size_t placeholders_inserted = 0;
    std::vector<std::pair<std::string, std::string>> unparseable_dates;

    std::size_t total_rewrites() const noexcept {
        return dates_rewritten + skills_unified + placeholders_inserted;
    }
    NormalizationReport& operator+=(const NormalizationReport& other);
};

/// Trims, maps aliases, drops empties and exact duplicates (first occurrence
/// wins). `rewrites`, when given, is incremented once per changed or dropped
/// entry.
std::vector<std::string> unify_skills(const std::vector<std::string>& skills,
                                      const SkillAliasMap& aliases,
                                      std::size_t* rewrites = nullptr);

std::pair<ResumeRecord, NormalizationReport> fill_missing(ResumeRecord record);

/// Date standardization, skill unification and missing-value placeholders.
/// Idempotent.
std::pair<ResumeRecord, NormalizationReport> normalize_record(ResumeRecord record,
                                                              const SkillAliasMap& aliases);

}  // namespace resumeft
