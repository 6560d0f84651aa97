#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace resumeft {

struct ExperienceEntry {
    std::string title;
    std::string company;
    std::string start_date;
    std::string end_date;  // canonical date or "present"
    std::string description;

    bool operator==(const ExperienceEntry&) const = default;
};

struct EducationEntry {
    std::string degree;
    std::string institution;
    std::string end_date;

    bool operator==(const EducationEntry&) const = default;
};

/// The standardized resume document. Every serialized record carries all
/// seven top-level keys; unknown scalars are "" and unknown lists are [].
struct ResumeRecord {
    std::string name;
    std::string email;
    std::string phone;
    std::vector<std::string> skills;
    std::vector<ExperienceEntry> experience;
    std::vector<EducationEntry> education;
    std::string department;

    bool operator==(const ResumeRecord&) const = default;
};

/// Top-level keys in schema order.
inline constexpr std::string_view kRecordKeys[] = {
    "name", "email", "phone", "skills", "experience", "education", "department"};

struct Violation {
    std::string path;
    std::string rule;

    bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(std::vector<Violation> violations);
    SchemaError(std::string path, std::string rule)
        : SchemaError(std::vector<Violation>{{std::move(path), std::move(rule)}}) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Checks a JSON document against the record schema: key presence, value
/// types, and the record invariants. Violations are returned, never thrown.
std::vector<Violation> validate(const nlohmann::json& document);

/// Checks the value-level invariants of an already typed record.
std::vector<Violation> validate(const ResumeRecord& record);

/// Strict decode. Throws SchemaError when the document does not validate.
ResumeRecord record_from_json(const nlohmann::json& document);

/// Lenient decode used on model output: missing keys and nulls become empty
/// values, scalars found where strings are expected are stringified. Still
/// throws SchemaError for shapes that cannot be coerced (e.g. a non-object).
/// `filled` receives the top-level keys that had to be defaulted.
ResumeRecord record_from_json_lenient(const nlohmann::json& document,
                                      std::vector<std::string>* filled = nullptr);

nlohmann::ordered_json to_json(const ResumeRecord& record);

/// UTF-8 JSON, schema key order, no insignificant whitespace. Invalid UTF-8
/// sequences are replaced with U+FFFD.
std::string canonical_serialize(const ResumeRecord& record);

ResumeRecord parse_record(std::string_view json_text);

/// Deterministic leaf-path rendering of a record.
struct FlatView {
    std::vector<std::pair<std::string, std::string>> pairs;

    bool operator==(const FlatView&) const = default;

    /// "path: value" lines joined by '\n'.
    std::string render() const;
};

/// Depth-first, keys in schema order, list indices ascending. Empty lists
/// contribute no leaves. Throws SchemaError if the record has violations.
FlatView flatten(const ResumeRecord& record);

/// The shipped JSON Schema (draft 2020-12) describing ResumeRecord.
std::string_view json_schema_document();

}  // namespace resumeft
