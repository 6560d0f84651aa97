#include "resumeft/schema.hpp"

#include <algorithm>
#include <cctype>
#include <span>
#include <unordered_set>

#include "resumeft/normalize.hpp"

namespace resumeft {

using json = nlohmann::json;

namespace {

constexpr std::string_view kExperienceKeys[] = {"title", "company", "start_date", "end_date",
                                                "description"};
constexpr std::string_view kEducationKeys[] = {"degree", "institution", "end_date"};

std::string indexed(std::string_view base, std::size_t i) {
    return std::string(base) + "[" + std::to_string(i) + "]";
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

bool email_shaped(std::string_view s) {
    if (s.empty()) return true;
    if (std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }))
        return false;
    auto at = s.find('@');
    if (at == std::string_view::npos || at == 0 || at + 1 == s.size()) return false;
    return s.find('@', at + 1) == std::string_view::npos;
}

bool phone_shaped(std::string_view s) {
    if (s.empty()) return true;
    bool digit = false;
    for (unsigned char c : s) {
        if (std::isdigit(c)) {
            digit = true;
            continue;
        }
        if (c == ' ' || c == '+' || c == '-' || c == '(' || c == ')' || c == '.' || c == '/')
            continue;
        return false;
    }
    return digit;
}

void check_object_fields(const json& obj, std::string_view path,
                         std::span<const std::string_view> keys, std::vector<Violation>& out) {
    if (!obj.is_object()) {
        out.push_back({std::string(path), "expected object"});
        return;
    }
    for (auto key : keys) {
        std::string sub = std::string(path) + "." + std::string(key);
        auto it = obj.find(key);
        if (it == obj.end())
            out.push_back({sub, "missing key"});
        else if (!it->is_string())
            out.push_back({sub, "expected string"});
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
            out.push_back({std::string(path) + "." + it.key(), "unknown key"});
    }
}

std::vector<Violation> structural_violations(const json& doc) {
    std::vector<Violation> out;
    if (!doc.is_object()) {
        out.push_back({"", "expected object"});
        return out;
    }
    for (auto key : kRecordKeys) {
        if (!doc.contains(std::string(key))) out.push_back({std::string(key), "missing key"});
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(std::begin(kRecordKeys), std::end(kRecordKeys), it.key()) ==
            std::end(kRecordKeys))
            out.push_back({it.key(), "unknown key"});
    }
    for (auto key : {"name", "email", "phone", "department"}) {
        auto it = doc.find(key);
        if (it != doc.end() && !it->is_string()) out.push_back({key, "expected string"});
    }
    if (auto it = doc.find("skills"); it != doc.end()) {
        if (!it->is_array()) {
            out.push_back({"skills", "expected array"});
        } else {
            for (std::size_t i = 0; i < it->size(); ++i)
                if (!(*it)[i].is_string()) out.push_back({indexed("skills", i), "expected string"});
        }
    }
    auto check_entries = [&](const char* key, std::span<const std::string_view> keys) {
        auto it = doc.find(key);
        if (it == doc.end()) return;
        if (!it->is_array()) {
            out.push_back({key, "expected array"});
            return;
        }
        for (std::size_t i = 0; i < it->size(); ++i)
            check_object_fields((*it)[i], indexed(key, i), keys, out);
    };
    check_entries("experience", kExperienceKeys);
    check_entries("education", kEducationKeys);
    return out;
}

ResumeRecord decode_unchecked(const json& doc) {
    ResumeRecord r;
    r.name = doc.at("name").get<std::string>();
    r.email = doc.at("email").get<std::string>();
    r.phone = doc.at("phone").get<std::string>();
    r.skills = doc.at("skills").get<std::vector<std::string>>();
    for (const auto& e : doc.at("experience")) {
        r.experience.push_back({e.at("title").get<std::string>(), e.at("company").get<std::string>(),
                                e.at("start_date").get<std::string>(),
                                e.at("end_date").get<std::string>(),
                                e.at("description").get<std::string>()});
    }
    for (const auto& e : doc.at("education")) {
        r.education.push_back({e.at("degree").get<std::string>(),
                               e.at("institution").get<std::string>(),
                               e.at("end_date").get<std::string>()});
    }
    r.department = doc.at("department").get<std::string>();
    return r;
}

// Lenient scalar coercion for model output.
std::string coerce_string(const json& v) {
    if (v.is_null()) return {};
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    if (v.is_array()) {
        std::string joined;
        for (const auto& item : v) {
            auto s = coerce_string(item);
            if (s.empty()) continue;
            if (!joined.empty()) joined += ", ";
            joined += s;
        }
        return joined;
    }
    throw SchemaError("", "object where a string was expected");
}

std::string field_or_empty(const json& obj, std::string_view key) {
    auto it = obj.find(key);
    return it == obj.end() ? std::string{} : coerce_string(*it);
}

}  // namespace

std::string to_string(const Violation& v) {
    return (v.path.empty() ? std::string("<root>") : v.path) + ": " + v.rule;
}

SchemaError::SchemaError(std::vector<Violation> violations)
    : std::runtime_error([&] {
          std::string msg = "schema violation";
          for (const auto& v : violations) msg += "; " + to_string(v);
          return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const ResumeRecord& r) {
    std::vector<Violation> out;
    if (!email_shaped(r.email)) out.push_back({"email", "not an email address"});
    if (!phone_shaped(r.phone)) out.push_back({"phone", "not a phone number"});

    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < r.skills.size(); ++i) {
        const auto& s = r.skills[i];
        if (is_blank(s))
            out.push_back({indexed("skills", i), "empty skill"});
        else if (!seen.insert(s).second)
            out.push_back({indexed("skills", i), "duplicate skill"});
    }
    for (std::size_t i = 0; i < r.experience.size(); ++i) {
        const auto& e = r.experience[i];
        if (is_concrete_date(e.start_date) && is_concrete_date(e.end_date) &&
            e.start_date > e.end_date)
            out.push_back({indexed("experience", i), "start_date after end_date"});
    }
    for (std::size_t i = 0; i < r.education.size(); ++i) {
        const auto& e = r.education[i];
        if (is_blank(e.degree)) out.push_back({indexed("education", i) + ".degree", "empty degree"});
        if (is_blank(e.institution))
            out.push_back({indexed("education", i) + ".institution", "empty institution"});
    }
    return out;
}

std::vector<Violation> validate(const json& document) {
    auto out = structural_violations(document);
    if (!out.empty()) return out;
    return validate(decode_unchecked(document));
}

ResumeRecord record_from_json(const json& document) {
    auto violations = validate(document);
    if (!violations.empty()) throw SchemaError(std::move(violations));
    return decode_unchecked(document);
}

ResumeRecord record_from_json_lenient(const json& doc, std::vector<std::string>* filled) {
    if (!doc.is_object()) throw SchemaError("", "expected object");
    if (filled) {
        for (auto key : kRecordKeys)
            if (!doc.contains(std::string(key)) || doc.at(std::string(key)).is_null()) filled->emplace_back(key);
    }
    ResumeRecord r;
    r.name = field_or_empty(doc, "name");
    r.email = field_or_empty(doc, "email");
    r.phone = field_or_empty(doc, "phone");
    r.department = field_or_empty(doc, "department");

    auto list = [&](const char* key) -> json {
        auto it = doc.find(key);
        if (it == doc.end() || it->is_null()) return json::array();
        if (it->is_array()) return *it;
        if (it->is_string() || it->is_object()) return json::array({*it});
        throw SchemaError(key, "expected array");
    };
    for (const auto& s : list("skills")) {
        if (s.is_object()) throw SchemaError("skills", "expected string elements");
        auto v = coerce_string(s);
        if (!v.empty()) r.skills.push_back(std::move(v));
    }
    for (const auto& e : list("experience")) {
        if (!e.is_object()) throw SchemaError("experience", "expected object elements");
        r.experience.push_back({field_or_empty(e, "title"), field_or_empty(e, "company"),
                                field_or_empty(e, "start_date"), field_or_empty(e, "end_date"),
                                field_or_empty(e, "description")});
    }
    for (const auto& e : list("education")) {
        if (!e.is_object()) throw SchemaError("education", "expected object elements");
        r.education.push_back({field_or_empty(e, "degree"), field_or_empty(e, "institution"),
                               field_or_empty(e, "end_date")});
    }
    return r;
}

nlohmann::ordered_json to_json(const ResumeRecord& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["email"] = r.email;
    j["phone"] = r.phone;
    j["skills"] = r.skills;
    auto& exp = j["experience"] = nlohmann::ordered_json::array();
    for (const auto& e : r.experience) {
        nlohmann::ordered_json o;
        o["title"] = e.title;
        o["company"] = e.company;
        o["start_date"] = e.start_date;
        o["end_date"] = e.end_date;
        o["description"] = e.description;
        exp.push_back(std::move(o));
    }
    auto& edu = j["education"] = nlohmann::ordered_json::array();
    for (const auto& e : r.education) {
        nlohmann::ordered_json o;
        o["degree"] = e.degree;
        o["institution"] = e.institution;
        o["end_date"] = e.end_date;
        edu.push_back(std::move(o));
    }
    j["department"] = r.department;
    return j;
}

std::string canonical_serialize(const ResumeRecord& record) {
    return to_json(record).dump(-1, ' ', false, json::error_handler_t::replace);
}

ResumeRecord parse_record(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    return record_from_json(doc);
}

std::string FlatView::render() const {
    std::string out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) out += '\n';
        out += pairs[i].first;
        out += ": ";
        out += pairs[i].second;
    }
    return out;
}

FlatView flatten(const ResumeRecord& r) {
    if (auto v = validate(r); !v.empty()) throw SchemaError(std::move(v));
    FlatView view;
    auto& p = view.pairs;
    p.emplace_back("name", r.name);
    p.emplace_back("email", r.email);
    p.emplace_back("phone", r.phone);
    for (std::size_t i = 0; i < r.skills.size(); ++i) p.emplace_back(indexed("skills", i), r.skills[i]);
    for (std::size_t i = 0; i < r.experience.size(); ++i) {
        const auto base = indexed("experience", i);
        const auto& e = r.experience[i];
        p.emplace_back(base + ".title", e.title);
        p.emplace_back(base + ".company", e.company);
        p.emplace_back(base + ".start_date", e.start_date);
        p.emplace_back(base + ".end_date", e.end_date);
        p.emplace_back(base + ".description", e.description);
    }
    for (std::size_t i = 0; i < r.education.size(); ++i) {
        const auto base = indexed("education", i);
        const auto& e = r.education[i];
        p.emplace_back(base + ".degree", e.degree);
        p.emplace_back(base + ".institution", e.institution);
        p.emplace_back(base + ".end_date", e.end_date);
    }
    p.emplace_back("department", r.department);
    return view;
}

std::string_view json_schema_document() {
    static constexpr std::string_view kSchema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "$id": "resumeft/resume_record.schema.json",
  "title": "ResumeRecord",
  "type": "object",
  "additionalProperties": false,
  "required": ["name", "email", "phone", "skills", "experience", "education", "department"],
  "properties": {
    "name": {"type": "string"},
    "email": {"type": "string", "pattern": "^$|^[^@\\s]+@[^@\\s]+$"},
    "phone": {"type": "string", "pattern": "^$|^[0-9 +()./-]*[0-9][0-9 +()./-]*$"},
    "skills": {"type": "array", "items": {"type": "string", "minLength": 1}, "uniqueItems": true},
    "experience": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["title", "company", "start_date", "end_date", "description"],
        "properties": {
          "title": {"type": "string"},
          "company": {"type": "string"},
          "start_date": {"type": "string"},
          "end_date": {"type": "string"},
          "description": {"type": "string"}
        }
      }
    },
    "education": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["degree", "institution", "end_date"],
        "properties": {
          "degree": {"type": "string", "minLength": 1},
          "institution": {"type": "string", "minLength": 1},
          "end_date": {"type": "string"}
        }
      }
    },
    "department": {"type": "string"}
  }
}
)";
    return kSchema;
}

}  // namespace resumeft
