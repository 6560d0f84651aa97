#include "resumeft/synth.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "resumeft/normalize.hpp"

namespace resumeft {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kAnchorYear = 2024;

const std::vector<std::string>& builtin_degrees() {
    static const std::vector<std::string> kDegrees = {
        "Bachelor of Science", "Bachelor of Arts", "Master of Science",
        "Master of Business Administration", "Associate Degree"};
    return kDegrees;
}

constexpr std::string_view kMonthAbbrev[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                            "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

template <typename T>
const T& pick(const std::vector<T>& pool, SplitMix64& rng) {
    return pool[static_cast<std::size_t>(rng.below(pool.size()))];
}

std::string month_date(int months_since_epoch) {
    const int year = months_since_epoch / 12;
    const int month = months_since_epoch % 12 + 1;
    std::string y = std::to_string(year);
    return y + (month < 10 ? "-0" : "-") + std::to_string(month);
}

std::string email_for(std::string_view name) {
    std::string local;
    for (unsigned char c : name) {
        if (std::isalnum(c)) {
            local += static_cast<char>(std::tolower(c));
        } else if (!local.empty() && local.back() != '.') {
            local += '.';
        }
    }
    while (!local.empty() && local.back() == '.') local.pop_back();
    if (local.empty()) local = "candidate";
    return local + "@example.com";
}

void check_pool(const std::vector<std::string>& pool, std::string_view what, bool required) {
    if (required && pool.empty())
        throw std::invalid_argument("synth profile: " + std::string(what) + " is empty");
    for (const auto& v : pool)
        if (trim(v).empty())
            throw std::invalid_argument("synth profile: blank entry in " + std::string(what));
}

void check_range(const CountRange& r, std::string_view what) {
    if (r.low < 0 || r.low > r.high)
        throw std::invalid_argument("synth profile: " + std::string(what) +
                                    " must satisfy 0 <= low <= high");
}

std::vector<std::string> string_list(const json& j, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (required) throw std::invalid_argument(std::string("synth profile: missing ") + key);
        return {};
    }
    return it->get<std::vector<std::string>>();
}

CountRange range_from(const json& j, const char* key, CountRange fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_array() || it->size() != 2)
        throw std::invalid_argument(std::string("synth profile: ") + key + " must be [low, high]");
    return {(*it)[0].get<int>(), (*it)[1].get<int>()};
}

std::string human_date(std::string_view canonical) {
    if (canonical == kPresent) return "Present";
    if (canonical.size() == 7) {
        int m = std::stoi(std::string(canonical.substr(5, 2)));
        return std::string(kMonthAbbrev[m - 1]) + " " + std::string(canonical.substr(0, 4));
    }
    return std::string(canonical);
}

}  // namespace

void SynthProfile::validate() const {
    if (trim(department).empty()) throw std::invalid_argument("synth profile: empty department");
    check_pool(name_pool, "name_pool", true);
    check_pool(company_pool, "company_pool", true);
    check_pool(institution_pool, "institution_pool", true);
    check_pool(skill_pool, "skill_pool", true);
    check_pool(title_pool, "title_pool", true);
    check_pool(degree_pool, "degree_pool", false);
    check_range(experience_count_range, "experience_count_range");
    check_range(skill_count_range, "skill_count_range");
    std::unordered_set<std::string> distinct;
    for (const auto& s : skill_pool)
        if (!distinct.insert(trim(s)).second)
            throw std::invalid_argument("synth profile: duplicate skill '" + s + "' in skill_pool");
    if (static_cast<std::size_t>(skill_count_range.high) > skill_pool.size())
        throw std::invalid_argument("synth profile: skill_count_range.high exceeds skill_pool size");
}

SynthProfile SynthProfile::from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("synth profile: expected a JSON object");
    SynthProfile p;
    p.department = j.at("department").get<std::string>();
    p.name_pool = string_list(j, "name_pool", true);
    p.company_pool = string_list(j, "company_pool", true);
    p.institution_pool = string_list(j, "institution_pool", true);
    p.skill_pool = string_list(j, "skill_pool", true);
    p.title_pool = string_list(j, "title_pool", true);
    p.degree_pool = string_list(j, "degree_pool", false);
    p.experience_count_range = range_from(j, "experience_count_range", p.experience_count_range);
    p.skill_count_range = range_from(j, "skill_count_range", p.skill_count_range);
    p.validate();
    return p;
}

json SynthProfile::to_json() const {
    nlohmann::ordered_json j;
    j["department"] = department;
    j["name_pool"] = name_pool;
    j["company_pool"] = company_pool;
    j["institution_pool"] = institution_pool;
    j["skill_pool"] = skill_pool;
    j["title_pool"] = title_pool;
    if (!degree_pool.empty()) j["degree_pool"] = degree_pool;
    j["experience_count_range"] = {experience_count_range.low, experience_count_range.high};
    j["skill_count_range"] = {skill_count_range.low, skill_count_range.high};
    return json::parse(j.dump());
}

void SynthBatchSpec::validate() const {
    if (count < 1) throw std::invalid_argument("synth batch: count must be >= 1");
    if (profiles.empty()) throw std::invalid_argument("synth batch: no profiles");
    for (const auto& wp : profiles) {
        if (!(wp.weight > 0.0))
            throw std::invalid_argument("synth batch: profile weights must be positive");
        wp.profile.validate();
    }
}

std::vector<WeightedProfile> load_profiles(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::invalid_argument("no *.json profiles in " + dir);
    std::vector<WeightedProfile> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        auto j = json::parse(in);
        WeightedProfile wp{SynthProfile::from_json(j), j.value("weight", 1.0)};
        out.push_back(std::move(wp));
    }
    return out;
}

ResumeRecord generate_resume(const SynthProfile& profile, SplitMix64& rng) {
    profile.validate();
    ResumeRecord r;
    r.name = trim(pick(profile.name_pool, rng));
    r.email = email_for(r.name);
    r.phone = "+1 555-" + std::to_string(rng.between(100, 999)) + "-" +
              std::to_string(rng.between(1000, 9999));
    r.department = trim(profile.department);

    // Partial Fisher-Yates over pool indices: k distinct skills.
    const auto k = static_cast<std::size_t>(
        rng.between(profile.skill_count_range.low, profile.skill_count_range.high));
    std::vector<std::size_t> idx(profile.skill_pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
        std::swap(idx[i], idx[j]);
        r.skills.push_back(trim(profile.skill_pool[idx[i]]));
    }

    // Timeline runs backwards from the anchor, most recent job first.
    const auto jobs = rng.between(profile.experience_count_range.low,
                                  profile.experience_count_range.high);
    int cursor = kAnchorYear * 12 + static_cast<int>(rng.below(12));
    const bool current = rng.below(2) == 0;
    for (std::int64_t i = 0; i < jobs; ++i) {
        const int duration = static_cast<int>(rng.between(6, 60));
        ExperienceEntry e;
        e.title = trim(pick(profile.title_pool, rng));
        e.company = trim(pick(profile.company_pool, rng));
        e.end_date = (i == 0 && current) ? std::string(kPresent) : month_date(cursor);
        cursor -= duration;
        e.start_date = month_date(cursor);
        e.description = e.title + " at " + e.company + ".";
        if (!r.skills.empty()) {
            e.description += " Applied " + pick(r.skills, rng) + " in day-to-day work.";
        }
        r.experience.push_back(std::move(e));
        cursor -= static_cast<int>(rng.between(0, 6));
    }

    const auto& degrees = profile.degree_pool.empty() ? builtin_degrees() : profile.degree_pool;
    EducationEntry edu;
    edu.degree = trim(pick(degrees, rng));
    edu.institution = trim(pick(profile.institution_pool, rng));
    edu.end_date = std::to_string((cursor - static_cast<int>(rng.between(0, 24))) / 12);
    r.education.push_back(std::move(edu));
    return r;
}

std::vector<SyntheticResume> generate_batch(const SynthBatchSpec& spec) {
    spec.validate();
    double total_weight = 0.0;
    for (const auto& wp : spec.profiles) total_weight += wp.weight;

    std::vector<SyntheticResume> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        SplitMix64 rng(stream_seed(spec.seed, i));
        double ticket = rng.unit() * total_weight;
        std::size_t chosen = spec.profiles.size() - 1;
        for (std::size_t p = 0; p < spec.profiles.size(); ++p) {
            if (ticket < spec.profiles[p].weight) {
                chosen = p;
                break;
            }
            ticket -= spec.profiles[p].weight;
        }
        std::string id = std::to_string(i);
        id.insert(0, id.size() < 6 ? 6 - id.size() : 0, '0');
        out.push_back({"synth-" + std::to_string(spec.seed) + "-" + id,
                       generate_resume(spec.profiles[chosen].profile, rng)});
    }
    return out;
}

std::string render_plain_text(const ResumeRecord& r) {
    std::string out = r.name + "\n";
    std::string contact;
    if (!r.email.empty()) contact += "Email: " + r.email;
    if (!r.phone.empty()) contact += (contact.empty() ? "" : " | ") + std::string("Phone: ") + r.phone;
    if (!contact.empty()) out += contact + "\n";
    out += "Department: " + r.department + "\n";
    if (!r.skills.empty()) {
        out += "\nSkills\n";
        for (std::size_t i = 0; i < r.skills.size(); ++i) out += (i ? ", " : "") + r.skills[i];
        out += "\n";
    }
    if (!r.experience.empty()) {
        out += "\nExperience\n";
        for (const auto& e : r.experience) {
            out += e.title + ", " + e.company + " (" + human_date(e.start_date) + " - " +
                   human_date(e.end_date) + ")\n";
            if (!e.description.empty()) out += e.description + "\n";
        }
    }
    if (!r.education.empty()) {
        out += "\nEducation\n";
        for (const auto& e : r.education) {
            out += e.degree + ", " + e.institution;
            if (!e.end_date.empty()) out += " (" + human_date(e.end_date) + ")";
            out += "\n";
        }
    }
    return out;
}

ResumeRecord generate_via_llm(std::string_view prompt_template, std::string_view department,
                              CompletionClient& client, const SkillAliasMap& aliases) {
    std::string prompt(prompt_template);
    constexpr std::string_view kSlot = "{department}";
    for (auto pos = prompt.find(kSlot); pos != std::string::npos; pos = prompt.find(kSlot, pos))
        prompt.replace(pos, kSlot.size(), department);

    auto parsed = extract_record(client.complete({{"user", prompt}}), aliases);
    if (parsed.record.department == kDepartmentPlaceholder) parsed.record.department = department;
    return std::move(parsed.record);
}

}  // namespace resumeft
