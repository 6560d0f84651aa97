#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "resumeft/gateway.hpp"
#include "resumeft/rng.hpp"
#include "resumeft/schema.hpp"

namespace resumeft {

struct CountRange {
    int low = 0;
    int high = 0;
};

/// Template pools for one profession.
struct SynthProfile {
    std::string department;
    std::vector<std::string> name_pool;
    std::vector<std::string> company_pool;
    std::vector<std::string> institution_pool;
    std::vector<std::string> skill_pool;
    std::vector<std::string> title_pool;
    std::vector<std::string> degree_pool;  // optional; built-in list when empty
    CountRange experience_count_range{1, 3};
    CountRange skill_count_range{3, 6};

    /// Throws std::invalid_argument naming the first broken invariant.
    void validate() const;

    static SynthProfile from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct WeightedProfile {
    SynthProfile profile;
    double weight = 1.0;
};

struct SynthBatchSpec {
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::vector<WeightedProfile> profiles;

    void validate() const;
};

struct SyntheticResume {
    std::string source_id;
    ResumeRecord record;
};

/// Default profiles for Human Resources, Information Technology, Public
/// Relations and Healthcare.
std::vector<SynthProfile> default_profiles();

/// Reads every *.json profile in `dir` (sorted by file name). A profile file
/// may carry an optional numeric "weight".
std::vector<WeightedProfile> load_profiles(const std::string& dir);

/// One schema-valid record with canonical dates, most recent job first.
ResumeRecord generate_resume(const SynthProfile& profile, SplitMix64& rng);

/// Record i is drawn from its own stream, stream_seed(seed, i), so batches
/// can be produced in any order or in parallel with identical output.
std::vector<SyntheticResume> generate_batch(const SynthBatchSpec& spec);

/// Plain-text resume rendering used as the model input for synthetic records.
std::string render_plain_text(const ResumeRecord& record);

inline constexpr std::string_view kDefaultSynthPrompt =
    "Write a realistic but entirely fictional resume for a candidate in the {department} "
    "department. Respond with the resume as one JSON object using exactly the keys name, email, "
    "phone, skills, experience (title, company, start_date, end_date, description), education "
    "(degree, institution, end_date) and department.";

/// Asks a completion endpoint for a synthetic resume. `{department}` in the
/// template is substituted. Failures surface as EndpointError/ExtractionError.
ResumeRecord generate_via_llm(std::string_view prompt_template, std::string_view department,
                              CompletionClient& client,
                              const SkillAliasMap& aliases = SkillAliasMap::defaults());

}  // namespace resumeft
