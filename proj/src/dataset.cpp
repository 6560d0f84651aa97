#include "resumeft/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "resumeft/gateway.hpp"
#include "resumeft/rng.hpp"

namespace resumeft {

using json = nlohmann::json;

std::string_view to_string(Provenance p) { return p == Provenance::real ? "real" : "synthetic"; }

std::string_view to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "train";
}

Provenance provenance_from_string(std::string_view s) {
    if (s == "real") return Provenance::real;
    if (s == "synthetic") return Provenance::synthetic;
    throw DataError("unknown provenance '" + std::string(s) + "'");
}

Split split_from_string(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw DataError("unknown split '" + std::string(s) + "'");
}

void SplitRatios::validate() const {
    if (!(train > 0.0 && val > 0.0 && test > 0.0))
        throw std::invalid_argument("split ratios must all be positive");
    if (std::abs(train + val + test - 1.0) > 1e-9)
        throw std::invalid_argument("split ratios must sum to 1");
}

SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios) {
    ratios.validate();
    // The epsilon keeps products like 0.1 * 70 from flooring one short.
    auto part = [n](double r) {
        return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9));
    };
    SplitSizes s;
    s.val = part(ratios.val);
    s.test = part(ratios.test);
    s.train = n - s.val - s.test;
    return s;
}

std::vector<const BundleEntry*> DatasetBundle::entries_in(Split s) const {
    std::vector<const BundleEntry*> out;
    for (const auto& e : entries) {
        auto it = split_assignment.find(e.source_id);
        if (it != split_assignment.end() && it->second == s) out.push_back(&e);
    }
    return out;
}

SplitSizes DatasetBundle::sizes() const {
    SplitSizes s;
    for (const auto& [_, split] : split_assignment) {
        switch (split) {
            case Split::train: ++s.train; break;
            case Split::val: ++s.val; break;
            case Split::test: ++s.test; break;
        }
    }
    return s;
}

nlohmann::ordered_json DatasetBundle::to_json() const {
    nlohmann::ordered_json j;
    if (seed) j["seed"] = *seed;
    else j["seed"] = nullptr;
    j["ratios"] = {ratios.train, ratios.val, ratios.test};
    j["stratified"] = stratified;
    j["duplicates_removed"] = duplicates_removed;
    auto& arr = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json o;
        o["source_id"] = e.source_id;
        o["provenance"] = to_string(e.provenance);
        auto it = split_assignment.find(e.source_id);
        if (it != split_assignment.end()) o["split"] = to_string(it->second);
        o["raw_text"] = e.raw_text;
        o["record"] = resumeft::to_json(e.record);
        arr.push_back(std::move(o));
    }
    return j;
}

DatasetBundle DatasetBundle::from_json(const json& j) {
    DatasetBundle b;
    if (!j.at("seed").is_null()) b.seed = j.at("seed").get<std::uint64_t>();
    const auto& r = j.at("ratios");
    b.ratios = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
    b.stratified = j.value("stratified", false);
    b.duplicates_removed = j.value("duplicates_removed", std::size_t{0});
    for (const auto& o : j.at("entries")) {
        BundleEntry e;
        e.source_id = o.at("source_id").get<std::string>();
        e.provenance = provenance_from_string(o.at("provenance").get<std::string>());
        e.raw_text = o.at("raw_text").get<std::string>();
        e.record = record_from_json(o.at("record"));
        if (auto it = o.find("split"); it != o.end())
            b.split_assignment[e.source_id] = split_from_string(it->get<std::string>());
        b.entries.push_back(std::move(e));
    }
    return b;
}

DatasetBundle merge(std::vector<BundleEntry> real, std::vector<BundleEntry> synthetic) {
    for (auto& e : real) e.provenance = Provenance::real;
    for (auto& e : synthetic) e.provenance = Provenance::synthetic;

    auto check_list = [](const std::vector<BundleEntry>& list, std::string_view which) {
        std::unordered_map<std::string_view, int> ids;
        for (const auto& e : list) {
            if (e.source_id.empty()) throw DataError(std::string(which) + ": empty source_id");
            if (++ids[e.source_id] > 1)
                throw DataError(std::string(which) + ": duplicate source_id '" + e.source_id + "'");
            if (trim(e.raw_text).empty())
                throw DataError("record '" + e.source_id + "' has no raw text");
            if (auto v = validate(e.record); !v.empty())
                throw DataError("record '" + e.source_id + "' is invalid: " + SchemaError(v).what());
        }
    };
    check_list(real, "real records");
    check_list(synthetic, "synthetic records");

    std::vector<BundleEntry> all;
    all.reserve(real.size() + synthetic.size());
    std::move(real.begin(), real.end(), std::back_inserter(all));
    std::move(synthetic.begin(), synthetic.end(), std::back_inserter(all));
    std::stable_sort(all.begin(), all.end(), [](const BundleEntry& a, const BundleEntry& b) {
        return a.source_id < b.source_id;
    });

    DatasetBundle bundle;
    std::unordered_map<std::string, std::size_t> by_bytes;
    for (auto& e : all) {
        if (!bundle.entries.empty() && bundle.entries.back().source_id == e.source_id) {
            auto& kept = bundle.entries.back();
            if (canonical_serialize(kept.record) != canonical_serialize(e.record))
                throw DataError("source_id '" + e.source_id +
                                "' appears in both lists with different content");
            if (e.provenance == Provenance::real) kept.provenance = Provenance::real;
            ++bundle.duplicates_removed;
            continue;
        }
        auto bytes = canonical_serialize(e.record);
        if (by_bytes.contains(bytes)) {
            ++bundle.duplicates_removed;
            continue;
        }
        by_bytes.emplace(std::move(bytes), bundle.entries.size());
        bundle.entries.push_back(std::move(e));
    }
    if (bundle.duplicates_removed > 0)
        spdlog::info("merge: removed {} duplicate record(s)", bundle.duplicates_removed);
    return bundle;
}

NormalizationReport normalize_bundle(DatasetBundle& bundle, const SkillAliasMap& aliases) {
    NormalizationReport total;
    for (auto& e : bundle.entries) {
        auto [record, report] = normalize_record(std::move(e.record), aliases);
        for (auto& [path, value] : report.unparseable_dates) path = e.source_id + ":" + path;
        e.record = std::move(record);
        total += report;
    }
    return total;
}

DatasetBundle split(DatasetBundle bundle, std::uint64_t seed, const SplitRatios& ratios,
                    bool stratify) {
    if (bundle.entries.empty()) throw DataError("cannot split an empty dataset");
    ratios.validate();
    std::sort(bundle.entries.begin(), bundle.entries.end(),
              [](const BundleEntry& a, const BundleEntry& b) { return a.source_id < b.source_id; });

    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& e : bundle.entries)
        groups[stratify ? e.record.department : std::string{}].push_back(e.source_id);

    bundle.split_assignment.clear();
    std::uint64_t group_index = 0;
    for (auto& [_, ids] : groups) {
        SplitMix64 rng(stratify ? stream_seed(seed, group_index++) : seed);
        shuffle(ids, rng);
        const auto sizes = split_sizes(ids.size(), ratios);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            Split s = i < sizes.val                ? Split::val
                      : i < sizes.val + sizes.test ? Split::test
                                                   : Split::train;
            bundle.split_assignment.emplace(ids[i], s);
        }
    }
    bundle.seed = seed;
    bundle.ratios = ratios;
    bundle.stratified = stratify;
    return bundle;
}

std::size_t export_instruction_jsonl(const DatasetBundle& bundle, Split split, std::ostream& out) {
    if (!bundle.is_split()) throw DataError("dataset has not been split");
    std::size_t lines = 0;
    for (const auto* e : bundle.entries_in(split)) {
        nlohmann::ordered_json line;
        line["instruction"] = parse_instruction();
        line["input"] = e->raw_text;
        line["output"] = canonical_serialize(e->record);
        out << line.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
        ++lines;
    }
    return lines;
}

std::size_t export_instruction_jsonl(const DatasetBundle& bundle, Split split,
                                     const std::string& path) {
    if (!bundle.is_split()) throw DataError("dataset has not been split");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    auto n = export_instruction_jsonl(bundle, split, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
    return n;
}

void LoraTrainingConfig::validate() const {
    if (rank <= 0) throw std::invalid_argument("LoRA rank must be positive");
    if (alpha <= 0) throw std::invalid_argument("LoRA alpha must be positive");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (warmup_steps < 0 || warmup_steps > max_steps)
        throw std::invalid_argument("warmup_steps must be within [0, max_steps]");
    if (target_modules.empty()) throw std::invalid_argument("target_modules is empty");
}

nlohmann::ordered_json LoraTrainingConfig::to_json() const {
    nlohmann::ordered_json j;
    j["base_model_id"] = base_model_id;
    j["r"] = rank;
    j["alpha"] = alpha;
    j["target_modules"] = target_modules;
    j["batch_size"] = batch_size;
    j["learning_rate"] = learning_rate;
    j["max_steps"] = max_steps;
    j["warmup_steps"] = warmup_steps;
    return j;
}

LoraTrainingConfig LoraTrainingConfig::from_json(const json& j) {
    LoraTrainingConfig c;
    c.base_model_id = j.at("base_model_id").get<std::string>();
    c.rank = j.at("r").get<int>();
    c.alpha = j.at("alpha").get<int>();
    c.target_modules = j.at("target_modules").get<std::vector<std::string>>();
    c.batch_size = j.at("batch_size").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.max_steps = j.at("max_steps").get<int>();
    c.warmup_steps = j.at("warmup_steps").get<int>();
    c.validate();
    return c;
}

LoraTrainingConfig emit_lora_config(std::string base_model_id) {
    LoraTrainingConfig c;
    c.base_model_id = std::move(base_model_id);
    c.validate();
    return c;
}

std::string write_lora_config(const LoraTrainingConfig& config, const std::string& path) {
    config.validate();
    std::string text = config.to_json().dump(2) + "\n";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    return text;
}

}  // namespace resumeft
