#include "resumeft/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include <spdlog/fmt/chrono.h>
#include <spdlog/spdlog.h>

#include "resumeft/digest.hpp"
#include "resumeft/embedding.hpp"
#include "resumeft/synth.hpp"

namespace resumeft {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kLockName = ".resumeft.lock";

std::string dump_pretty(const ojson& j) {
    return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

json read_json_file(const fs::path& path) {
    try {
        return json::parse(read_file(path.string()));
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::unique_ptr<CompletionClient> make_client(const ClientFactory& factory,
                                              const EndpointConfig& config) {
    if (factory) return factory(config);
    try {
        return std::make_unique<HttpCompletionClient>(config);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ojson ratios_json(const SplitRatios& r) { return ojson::array({r.train, r.val, r.test}); }

ojson normalization_json(const NormalizationReport& r) {
    ojson j;
    j["dates_rewritten"] = r.dates_rewritten;
    j["skills_unified"] = r.skills_unified;
    j["placeholders_inserted"] = r.placeholders_inserted;
    auto& arr = j["unparseable_dates"] = ojson::array();
    for (const auto& [path, value] : r.unparseable_dates) arr.push_back({path, value});
    return j;
}

std::vector<fs::path> sorted_files(const fs::path& dir, std::string_view extension) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

DirectoryLock::DirectoryLock(const fs::path& dir) : path_(dir / kLockName) {
    ensure_dir(dir);
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST)
            throw ConfigError("another command is running in " + dir.string() + " (remove " +
                              path_.string() + " if it is stale)");
        throw ConfigError("cannot create lock " + path_.string() + ": " + std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto written = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

DirectoryLock::~DirectoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

SkillAliasMap load_alias_map(const std::string& path) {
    if (path.empty()) return SkillAliasMap::defaults();
    try {
        return SkillAliasMap::load(path);
    } catch (const std::exception& e) {
        throw ConfigError("alias map " + path + ": " + e.what());
    }
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    write_file(tmp.string(), contents);
    fs::rename(tmp, path);
}

// ---- ingest -------------------------------------------------------------

IngestSummary cmd_ingest(const IngestOptions& options) {
    const fs::path in_dir(options.input_dir);
    if (!fs::is_directory(in_dir)) throw ConfigError("input directory not found: " + options.input_dir);
    auto inputs = sorted_files(in_dir, ".txt");
    if (inputs.empty()) throw DataError("no .txt resumes in " + options.input_dir);

    const fs::path out_dir(options.out_dir);
    DirectoryLock lock(out_dir);
    ensure_dir(out_dir / "parsed");
    ensure_dir(out_dir / "texts");
    const auto aliases = load_alias_map(options.alias_map);

    // source_id -> previous manifest entry
    std::map<std::string, ojson> previous;
    const auto manifest_path = out_dir / "ingest_manifest.json";
    if (fs::exists(manifest_path)) {
        const auto old_manifest = ojson::parse(read_file(manifest_path.string()));
        for (const auto& e : old_manifest.at("entries"))
            previous[e.at("source_id").get<std::string>()] = e;
    }

    std::unique_ptr<CompletionClient> client;
    IngestSummary summary;
    ojson entries = ojson::array();

    for (const auto& path : inputs) {
        const std::string source_id = path.stem().string();
        const fs::path parsed_rel = fs::path("parsed") / (source_id + ".json");
        const fs::path text_rel = fs::path("texts") / (source_id + ".txt");

        std::string text;
        try {
            text = read_file(path.string());
        } catch (const std::exception& e) {
            summary.failures.push_back({source_id, path.string(), e.what(), "", false});
            continue;
        }
        const std::string digest = sha256_hex(text);

        if (auto it = previous.find(source_id); it != previous.end() &&
                                                 it->second.value("sha256", "") == digest &&
                                                 fs::exists(out_dir / parsed_rel)) {
            entries.push_back(it->second);
            ++summary.skipped;
            continue;
        }

        if (!client) client = make_client(options.client_factory, options.endpoint);
        try {
            auto result = parse_resume(text, *client, aliases);
            write_file_atomic(out_dir / parsed_rel, canonical_serialize(result.record));
            write_file_atomic(out_dir / text_rel, text);
            ojson e;
            e["source_id"] = source_id;
            e["source_path"] = fs::absolute(path).string();
            e["sha256"] = digest;
            e["output"] = parsed_rel.generic_string();
            e["text"] = text_rel.generic_string();
            e["repairs"] = result.repairs_applied;
            entries.push_back(std::move(e));
            ++summary.parsed;
        } catch (const ExtractionError& e) {
            summary.failures.push_back({source_id, path.string(), e.what(), e.raw_response(), false});
        } catch (const EndpointError& e) {
            summary.failures.push_back({source_id, path.string(), e.what(), "", true});
        } catch (const std::invalid_argument& e) {
            summary.failures.push_back({source_id, path.string(), e.what(), "", false});
        }
    }

    ojson failures = ojson::array();
    for (const auto& f : summary.failures) {
        spdlog::warn("ingest: {} failed: {}", f.source_id, f.error);
        ojson o;
        o["source_id"] = f.source_id;
        o["source_path"] = f.source_path;
        o["error"] = f.error;
        o["endpoint_error"] = f.endpoint_error;
        o["raw_response"] = f.raw_response;
        failures.push_back(std::move(o));
    }

    ojson manifest;
    manifest["command"] = "ingest";
    manifest["tool_version"] = kToolVersion;
    manifest["instruction_version"] = kParseInstructionVersion;
    manifest["input_dir"] = fs::absolute(in_dir).string();
    manifest["endpoint_digest"] = options.endpoint.digest();
    manifest["model_id"] = options.endpoint.model_id;
    manifest["alias_map_sha256"] = sha256_hex(json(aliases.entries()).dump());
    manifest["entries"] = std::move(entries);
    manifest["failures"] = failures.size();
    write_file_atomic(manifest_path, dump_pretty(manifest));
    write_file_atomic(out_dir / "failures.json", dump_pretty(failures));

    spdlog::info("ingest: {} parsed, {} unchanged, {} failed", summary.parsed, summary.skipped,
                 summary.failures.size());
    return summary;
}

// ---- synth --------------------------------------------------------------

SynthSummary cmd_synth(const SynthOptions& options) {
    SynthBatchSpec spec;
    spec.count = options.count;
    spec.seed = options.seed;
    try {
        if (options.profiles_dir.empty()) {
            for (auto& p : default_profiles()) spec.profiles.push_back({std::move(p), 1.0});
        } else {
            spec.profiles = load_profiles(options.profiles_dir);
        }
        spec.validate();
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("synth: ") + e.what());
    }

    const fs::path out_dir(options.out_dir);
    DirectoryLock lock(out_dir);
    const auto batch = generate_batch(spec);

    std::string jsonl;
    for (const auto& r : batch) {
        ojson line;
        line["source_id"] = r.source_id;
        line["record"] = to_json(r.record);
        jsonl += line.dump(-1, ' ', false, json::error_handler_t::replace);
        jsonl += '\n';
    }
    const auto out_path = out_dir / "synthetic.jsonl";
    write_file_atomic(out_path, jsonl);

    ojson profiles = ojson::array();
    for (const auto& p : spec.profiles)
        profiles.push_back({{"department", p.profile.department}, {"weight", p.weight}});
    ojson manifest;
    manifest["command"] = "synth";
    manifest["tool_version"] = kToolVersion;
    manifest["seed"] = options.seed;
    manifest["count"] = options.count;
    manifest["profiles_dir"] = options.profiles_dir;
    manifest["profiles"] = std::move(profiles);
    manifest["output"] = "synthetic.jsonl";
    manifest["output_sha256"] = sha256_hex(jsonl);
    write_file_atomic(out_dir / "synth_manifest.json", dump_pretty(manifest));

    spdlog::info("synth: wrote {} records to {}", batch.size(), out_path.string());
    return {batch.size(), out_path.string()};
}

std::vector<SyntheticResume> read_synthetic_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::vector<SyntheticResume> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (trim(line).empty()) continue;
        try {
            auto j = json::parse(line);
            out.push_back({j.at("source_id").get<std::string>(), record_from_json(j.at("record"))});
        } catch (const std::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

// ---- build --------------------------------------------------------------

std::vector<BundleEntry> read_ingested(const std::string& ingest_dir) {
    const fs::path dir(ingest_dir);
    const auto manifest_path = dir / "ingest_manifest.json";
    if (!fs::exists(manifest_path))
        throw ConfigError("no ingest_manifest.json in " + ingest_dir + "; run `resumeft ingest` first");
    std::vector<BundleEntry> out;
    const auto manifest = read_json_file(manifest_path);
    for (const auto& e : manifest.at("entries")) {
        BundleEntry entry;
        entry.source_id = e.at("source_id").get<std::string>();
        entry.provenance = Provenance::real;
        try {
            entry.record = parse_record(read_file((dir / e.at("output").get<std::string>()).string()));
            entry.raw_text = read_file((dir / e.at("text").get<std::string>()).string());
        } catch (const std::exception& ex) {
            throw DataError("ingested record '" + entry.source_id + "': " + ex.what());
        }
        out.push_back(std::move(entry));
    }
    return out;
}

BuildSummary cmd_build(const BuildOptions& options) {
    try {
        options.ratios.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto aliases = load_alias_map(options.alias_map);

    std::vector<BundleEntry> real;
    std::vector<BundleEntry> synthetic;
    if (!options.real_dir.empty()) real = read_ingested(options.real_dir);
    if (!options.synthetic_path.empty()) {
        for (auto& s : read_synthetic_jsonl(options.synthetic_path)) {
            BundleEntry e;
            e.source_id = std::move(s.source_id);
            e.raw_text = render_plain_text(s.record);
            e.record = std::move(s.record);
            e.provenance = Provenance::synthetic;
            synthetic.push_back(std::move(e));
        }
    }
    if (real.empty() && synthetic.empty())
        throw DataError(
            "empty corpus: no parsed or synthetic records found. Run `resumeft ingest` and pass "
            "--real, or run `resumeft synth` and pass --synthetic");

    const fs::path out_dir(options.out_dir);
    DirectoryLock lock(out_dir);

    BuildSummary summary;
    summary.real = real.size();
    summary.synthetic = synthetic.size();

    auto bundle = merge(std::move(real), std::move(synthetic));
    summary.normalization = normalize_bundle(bundle, aliases);
    bundle = split(std::move(bundle), options.seed, options.ratios, options.stratify);
    summary.total = bundle.entries.size();
    summary.duplicates_removed = bundle.duplicates_removed;
    summary.sizes = bundle.sizes();

    ojson files;
    for (auto s : {Split::train, Split::val, Split::test}) {
        std::ostringstream os;
        export_instruction_jsonl(bundle, s, os);
        const std::string name = std::string(to_string(s)) + ".jsonl";
        write_file_atomic(out_dir / name, os.str());
        files[name] = sha256_hex(os.str());
    }
    const std::string bundle_text = dump_pretty(bundle.to_json());
    write_file_atomic(out_dir / "bundle.json", bundle_text);
    files["bundle.json"] = sha256_hex(bundle_text);

    auto lora = emit_lora_config(options.base_model_id);
    const std::string lora_text = write_lora_config(lora, (out_dir / "lora_config.json").string());
    files["lora_config.json"] = sha256_hex(lora_text);

    ojson inputs;
    if (!options.real_dir.empty()) {
        inputs["real_dir"] = fs::absolute(options.real_dir).string();
        inputs["real_manifest_sha256"] =
            sha256_hex(read_file((fs::path(options.real_dir) / "ingest_manifest.json").string()));
    }
    if (!options.synthetic_path.empty()) {
        inputs["synthetic"] = fs::absolute(options.synthetic_path).string();
        inputs["synthetic_sha256"] = sha256_hex(read_file(options.synthetic_path));
    }
    inputs["alias_map_sha256"] = sha256_hex(json(aliases.entries()).dump());

    ojson manifest;
    manifest["command"] = "build";
    manifest["tool_version"] = kToolVersion;
    manifest["instruction_version"] = kParseInstructionVersion;
    manifest["seed"] = options.seed;
    manifest["ratios"] = ratios_json(options.ratios);
    manifest["stratified"] = options.stratify;
    manifest["inputs"] = std::move(inputs);
    manifest["counts"] = {{"real", summary.real},
                          {"synthetic", summary.synthetic},
                          {"duplicates_removed", summary.duplicates_removed},
                          {"total", summary.total},
                          {"train", summary.sizes.train},
                          {"val", summary.sizes.val},
                          {"test", summary.sizes.test}};
    manifest["normalization"] = normalization_json(summary.normalization);
    manifest["files"] = std::move(files);
    write_file_atomic(out_dir / "manifest.json", dump_pretty(manifest));

    spdlog::info("build: N={} (train {}, val {}, test {}), {} duplicate(s) removed", summary.total,
                 summary.sizes.train, summary.sizes.val, summary.sizes.test,
                 summary.duplicates_removed);
    return summary;
}

// ---- evaluate -----------------------------------------------------------

ModelEndpoint parse_model_flag(std::string_view value, const EndpointConfig& defaults) {
    ModelEndpoint m;
    m.endpoint = defaults;
    std::string model_id;
    if (value.find('=') == std::string_view::npos) {
        m.spec.label = trim(value);
    } else {
        std::size_t pos = 0;
        while (pos <= value.size()) {
            auto comma = value.find(',', pos);
            if (comma == std::string_view::npos) comma = value.size();
            auto item = value.substr(pos, comma - pos);
            pos = comma + 1;
            if (trim(item).empty()) continue;
            auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("--model: expected key=value, got '" + std::string(item) + "'");
            const std::string key = trim(item.substr(0, eq));
            const std::string val = trim(item.substr(eq + 1));
            if (key == "label") m.spec.label = val;
            else if (key == "model_id" || key == "model") model_id = val;
            else if (key == "url") m.endpoint.base_url = val;
            else if (key == "tag") m.spec.tag = val;
            else if (key == "params") m.spec.parameter_label = val;
            else throw ConfigError("--model: unknown key '" + key + "'");
        }
    }
    if (m.spec.label.empty()) throw ConfigError("--model: missing label in '" + std::string(value) + "'");
    m.endpoint.model_id = model_id.empty() ? m.spec.label : model_id;
    return m;
}

std::string render_improvements(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    std::vector<std::string> seen;
    for (const auto& fine : rows) {
        if (fine.tag != "fine-tuned") continue;
        if (std::find(seen.begin(), seen.end(), fine.model_label) != seen.end()) continue;
        auto base = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
            return r.tag == "base" && r.model_label == fine.model_label;
        });
        if (base == rows.end()) continue;
        seen.push_back(fine.model_label);
        const auto imp = improvement(fine, *base);
        os << fine.model_label << " fine-tuned vs base:";
        for (auto c : kColumns) {
            os << ' ' << column_name(c) << ' ';
            if (auto v = imp[c]) os << fmt::format("{:+.2f}%", *v);
            else os << "n/a";
            if (c != Column::overall) os << ';';
        }
        os << '\n';
    }
    return os.str();
}

std::vector<std::pair<std::string, std::string>> write_reports(const AggregateReport& report,
                                                              const fs::path& out_dir) {
    if (report.rows.empty()) throw std::invalid_argument("write_reports: no rows");
    const auto table = compare(report.rows);
    std::string text = table.render_text();
    if (auto imp = render_improvements(table.rows); !imp.empty()) text += "\n" + imp;
    if (auto failures = report.failures(); !failures.empty()) {
        text += "\nFailed samples (scored as zero):\n";
        for (const auto* f : failures)
            text += "  " + f->model_label + " / " + f->source_id + ": " + f->error + "\n";
    }

    auto j = report.to_json();
    ojson improvements = ojson::array();
    for (const auto& fine : table.rows) {
        if (fine.tag != "fine-tuned") continue;
        for (const auto& base : table.rows) {
            if (base.tag != "base" || base.model_label != fine.model_label) continue;
            const auto imp = improvement(fine, base);
            ojson o;
            o["model"] = fine.model_label;
            for (auto c : kColumns) {
                static constexpr const char* keys[] = {"em", "f1", "bleu", "rouge", "overall"};
                auto v = imp[c];
                o[keys[static_cast<std::size_t>(c)]] = v ? ojson(*v) : ojson(nullptr);
            }
            improvements.push_back(std::move(o));
            break;
        }
    }
    j["improvements"] = std::move(improvements);

    const std::string json_text = dump_pretty(j);
    const std::string csv_text = table.render_csv();
    write_file_atomic(out_dir / "report.txt", text);
    write_file_atomic(out_dir / "report.json", json_text);
    write_file_atomic(out_dir / "report.csv", csv_text);
    return {{"report.txt", sha256_hex(text)},
            {"report.json", sha256_hex(json_text)},
            {"report.csv", sha256_hex(csv_text)}};
}

std::vector<std::string> check_thresholds(const std::vector<ReportRow>& rows,
                                          const Thresholds& t) {
    std::vector<std::string> unmet;
    const std::pair<Column, std::optional<double>> limits[] = {
        {Column::em, t.em}, {Column::f1, t.f1}, {Column::bleu, t.bleu},
        {Column::rouge, t.rouge}, {Column::overall, t.overall}};
    for (const auto& r : rows) {
        for (const auto& [c, limit] : limits) {
            if (!limit) continue;
            const double v = column_value(r, c);
            if (v < *limit)
                unmet.push_back(fmt::format("{} ({}): {} {:.2f} < {:.2f}", r.model_label, r.tag,
                                            column_name(c), v, *limit));
        }
    }
    return unmet;
}

EvaluateSummary cmd_evaluate(const EvaluateOptions& options) {
    if (options.models.empty()) throw ConfigError("evaluate: no --model given");
    if (options.parallelism < 1) throw ConfigError("evaluate: parallelism must be >= 1");
    const fs::path dataset_dir(options.dataset_dir);
    const auto bundle_path = dataset_dir / "bundle.json";
    if (!fs::exists(bundle_path))
        throw ConfigError("no bundle.json in " + options.dataset_dir + "; run `resumeft build` first");
    const auto aliases = load_alias_map(options.alias_map);

    const auto bundle = DatasetBundle::from_json(read_json_file(bundle_path));
    std::vector<TestSample> test;
    for (const auto* e : bundle.entries_in(Split::test))
        test.push_back({e->source_id, e->raw_text, e->record});
    if (test.empty())
        throw DataError("dataset in " + options.dataset_dir + " has no test split");

    std::unique_ptr<EmbeddingProvider> embedder;
    try {
        if (options.embedder == "offline") {
            embedder = std::make_unique<OfflineEmbedder>(options.embedding_dimension);
        } else if (options.embedder == "http") {
            options.embedding_endpoint.validate();
            embedder = std::make_unique<HttpEmbeddingProvider>(options.embedding_endpoint,
                                                               options.embedding_dimension);
        } else {
            throw ConfigError("unknown embedder '" + options.embedder + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("embedder: ") + e.what());
    }

    const fs::path out_dir(options.out_dir);
    DirectoryLock lock(out_dir);

    EvaluateSummary summary;
    EvalOptions eval_options;
    eval_options.parallelism = options.parallelism;
    eval_options.aliases = aliases;
    ojson runs = ojson::array();
    for (const auto& m : options.models) {
        auto client = make_client(options.client_factory, m.endpoint);
        spdlog::info("evaluate: {} ({}) on {} test samples", m.spec.label, m.spec.tag, test.size());
        auto eval = evaluate_model(test, m.spec, *client, *embedder, eval_options);
        const bool unreachable = std::all_of(eval.samples.begin(), eval.samples.end(),
                                             [](const SampleResult& s) { return s.endpoint_error; });
        if (unreachable) summary.unreachable_models.push_back(m.spec.label);

        ojson run;
        run["model_label"] = m.spec.label;
        run["parameter_label"] = m.spec.parameter_label;
        run["tag"] = m.spec.tag;
        run["model_id"] = m.endpoint.model_id;
        run["endpoint_digest"] = m.endpoint.digest();
        run["samples"] = eval.row.samples;
        run["failures"] = eval.row.failures;
        runs.push_back(std::move(run));

        summary.report.rows.push_back(eval.row);
        for (auto& s : eval.samples) summary.report.samples.push_back(std::move(s));
    }

    auto digests = write_reports(summary.report, out_dir);
    summary.unmet_thresholds = check_thresholds(summary.report.rows, options.thresholds);

    const auto dataset_manifest = dataset_dir / "manifest.json";
    ojson manifest;
    manifest["command"] = "evaluate";
    manifest["tool_version"] = kToolVersion;
    manifest["metric_suite"] = kMetricSuiteVersion;
    manifest["instruction_version"] = kParseInstructionVersion;
    manifest["timestamp"] = options.timestamp.empty() ? utc_now() : options.timestamp;
    manifest["seed"] = bundle.seed ? ojson(*bundle.seed) : ojson(nullptr);
    manifest["dataset_dir"] = fs::absolute(dataset_dir).string();
    manifest["dataset_manifest_sha256"] =
        sha256_hex(read_file((fs::exists(dataset_manifest) ? dataset_manifest : bundle_path).string()));
    manifest["test_samples"] = test.size();
    manifest["embedder"] = embedder->describe();
    manifest["parallelism"] = options.parallelism;
    manifest["runs"] = std::move(runs);
    ojson reports;
    for (const auto& [name, digest] : digests) reports[name] = digest;
    manifest["reports"] = std::move(reports);
    manifest["unmet_thresholds"] = summary.unmet_thresholds;
    write_file_atomic(out_dir / "run_manifest.json", dump_pretty(manifest));
    return summary;
}

// ---- report -------------------------------------------------------------

AggregateReport cmd_report(const std::vector<std::string>& inputs, const std::string& out_dir) {
    if (inputs.empty()) throw ConfigError("report: no input files");
    AggregateReport merged;
    for (const auto& path : inputs) {
        const auto j = read_json_file(path);
        try {
            if (j.is_array()) {
                // Hand-transcribed rows in percent.
                for (const auto& r : j) {
                    std::optional<double> overall;
                    if (auto it = r.find("overall_pct"); it != r.end() && !it->is_null())
                        overall = it->get<double>();
                    merged.rows.push_back(row_from_percentages(
                        r.at("model").get<std::string>(), r.value("parameters", ""),
                        r.value("tag", "base"), r.at("em_pct").get<double>(),
                        r.at("f1_pct").get<double>(), r.at("bleu_pct").get<double>(),
                        r.at("rouge_pct").get<double>(), overall));
                }
            } else {
                auto report = AggregateReport::from_json(j);
                for (auto& r : report.rows) merged.rows.push_back(std::move(r));
                for (auto& s : report.samples) merged.samples.push_back(std::move(s));
            }
        } catch (const json::exception& e) {
            throw DataError(path + ": " + e.what());
        }
    }
    if (merged.rows.empty()) throw DataError("report: inputs contain no rows");
    const fs::path dir(out_dir);
    DirectoryLock lock(dir);
    write_reports(merged, dir);
    return merged;
}

}  // namespace resumeft
