#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "resumeft/digest.hpp"
#include "resumeft/pipeline.hpp"
#include "resumeft/synth.hpp"

using namespace resumeft;
using json = nlohmann::json;

namespace {

struct EndpointFlags {
    std::string url;
    std::string model_id;
    int timeout_ms = 60'000;
    int max_retries = 2;
    int max_parallel = 4;
    std::string transcript;

    EndpointConfig to_config(const std::string& api_key) const {
        EndpointConfig c;
        c.base_url = url;
        c.model_id = model_id;
        c.api_key = api_key;
        c.timeout = std::chrono::milliseconds(timeout_ms);
        c.max_retries = max_retries;
        c.max_parallel_requests = max_parallel;
        c.transcript_path = transcript;
        return c;
    }
};

void add_endpoint_flags(CLI::App* cmd, EndpointFlags& f) {
    cmd->add_option("--endpoint-url", f.url, "Chat-completions base URL, e.g. http://host:8000/v1");
    cmd->add_option("--timeout-ms", f.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
    cmd->add_option("--max-retries", f.max_retries, "Retries on transport errors, 429 and 5xx")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-parallel", f.max_parallel, "Concurrent requests per endpoint")
        ->check(CLI::Range(1, 4096));
    cmd->add_option("--transcript", f.transcript, "Append request/response JSONL to this file");
}

std::string config_key(const CLI::Option* opt) {
    auto name = opt->get_single_name();
    for (auto& ch : name)
        if (ch == '-') ch = '_';
    return name;
}

void set_from_json(CLI::Option* opt, const json& value) {
    auto as_string = [](const json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    opt->clear();
    if (value.is_array()) {
        // Numeric triples such as "ratios" are given as one comma-separated value.
        if (opt->get_expected_max() <= 1) {
            std::string joined;
            for (const auto& v : value) joined += (joined.empty() ? "" : ",") + as_string(v);
            opt->add_result(joined);
        } else {
            for (const auto& v : value) opt->add_result(as_string(v));
        }
    } else {
        opt->add_result(as_string(value));
    }
    opt->run_callback();
}

/// Values from the config file win over command-line flags. Top-level keys
/// apply to every command; an object named after the command applies to it
/// alone and wins over the top level.
void apply_config(CLI::App* cmd, const json& config) {
    auto apply_level = [&](const json& level) {
        for (auto* opt : cmd->get_options()) {
            if (opt->get_single_name().empty() || opt->get_single_name() == "help") continue;
            auto key = config_key(opt);
            auto it = level.find(key);
            if (it == level.end()) continue;
            if (it->is_object()) continue;
            set_from_json(opt, *it);
        }
    };
    apply_level(config);
    if (auto it = config.find(cmd->get_name()); it != config.end() && it->is_object())
        apply_level(*it);
}

SplitRatios parse_ratios(const std::string& text) {
    std::vector<double> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        try {
            parts.push_back(std::stod(text.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw ConfigError("--ratios: cannot parse '" + text + "'");
        }
        pos = comma + 1;
    }
    if (parts.size() != 3) throw ConfigError("--ratios expects three values train,val,test");
    SplitRatios r{parts[0], parts[1], parts[2]};
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--ratios: ") + e.what());
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resume parsing dataset builder and LLM evaluation harness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string config_path;
    std::string api_key_env(kDefaultApiKeyEnv);
    bool verbose = false;
    app.add_option("--config", config_path, "JSON config file; its values override flags")
        ->check(CLI::ExistingFile);
    app.add_option("--api-key-env", api_key_env, "Environment variable holding the API key");
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse a directory of .txt resumes via the endpoint");
    std::string ingest_input;
    std::string ingest_out = "ingested";
    std::string ingest_model;
    std::string alias_map;
    EndpointFlags ingest_ep;
    ingest->add_option("input", ingest_input, "Directory of plain-text resumes")->required();
    ingest->add_option("--out", ingest_out, "Output directory");
    ingest->add_option("--model", ingest_model, "Model id sent to the endpoint");
    ingest->add_option("--alias-map", alias_map, "Skill alias map JSON");
    add_endpoint_flags(ingest, ingest_ep);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate template-based synthetic resumes");
    std::size_t synth_count = 100;
    std::uint64_t seed = 42;
    std::string profiles;
    std::string synth_out = "synthetic";
    synth->add_option("--count", synth_count, "Number of records");
    synth->add_option("--seed", seed, "PRNG seed");
    synth->add_option("--profiles", profiles, "Directory of profile JSON files");
    synth->add_option("--out", synth_out, "Output directory");

    // build
    auto* build = app.add_subcommand("build", "Merge, normalize, split and export the dataset");
    std::string build_real;
    std::string build_synthetic;
    std::string ratios_text = "0.8,0.1,0.1";
    bool stratify = false;
    std::string base_model = "base-model";
    std::string build_out = "dataset";
    build->add_option("--real", build_real, "Ingest output directory");
    build->add_option("--synthetic", build_synthetic, "synthetic.jsonl from `synth`");
    build->add_option("--seed", seed, "Split seed");
    build->add_option("--ratios", ratios_text, "train,val,test fractions");
    build->add_flag("--stratify", stratify, "Split each department separately");
    build->add_option("--alias-map", alias_map, "Skill alias map JSON");
    build->add_option("--base-model", base_model, "base_model_id written to lora_config.json");
    build->add_option("--out", build_out, "Output directory");

    // parse
    auto* parse = app.add_subcommand("parse", "Parse one resume file and print the JSON record");
    std::string parse_input;
    std::string parse_model;
    std::string parse_out;
    EndpointFlags parse_ep;
    parse->add_option("input", parse_input, "Plain-text resume")->required()->check(CLI::ExistingFile);
    parse->add_option("--model", parse_model, "Model id sent to the endpoint");
    parse->add_option("--alias-map", alias_map, "Skill alias map JSON");
    parse->add_option("--out", parse_out, "Write the record here instead of stdout");
    add_endpoint_flags(parse, parse_ep);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score models on the test split");
    std::string eval_dataset = "dataset";
    std::vector<std::string> model_flags;
    std::string eval_out = "reports";
    std::string embedder = "offline";
    std::string embedding_url;
    std::string embedding_model;
    std::size_t embedding_dim = 384;
    int parallel = 4;
    std::string run_timestamp;
    Thresholds thresholds;
    EndpointFlags eval_ep;
    evaluate->add_option("--dataset", eval_dataset, "Directory written by `build`");
    evaluate
        ->add_option("--model", model_flags,
                     "label=NAME,model_id=ID,url=URL,tag=fine-tuned|base,params=P (repeatable)")
        ->required();
    evaluate->add_option("--embedder", embedder, "offline or http")
        ->check(CLI::IsMember({"offline", "http"}));
    evaluate->add_option("--embedding-url", embedding_url, "Embeddings base URL for --embedder http");
    evaluate->add_option("--embedding-model", embedding_model, "Embedding model id");
    evaluate->add_option("--embedding-dim", embedding_dim, "Embedding dimension")->check(CLI::Range(1, 1 << 16));
    evaluate->add_option("--parallel", parallel, "Samples evaluated concurrently")->check(CLI::PositiveNumber);
    evaluate->add_option("--alias-map", alias_map, "Skill alias map JSON");
    evaluate->add_option("--timestamp", run_timestamp, "Timestamp recorded in run_manifest.json");
    evaluate->add_option("--min-em", thresholds.em, "Fail (exit 5) when any row's EM % is lower");
    evaluate->add_option("--min-f1", thresholds.f1, "Minimum F1 %");
    evaluate->add_option("--min-bleu", thresholds.bleu, "Minimum BLEU %");
    evaluate->add_option("--min-rouge", thresholds.rouge, "Minimum ROUGE %");
    evaluate->add_option("--min-overall", thresholds.overall, "Minimum Overall %");
    evaluate->add_option("--out", eval_out, "Report directory");
    add_endpoint_flags(evaluate, eval_ep);

    // report
    auto* report = app.add_subcommand("report", "Merge report.json files into one comparison");
    std::vector<std::string> report_inputs;
    std::string report_out = "reports";
    report->add_option("inputs", report_inputs, "report.json files or arrays of percentage rows")
        ->required()
        ->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "Report directory");

    // lora-config
    auto* lora = app.add_subcommand("lora-config", "Write the LoRA training configuration");
    std::string lora_out = "lora_config.json";
    lora->add_option("--base-model", base_model, "base_model_id");
    lora->add_option("--out", lora_out, "Output file");

    auto* schema = app.add_subcommand("schema", "Print the resume record JSON Schema");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            json config;
            try {
                config = json::parse(read_file(config_path));
            } catch (const std::exception& e) {
                throw ConfigError("config " + config_path + ": " + e.what());
            }
            if (!config.is_object()) throw ConfigError("config " + config_path + " must be a JSON object");
            if (auto it = config.find("api_key_env"); it != config.end()) api_key_env = it->get<std::string>();
            for (auto* sub : app.get_subcommands()) apply_config(sub, config);
        }
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::usage);
    } catch (const ConfigError& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ExitCode::config_error);
    } catch (const std::exception& e) {
        spdlog::error("config: {}", e.what());
        return static_cast<int>(ExitCode::config_error);
    }

    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
    const std::string api_key = EndpointConfig::api_key_from_env(api_key_env);

    try {
        if (*ingest) {
            IngestOptions o;
            o.input_dir = ingest_input;
            o.out_dir = ingest_out;
            o.endpoint = ingest_ep.to_config(api_key);
            o.endpoint.model_id = ingest_model;
            o.alias_map = alias_map;
            auto s = cmd_ingest(o);
            std::cout << "parsed " << s.parsed << ", unchanged " << s.skipped << ", failed "
                      << s.failures.size() << "\n";
            if (!s.failures.empty() && s.parsed + s.skipped == 0 &&
                std::all_of(s.failures.begin(), s.failures.end(),
                            [](const IngestFailure& f) { return f.endpoint_error; }))
                return static_cast<int>(ExitCode::endpoint_error);
        } else if (*synth) {
            auto s = cmd_synth({synth_out, profiles, synth_count, seed});
            std::cout << "wrote " << s.generated << " records to " << s.output_path << "\n";
        } else if (*build) {
            BuildOptions o;
            o.out_dir = build_out;
            o.real_dir = build_real;
            o.synthetic_path = build_synthetic;
            o.seed = seed;
            o.ratios = parse_ratios(ratios_text);
            o.stratify = stratify;
            o.alias_map = alias_map;
            o.base_model_id = base_model;
            auto s = cmd_build(o);
            std::cout << "N=" << s.total << " train=" << s.sizes.train << " val=" << s.sizes.val
                      << " test=" << s.sizes.test << " duplicates_removed=" << s.duplicates_removed
                      << "\n";
        } else if (*parse) {
            auto config = parse_ep.to_config(api_key);
            config.model_id = parse_model;
            try {
                config.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            auto result = parse_resume(read_file(parse_input), config, load_alias_map(alias_map));
            auto text = canonical_serialize(result.record) + "\n";
            if (parse_out.empty()) std::cout << text;
            else write_file(parse_out, text);
            if (!result.repairs_applied.empty())
                spdlog::info("repairs applied: {}", fmt::join(result.repairs_applied, ", "));
        } else if (*evaluate) {
            EvaluateOptions o;
            o.dataset_dir = eval_dataset;
            o.out_dir = eval_out;
            const auto defaults = eval_ep.to_config(api_key);
            for (const auto& m : model_flags) o.models.push_back(parse_model_flag(m, defaults));
            o.embedder = embedder;
            o.embedding_dimension = embedding_dim;
            o.embedding_endpoint = defaults;
            if (!embedding_url.empty()) o.embedding_endpoint.base_url = embedding_url;
            o.embedding_endpoint.model_id = embedding_model;
            o.parallelism = parallel;
            o.alias_map = alias_map;
            o.thresholds = thresholds;
            o.timestamp = run_timestamp;
            auto s = cmd_evaluate(o);
            std::cout << compare(s.report.rows).render_text();
            if (!s.unreachable_models.empty()) {
                for (const auto& m : s.unreachable_models) spdlog::error("endpoint for {} failed on every sample", m);
                return static_cast<int>(ExitCode::endpoint_error);
            }
            if (!s.unmet_thresholds.empty()) {
                for (const auto& u : s.unmet_thresholds) spdlog::error("threshold unmet: {}", u);
                return static_cast<int>(ExitCode::threshold_unmet);
            }
        } else if (*report) {
            auto merged = cmd_report(report_inputs, report_out);
            std::cout << compare(merged.rows).render_text() << render_improvements(merged.rows);
        } else if (*lora) {
            auto text = write_lora_config(emit_lora_config(base_model), lora_out);
            std::cout << text;
        } else if (*schema) {
            std::cout << json_schema_document() << "\n";
        }
    } catch (const ConfigError& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ExitCode::config_error);
    } catch (const DataError& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ExitCode::data_error);
    } catch (const SchemaError& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ExitCode::data_error);
    } catch (const EndpointError& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ExitCode::endpoint_error);
    } catch (const ExtractionError& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ExitCode::endpoint_error);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(ExitCode::data_error);
    }
    return static_cast<int>(ExitCode::ok);
}
