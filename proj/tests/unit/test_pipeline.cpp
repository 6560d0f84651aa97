#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "mock_endpoint.hpp"
#include "resumeft/digest.hpp"
#include "resumeft/pipeline.hpp"

using namespace resumeft;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("resumeft_pipeline_" + name + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& sub = "") const { return (sub.empty() ? path : path / sub).string(); }
};

void put(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

std::string record_for(const std::string& name) {
    return R"({"name":")" + name +
           R"(","email":"","phone":"","skills":["js"],"experience":[],"education":[],"department":"IT"})";
}

// Answers "Name: X" with a record for X; "GARBAGE" gets prose.
class NameClient final : public CompletionClient {
public:
    int calls = 0;
    std::string complete(const std::vector<ChatMessage>& m) override {
        ++calls;
        const auto& text = m.back().content;
        if (text.find("GARBAGE") != std::string::npos) return "no idea";
        return record_for(trim(text.substr(text.find(':') + 1)));
    }
};

// Replies with the canonical reference record of whichever bundle entry has
// this raw text.
class EchoClient final : public CompletionClient {
public:
    explicit EchoClient(std::map<std::string, std::string> answers) : answers_(std::move(answers)) {}
    std::string complete(const std::vector<ChatMessage>& m) override { return answers_.at(m.back().content); }

private:
    std::map<std::string, std::string> answers_;
};

std::map<std::string, std::string> echo_answers(const std::string& dataset_dir) {
    std::map<std::string, std::string> out;
    auto bundle = DatasetBundle::from_json(json::parse(read_file(dataset_dir + "/bundle.json")));
    for (const auto& e : bundle.entries) out[e.raw_text] = canonical_serialize(e.record);
    return out;
}

int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + RESUMEFT_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("DirectoryLock is exclusive and released") {
    TempDir dir("lock");
    {
        DirectoryLock a(dir.path);
        CHECK(fs::exists(dir.path / ".resumeft.lock"));
        CHECK_THROWS_AS(DirectoryLock(dir.path), ConfigError);
    }
    CHECK_FALSE(fs::exists(dir.path / ".resumeft.lock"));
    CHECK_NOTHROW(DirectoryLock(dir.path));
}

TEST_CASE("ingest parses, records failures and skips unchanged files") {
    TempDir dir("ingest");
    put(dir.path / "in/a.txt", "Name: Alice");
    put(dir.path / "in/b.txt", "Name: Bob");
    put(dir.path / "in/c.txt", "GARBAGE");
    put(dir.path / "in/notes.md", "ignored");

    auto shared = std::make_shared<NameClient>();
    IngestOptions o;
    o.input_dir = dir.str("in");
    o.out_dir = dir.str("out");
    o.endpoint.base_url = "http://unused.invalid/v1";
    o.client_factory = [&](const EndpointConfig&) {
        struct Forward final : CompletionClient {
            std::shared_ptr<NameClient> c;
            std::string complete(const std::vector<ChatMessage>& m) override { return c->complete(m); }
        };
        auto f = std::make_unique<Forward>();
        f->c = shared;
        return f;
    };

    auto s = cmd_ingest(o);
    CHECK(s.parsed == 2);
    REQUIRE(s.failures.size() == 1);
    CHECK(s.failures[0].source_id == "c");
    CHECK(s.failures[0].raw_response == "no idea");
    CHECK_FALSE(s.failures[0].endpoint_error);
    CHECK(parse_record(read_file(dir.str("out/parsed/a.json"))).skills == std::vector<std::string>{"JavaScript"});
    const auto failures = json::parse(read_file(dir.str("out/failures.json")));
    CHECK(failures.size() == 1);

    const int calls = shared->calls;
    auto again = cmd_ingest(o);
    CHECK(again.parsed == 0);
    CHECK(again.skipped == 2);
    CHECK(shared->calls == calls + 1);  // only the failed file is retried

    put(dir.path / "in/a.txt", "Name: Alicia");
    auto changed = cmd_ingest(o);
    CHECK(changed.parsed == 1);
    CHECK(parse_record(read_file(dir.str("out/parsed/a.json"))).name == "Alicia");

    auto ingested = read_ingested(dir.str("out"));
    REQUIRE(ingested.size() == 2);
    CHECK(ingested[0].raw_text == "Name: Alicia");
    CHECK(ingested[0].provenance == Provenance::real);
}

TEST_CASE("ingest input problems") {
    TempDir dir("ingest_bad");
    IngestOptions o;
    o.input_dir = dir.str("missing");
    o.out_dir = dir.str("out");
    CHECK_THROWS_AS(cmd_ingest(o), ConfigError);
    fs::create_directories(dir.path / "empty");
    o.input_dir = dir.str("empty");
    CHECK_THROWS_AS(cmd_ingest(o), DataError);
}

TEST_CASE("synth and build from real and synthetic inputs") {
    TempDir dir("build");
    for (int i = 0; i < 8; ++i) put(dir.path / "in" / ("r" + std::to_string(i) + ".txt"), "Name: Real Person " + std::to_string(i));
    IngestOptions io;
    io.input_dir = dir.str("in");
    io.out_dir = dir.str("ingest");
    io.endpoint.base_url = "http://unused.invalid/v1";
    io.client_factory = [](const EndpointConfig&) { return std::make_unique<NameClient>(); };
    REQUIRE(cmd_ingest(io).parsed == 8);

    auto synth = cmd_synth({dir.str("synth"), "", 2, 7});
    CHECK(synth.generated == 2);
    CHECK(read_synthetic_jsonl(synth.output_path).size() == 2);

    BuildOptions b;
    b.out_dir = dir.str("dataset");
    b.real_dir = dir.str("ingest");
    b.synthetic_path = synth.output_path;
    b.seed = 7;
    auto s = cmd_build(b);
    CHECK(s.real == 8);
    CHECK(s.synthetic == 2);
    CHECK(s.total == 10);
    CHECK(s.sizes == SplitSizes{8, 1, 1});
    for (const char* f : {"train.jsonl", "val.jsonl", "test.jsonl", "bundle.json", "lora_config.json", "manifest.json"})
        CHECK(fs::exists(dir.path / "dataset" / f));
    const auto manifest = json::parse(read_file(dir.str("dataset/manifest.json")));
    CHECK(manifest.at("seed") == 7);
    CHECK(manifest.at("files").at("train.jsonl") == sha256_hex(read_file(dir.str("dataset/train.jsonl"))));

    // rebuilding with the same inputs is byte-identical
    const auto before = read_file(dir.str("dataset/bundle.json"));
    cmd_build(b);
    CHECK(read_file(dir.str("dataset/bundle.json")) == before);
}

TEST_CASE("build rejects an empty corpus and bad ratios") {
    TempDir dir("build_bad");
    BuildOptions b;
    b.out_dir = dir.str("dataset");
    CHECK_THROWS_AS(cmd_build(b), DataError);
    b.synthetic_path = cmd_synth({dir.str("synth"), "", 3, 1}).output_path;
    b.ratios = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(cmd_build(b), ConfigError);
}

TEST_CASE("parse_model_flag") {
    EndpointConfig defaults;
    defaults.base_url = "http://default/v1";
    auto m = parse_model_flag("label=Phi-4,model_id=phi4-ft,tag=fine-tuned,params=14,url=http://x/v1", defaults);
    CHECK(m.spec.label == "Phi-4");
    CHECK(m.spec.tag == "fine-tuned");
    CHECK(m.spec.parameter_label == "14");
    CHECK(m.endpoint.model_id == "phi4-ft");
    CHECK(m.endpoint.base_url == "http://x/v1");
    auto bare = parse_model_flag("mistral", defaults);
    CHECK(bare.spec.label == "mistral");
    CHECK(bare.endpoint.model_id == "mistral");
    CHECK(bare.endpoint.base_url == "http://default/v1");
    CHECK(bare.spec.tag == "base");
    CHECK_THROWS_AS(parse_model_flag("label=a,colour=red", defaults), ConfigError);
}

TEST_CASE("evaluate writes reports and checks thresholds") {
    TempDir dir("evaluate");
    auto synth = cmd_synth({dir.str("synth"), "", 40, 3});
    BuildOptions b;
    b.out_dir = dir.str("dataset");
    b.synthetic_path = synth.output_path;
    cmd_build(b);
    const auto answers = echo_answers(dir.str("dataset"));

    EvaluateOptions o;
    o.dataset_dir = dir.str("dataset");
    o.out_dir = dir.str("report");
    EndpointConfig ep;
    ep.base_url = "http://unused.invalid/v1";
    o.models = {parse_model_flag("label=Echo,tag=fine-tuned,params=1", ep),
                parse_model_flag("label=Echo,tag=base,params=1", ep)};
    o.timestamp = "2026-01-01T00:00:00Z";
    o.thresholds.em = 99.0;
    o.client_factory = [&](const EndpointConfig&) { return std::make_unique<EchoClient>(answers); };

    auto s = cmd_evaluate(o);
    REQUIRE(s.report.rows.size() == 2);
    CHECK(s.report.rows[0].em_pct() == 100.0);
    CHECK(s.report.rows[0].samples == 4);
    CHECK(s.unmet_thresholds.empty());
    CHECK(s.unreachable_models.empty());
    for (const char* f : {"report.txt", "report.json", "report.csv", "run_manifest.json"})
        CHECK(fs::exists(dir.path / "report" / f));
    const auto txt = read_file(dir.str("report/report.txt"));
    CHECK(txt.find("Echo fine-tuned vs base") != std::string::npos);
    const auto manifest = json::parse(read_file(dir.str("report/run_manifest.json")));
    CHECK(manifest.at("timestamp") == "2026-01-01T00:00:00Z");
    CHECK(manifest.at("dataset_manifest_sha256") == sha256_hex(read_file(dir.str("dataset/manifest.json"))));
    CHECK(manifest.at("reports").at("report.json") == sha256_hex(read_file(dir.str("report/report.json"))));

    SUBCASE("report re-renders merged inputs") {
        auto merged = cmd_report({dir.str("report/report.json"),
                                  std::string(RESUMEFT_SOURCE_DIR) + "/tests/fixtures/benchmark_rows.json"},
                                 dir.str("merged"));
        CHECK(merged.rows.size() == 10);
        CHECK(read_file(dir.str("merged/report.txt")).find("Phi-4 fine-tuned vs base") != std::string::npos);
    }
    SUBCASE("threshold unmet") {
        o.thresholds.em = std::nullopt;
        o.thresholds.bleu = 100.01;
        CHECK(cmd_evaluate(o).unmet_thresholds.size() == 2);
    }
    SUBCASE("unreachable endpoint") {
        struct Down final : CompletionClient {
            std::string complete(const std::vector<ChatMessage>&) override {
                throw EndpointError(EndpointError::Kind::transport, "down", 1);
            }
        };
        o.models.resize(1);
        o.client_factory = [](const EndpointConfig&) { return std::make_unique<Down>(); };
        auto down = cmd_evaluate(o);
        CHECK(down.unreachable_models == std::vector<std::string>{"Echo"});
        CHECK(down.report.rows[0].em == 0.0);
    }
}

TEST_CASE("evaluate configuration and data errors") {
    TempDir dir("evaluate_bad");
    EvaluateOptions o;
    o.dataset_dir = dir.str("nothing");
    o.out_dir = dir.str("report");
    CHECK_THROWS_AS(cmd_evaluate(o), ConfigError);  // no models
    EndpointConfig ep;
    ep.base_url = "http://unused.invalid/v1";
    o.models = {parse_model_flag("m", ep)};
    CHECK_THROWS_AS(cmd_evaluate(o), ConfigError);  // no bundle

    // five records: the split law leaves val and test empty
    BuildOptions b;
    b.out_dir = dir.str("dataset");
    b.synthetic_path = cmd_synth({dir.str("synth"), "", 5, 1}).output_path;
    cmd_build(b);
    o.dataset_dir = dir.str("dataset");
    CHECK_THROWS_AS(cmd_evaluate(o), DataError);
}

TEST_CASE("CLI exit codes and config file overrides") {
    TempDir dir("cli");
    CHECK(run_cli("") == 1);
    CHECK(run_cli("synth --count 10 --seed 7 --out " + dir.str("synth")) == 0);

    // config file wins over the flag: ratios from the build section, seed from top level
    put(dir.path / "config.json",
        R"({"seed": 11, "build": {"ratios": [0.6, 0.2, 0.2]}})");
    CHECK(run_cli("--config " + dir.str("config.json") + " build --seed 3 --synthetic " +
                  dir.str("synth/synthetic.jsonl") + " --out " + dir.str("dataset")) == 0);
    const auto manifest = json::parse(read_file(dir.str("dataset/manifest.json")));
    CHECK(manifest.at("seed") == 11);
    CHECK(manifest.at("counts").at("train") == 6);
    CHECK(manifest.at("counts").at("test") == 2);

    CHECK(run_cli("build --out " + dir.str("empty_build")) == 3);
    CHECK(run_cli("build --ratios 0.5,0.5 --synthetic " + dir.str("synth/synthetic.jsonl") + " --out " +
                  dir.str("d2")) == 2);
    CHECK(run_cli("evaluate --model m --dataset " + dir.str("missing") + " --out " + dir.str("r")) == 2);
    put(dir.path / "bad_config.json", "{not json");
    CHECK(run_cli("--config " + dir.str("bad_config.json") + " schema") == 2);

    // evaluate against a live mock: every request fails -> exit 4
    testsupport::MockEndpoint down([](const std::string&) { return testsupport::Reply{503, "", ""}; });
    CHECK(run_cli("evaluate --model m --max-retries 0 --endpoint-url " + down.base_url() + " --dataset " +
                  dir.str("dataset") + " --out " + dir.str("r")) == 4);

    // echo mock and the API key from the environment
    const auto answers = echo_answers(dir.str("dataset"));
    testsupport::MockEndpoint echo([&](const std::string& text) {
        return testsupport::Reply{200, answers.at(text), ""};
    });
    CHECK(run_cli("evaluate --model m --endpoint-url " + echo.base_url() + " --dataset " + dir.str("dataset") +
                      " --min-em 99 --out " + dir.str("r2"),
                  "RESUMEFT_API_KEY=abc123") == 0);
    CHECK(echo.last_authorization() == "Bearer abc123");
    CHECK(run_cli("evaluate --model m --endpoint-url " + echo.base_url() + " --dataset " + dir.str("dataset") +
                  " --min-em 100.01 --out " + dir.str("r3")) == 5);

    CHECK(run_cli("lora-config --base-model org/m --out " + dir.str("lora.json")) == 0);
    CHECK(json::parse(read_file(dir.str("lora.json"))).at("r") == 16);
}
