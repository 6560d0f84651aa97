#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "resumeft/dataset.hpp"
#include "resumeft/embedding.hpp"
#include "resumeft/evaluator.hpp"
#include "resumeft/gateway.hpp"
#include "resumeft/metrics.hpp"
#include "resumeft/normalize.hpp"
#include "resumeft/pipeline.hpp"
#include "resumeft/schema.hpp"

namespace py = pybind11;
using namespace resumeft;

namespace {

// Python objects cross the boundary as JSON text through the stdlib module.
nlohmann::json from_py(const py::handle& obj) {
    const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return nlohmann::json::parse(text);
}

py::object to_py(const nlohmann::ordered_json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::object to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

ResumeRecord record_arg(const py::handle& obj) {
    if (py::isinstance<py::str>(obj)) return parse_record(obj.cast<std::string>());
    return record_from_json(from_py(obj));
}

py::dict sample_dict(const SampleScore& s) {
    py::dict d;
    d["em"] = s.em;
    d["f1"] = s.f1_sem;
    d["bleu"] = s.bleu;
    d["rouge"] = s.rouge;
    d["overall"] = s.overall;
    return d;
}

py::dict report_dict(const NormalizationReport& r) {
    py::dict d;
    d["dates_rewritten"] = r.dates_rewritten;
    d["skills_unified"] = r.skills_unified;
    d["placeholders_inserted"] = r.placeholders_inserted;
    d["unparseable_dates"] = r.unparseable_dates;
    return d;
}

SplitRatios ratios_arg(const std::tuple<double, double, double>& t) {
    return {std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

ReportRow row_arg(const py::dict& d) {
    auto get = [&](const char* key) { return d[key].cast<double>(); };
    std::optional<double> overall;
    if (d.contains("overall") && !d["overall"].is_none()) overall = get("overall");
    return row_from_percentages(d["model"].cast<std::string>(),
                                d.contains("parameters") ? d["parameters"].cast<std::string>() : "",
                                d["tag"].cast<std::string>(), get("em"), get("f1"), get("bleu"),
                                get("rouge"), overall);
}

}  // namespace

PYBIND11_MODULE(resumeft, m) {
    m.doc() = "Resume parsing dataset, metric and evaluation toolkit";
    m.attr("__version__") = std::string(kToolVersion);

    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);
    py::register_exception<GatewayError>(m, "GatewayError", PyExc_RuntimeError);

    // ---- schema / normalize
    m.def("validate", [](const py::object& doc) {
        std::vector<std::string> out;
        for (const auto& v : validate(from_py(doc))) out.push_back(to_string(v));
        return out;
    }, py::arg("document"), "Schema violations of a record document, empty when valid.");

    m.def("canonical_serialize", [](const py::object& rec) { return canonical_serialize(record_arg(rec)); },
          py::arg("record"));

    m.def("normalize_date", &normalize_date, py::arg("raw"));

    m.def("normalize_record", [](const py::object& rec, const std::string& alias_map) {
        auto [out, report] = normalize_record(record_arg(rec), load_alias_map(alias_map));
        return py::make_tuple(to_py(to_json(out)), report_dict(report));
    }, py::arg("record"), py::arg("alias_map") = "",
       "Returns (normalized record, rewrite counts). alias_map is a JSON file path.");

    m.def("flatten", [](const py::object& rec) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [k, v] : flatten(record_arg(rec)).pairs) out.emplace_back(k, v);
        return out;
    }, py::arg("record"));

    m.def("parse_instruction", [] { return std::string(parse_instruction()); });

    // ---- metrics
    m.def("tokenize", [](const std::string& s) { return tokenize(s); }, py::arg("text"));
    m.def("levenshtein_ratio", [](const std::string& a, const std::string& b) { return levenshtein_ratio(a, b); },
          py::arg("a"), py::arg("b"));
    m.def("bleu", [](const std::string& ref, const std::string& hyp) {
        return bleu4_smoothed(tokenize(ref), tokenize(hyp));
    }, py::arg("reference"), py::arg("hypothesis"));
    m.def("rouge", [](const std::string& ref, const std::string& hyp) {
        const auto s = rouge_scores(tokenize(ref), tokenize(hyp));
        py::dict d;
        d["rouge1"] = s.rouge1;
        d["rouge2"] = s.rouge2;
        d["rougeL"] = s.rougeL;
        d["combined"] = rouge_combined(tokenize(ref), tokenize(hyp));
        return d;
    }, py::arg("reference"), py::arg("hypothesis"));
    m.def("exact_match", [](const py::object& ref, const py::object& pred) {
        return exact_match(record_arg(ref), record_arg(pred));
    }, py::arg("reference"), py::arg("predicted"));
    m.def("score", [](const py::object& ref, const py::object& pred) {
        OfflineEmbedder embedder;
        return sample_dict(score_sample(record_arg(ref), record_arg(pred), embedder));
    }, py::arg("reference"), py::arg("predicted"), "Per-sample scores in [0, 1] with the offline embedder.");

    // ---- dataset
    m.def("split_sizes", [](std::size_t n, const std::tuple<double, double, double>& ratios) {
        const auto r = ratios_arg(ratios);
        r.validate();
        const auto s = split_sizes(n, r);
        return py::make_tuple(s.train, s.val, s.test);
    }, py::arg("n"), py::arg("ratios") = std::make_tuple(0.8, 0.1, 0.1));

    m.def("lora_config", [](const std::string& base_model) {
        return to_py(emit_lora_config(base_model).to_json());
    }, py::arg("base_model_id"));
    m.def("write_lora_config", [](const std::string& base_model, const std::string& path) {
        return write_lora_config(emit_lora_config(base_model), path);
    }, py::arg("base_model_id"), py::arg("path"));

    // ---- pipeline commands
    m.def("synth", [](const std::string& out_dir, std::size_t count, std::uint64_t seed,
                      const std::string& profiles_dir) {
        const auto s = cmd_synth({out_dir, profiles_dir, count, seed});
        return py::make_tuple(s.generated, s.output_path);
    }, py::arg("out_dir"), py::arg("count") = 100, py::arg("seed") = 0, py::arg("profiles_dir") = "");

    m.def("build", [](const std::string& out_dir, const std::string& synthetic_path,
                      const std::string& real_dir, std::uint64_t seed,
                      const std::tuple<double, double, double>& ratios, const std::string& base_model,
                      const std::string& alias_map) {
        BuildOptions o;
        o.out_dir = out_dir;
        o.synthetic_path = synthetic_path;
        o.real_dir = real_dir;
        o.seed = seed;
        o.ratios = ratios_arg(ratios);
        o.base_model_id = base_model;
        o.alias_map = alias_map;
        const auto s = cmd_build(o);
        py::dict d;
        d["real"] = s.real;
        d["synthetic"] = s.synthetic;
        d["total"] = s.total;
        d["duplicates_removed"] = s.duplicates_removed;
        d["train"] = s.sizes.train;
        d["val"] = s.sizes.val;
        d["test"] = s.sizes.test;
        return d;
    }, py::arg("out_dir"), py::arg("synthetic_path") = "", py::arg("real_dir") = "", py::arg("seed") = 42,
       py::arg("ratios") = std::make_tuple(0.8, 0.1, 0.1), py::arg("base_model_id") = "base-model",
       py::arg("alias_map") = "",
       "Merges, normalizes and splits; writes instruction JSONL, bundle and LoRA config.");

    m.def("evaluate", [](const std::string& dataset_dir, const std::string& out_dir,
                         const std::vector<std::string>& models, const std::string& endpoint_url,
                         const std::string& api_key, int parallelism, int max_retries) {
        EndpointConfig defaults;
        defaults.base_url = endpoint_url;
        defaults.api_key = api_key;
        defaults.max_retries = max_retries;
        EvaluateOptions o;
        o.dataset_dir = dataset_dir;
        o.out_dir = out_dir;
        o.parallelism = parallelism;
        for (const auto& flag : models) o.models.push_back(parse_model_flag(flag, defaults));
        EvaluateSummary s;
        {
            py::gil_scoped_release release;
            s = cmd_evaluate(o);
        }
        return to_py(s.report.to_json());
    }, py::arg("dataset_dir"), py::arg("out_dir"), py::arg("models"), py::arg("endpoint_url") = "",
       py::arg("api_key") = "", py::arg("parallelism") = 4, py::arg("max_retries") = 2,
       "models use the CLI --model syntax, e.g. 'label=X,model_id=Y,tag=fine-tuned'.");

    m.def("report", [](const std::vector<std::string>& inputs, const std::string& out_dir) {
        return to_py(cmd_report(inputs, out_dir).to_json());
    }, py::arg("inputs"), py::arg("out_dir"));

    m.def("improvement", [](const py::dict& fine_tuned, const py::dict& base) {
        const auto imp = improvement(row_arg(fine_tuned), row_arg(base));
        py::dict d;
        const char* keys[] = {"em", "f1", "bleu", "rouge", "overall"};
        for (auto c : kColumns) {
            const auto v = imp[c];
            d[keys[static_cast<int>(c)]] = v ? py::object(py::float_(*v)) : py::none();
        }
        return d;
    }, py::arg("fine_tuned"), py::arg("base"),
       "Rows are dicts of percentages: model, tag, em, f1, bleu, rouge[, overall].");
}
