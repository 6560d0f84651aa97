#include "resumeft/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

namespace resumeft {

using json = nlohmann::json;

namespace {

std::string fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

int group_rank(const std::string& tag) {
    if (tag == "fine-tuned") return 0;
    if (tag == "base") return 1;
    return 2;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::ordered_json row_to_json(const ReportRow& r) {
    nlohmann::ordered_json j;
    j["model"] = r.model_label;
    j["parameters"] = r.parameter_label;
    j["tag"] = r.tag;
    j["em"] = r.em;
    j["f1"] = r.f1;
    j["bleu"] = r.bleu;
    j["rouge"] = r.rouge;
    j["overall"] = r.overall;
    j["overall_reported"] = r.overall_reported;
    j["em_pct"] = r.em_pct();
    j["f1_pct"] = r.f1_pct();
    j["bleu_pct"] = r.bleu_pct();
    j["rouge_pct"] = r.rouge_pct();
    if (r.overall_reported) j["overall_pct"] = r.overall_pct();
    else j["overall_pct"] = nullptr;
    j["samples"] = r.samples;
    j["failures"] = r.failures;
    return j;
}

ReportRow row_from_json(const json& j) {
    ReportRow r;
    r.model_label = j.at("model").get<std::string>();
    r.parameter_label = j.at("parameters").get<std::string>();
    r.tag = j.at("tag").get<std::string>();
    r.em = j.at("em").get<double>();
    r.f1 = j.at("f1").get<double>();
    r.bleu = j.at("bleu").get<double>();
    r.rouge = j.at("rouge").get<double>();
    r.overall = j.at("overall").get<double>();
    r.overall_reported = j.value("overall_reported", true);
    r.samples = j.at("samples").get<std::size_t>();
    r.failures = j.at("failures").get<std::size_t>();
    return r;
}

}  // namespace

double round_percent(double value) {
    // Half away from zero; the nudge absorbs binary representation error
    // such as 1.005 being stored as 1.00499999...
    const double scaled = value * 100.0;
    return std::round(scaled + std::copysign(1e-7, scaled)) / 100.0;
}

ReportRow row_from_percentages(std::string label, std::string params, std::string tag, double em,
                               double f1, double bleu, double rouge,
                               std::optional<double> overall) {
    ReportRow r;
    r.model_label = std::move(label);
    r.parameter_label = std::move(params);
    r.tag = std::move(tag);
    r.em = em / 100.0;
    r.f1 = f1 / 100.0;
    r.bleu = bleu / 100.0;
    r.rouge = rouge / 100.0;
    r.overall_reported = overall.has_value();
    r.overall = overall.value_or(0.0) / 100.0;
    return r;
}

ReportRow aggregate(const ModelSpec& model, std::span<const SampleResult> samples) {
    ReportRow row;
    row.model_label = model.label;
    row.parameter_label = model.parameter_label;
    row.tag = model.tag;
    row.samples = samples.size();
    for (const auto& s : samples) {
        row.em += s.score.em;
        row.f1 += s.score.f1_sem;
        row.bleu += s.score.bleu;
        row.rouge += s.score.rouge;
        row.overall += s.score.overall;
        if (s.failed) ++row.failures;
    }
    if (!samples.empty()) {
        const double n = static_cast<double>(samples.size());
        row.em /= n;
        row.f1 /= n;
        row.bleu /= n;
        row.rouge /= n;
        row.overall /= n;
    }
    return row;
}

ModelEvaluation evaluate_model(std::span<const TestSample> test_split, const ModelSpec& model,
                               CompletionClient& client, EmbeddingProvider& embedder,
                               const EvalOptions& options) {
    if (test_split.empty()) throw std::invalid_argument("evaluate_model: empty test split");
    if (options.parallelism < 1) throw std::invalid_argument("evaluate_model: parallelism < 1");

    std::vector<const TestSample*> ordered;
    ordered.reserve(test_split.size());
    for (const auto& s : test_split) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const TestSample* a, const TestSample* b) { return a->source_id < b->source_id; });

    std::vector<SampleResult> results(ordered.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ordered.size()) return;
            const auto& sample = *ordered[i];
            auto& out = results[i];
            out.model_label = model.label;
            out.tag = model.tag;
            out.source_id = sample.source_id;
            try {
                ParseResult parsed;
                try {
                    parsed = parse_resume(sample.raw_text, client, options.aliases);
                } catch (const std::exception& e) {
                    out.failed = true;
                    out.endpoint_error = dynamic_cast<const EndpointError*>(&e) != nullptr;
                    out.error = e.what();
                    spdlog::warn("{}: sample {} failed: {}", model.label, sample.source_id,
                                 e.what());
                    continue;
                }
                out.repairs = std::move(parsed.repairs_applied);
                out.score = score_sample(sample.reference, parsed.record, embedder);
            } catch (...) {
                std::lock_guard lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
                next.store(ordered.size());
                return;
            }
        }
    };

    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(options.parallelism),
                                               ordered.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    if (fatal) std::rethrow_exception(fatal);

    ModelEvaluation eval;
    eval.row = aggregate(model, results);
    eval.samples = std::move(results);
    return eval;
}

std::vector<const SampleResult*> AggregateReport::failures() const {
    std::vector<const SampleResult*> out;
    for (const auto& s : samples)
        if (s.failed) out.push_back(&s);
    return out;
}

nlohmann::ordered_json AggregateReport::to_json() const {
    nlohmann::ordered_json j;
    j["metric_suite"] = kMetricSuiteVersion;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) j["rows"].push_back(row_to_json(r));
    j["comparison"] = rows.empty() ? nlohmann::ordered_json::array() : compare(rows).render_json();
    auto& arr = j["samples"] = nlohmann::ordered_json::array();
    for (const auto& s : samples) {
        nlohmann::ordered_json o;
        o["model"] = s.model_label;
        o["tag"] = s.tag;
        o["source_id"] = s.source_id;
        o["em"] = s.score.em;
        o["f1"] = s.score.f1_sem;
        o["bleu"] = s.score.bleu;
        o["rouge"] = s.score.rouge;
        o["overall"] = s.score.overall;
        o["raw_cosine"] = s.score.raw_cosine;
        o["failed"] = s.failed;
        o["endpoint_error"] = s.endpoint_error;
        o["error"] = s.error;
        o["repairs"] = s.repairs;
        arr.push_back(std::move(o));
    }
    return j;
}

AggregateReport AggregateReport::from_json(const json& j) {
    AggregateReport report;
    for (const auto& r : j.at("rows")) report.rows.push_back(row_from_json(r));
    for (const auto& o : j.at("samples")) {
        SampleResult s;
        s.model_label = o.at("model").get<std::string>();
        s.tag = o.at("tag").get<std::string>();
        s.source_id = o.at("source_id").get<std::string>();
        s.score.em = o.at("em").get<double>();
        s.score.f1_sem = o.at("f1").get<double>();
        s.score.bleu = o.at("bleu").get<double>();
        s.score.rouge = o.at("rouge").get<double>();
        s.score.overall = o.at("overall").get<double>();
        s.score.raw_cosine = o.at("raw_cosine").get<double>();
        s.failed = o.at("failed").get<bool>();
        s.endpoint_error = o.value("endpoint_error", false);
        s.error = o.at("error").get<std::string>();
        s.repairs = o.at("repairs").get<std::vector<std::string>>();
        report.samples.push_back(std::move(s));
    }
    return report;
}

std::string_view column_name(Column c) {
    switch (c) {
        case Column::em: return "EM (%)";
        case Column::f1: return "F1 (%)";
        case Column::bleu: return "BLEU (%)";
        case Column::rouge: return "ROUGE (%)";
        case Column::overall: return "Overall (%)";
    }
    return "";
}

double column_value(const ReportRow& row, Column c) {
    switch (c) {
        case Column::em: return row.em_pct();
        case Column::f1: return row.f1_pct();
        case Column::bleu: return row.bleu_pct();
        case Column::rouge: return row.rouge_pct();
        case Column::overall: return row.overall_pct();
    }
    return 0.0;
}

ComparisonTable compare(std::vector<ReportRow> rows) {
    if (rows.empty()) throw std::invalid_argument("compare: no rows");
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return group_rank(a.tag) < group_rank(b.tag);
    });
    ComparisonTable table;
    table.best.assign(rows.size(), {false, false, false, false, false});
    for (auto c : kColumns) {
        const auto ci = static_cast<std::size_t>(c);
        std::optional<double> best;
        for (const auto& r : rows) {
            if (c == Column::overall && !r.overall_reported) continue;
            const double v = column_value(r, c);
            if (!best || v > *best) best = v;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (c == Column::overall && !rows[i].overall_reported) continue;
            table.best[i][ci] = best && column_value(rows[i], c) == *best;
        }
    }
    table.rows = std::move(rows);
    return table;
}

std::string ComparisonTable::render_text() const {
    std::vector<std::array<std::string, 8>> cells;
    cells.push_back({"Group", "Model", "Parameters", std::string(column_name(Column::em)),
                     std::string(column_name(Column::f1)), std::string(column_name(Column::bleu)),
                     std::string(column_name(Column::rouge)),
                     std::string(column_name(Column::overall))});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::array<std::string, 8> line{r.tag, r.model_label, r.parameter_label};
        for (auto c : kColumns) {
            const auto ci = static_cast<std::size_t>(c);
            std::string v = (c == Column::overall && !r.overall_reported)
                                ? "n/a"
                                : fixed2(column_value(r, c));
            line[3 + ci] = v + (best[i][ci] ? " *" : "");
        }
        cells.push_back(std::move(line));
    }
    std::array<std::size_t, 8> width{};
    for (const auto& line : cells)
        for (std::size_t k = 0; k < line.size(); ++k) width[k] = std::max(width[k], line[k].size());

    std::ostringstream os;
    auto rule = [&] {
        for (std::size_t k = 0; k < width.size(); ++k) os << (k ? "-+-" : "") << std::string(width[k], '-');
        os << '\n';
    };
    for (std::size_t li = 0; li < cells.size(); ++li) {
        if (li == 1 || (li > 1 && cells[li][0] != cells[li - 1][0])) rule();
        for (std::size_t k = 0; k < width.size(); ++k) {
            if (k) os << " | ";
            os << std::left << std::setw(static_cast<int>(width[k])) << cells[li][k];
        }
        os << '\n';
    }
    os << "* highest value in column\n";
    return os.str();
}

std::string ComparisonTable::render_csv() const {
    std::ostringstream os;
    os << "group,model,parameters,em_pct,f1_pct,bleu_pct,rouge_pct,overall_pct,"
          "best_em,best_f1,best_bleu,best_rouge,best_overall\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << csv_field(r.tag) << ',' << csv_field(r.model_label) << ','
           << csv_field(r.parameter_label);
        for (auto c : kColumns) {
            os << ',';
            if (c == Column::overall && !r.overall_reported) continue;
            os << fixed2(column_value(r, c));
        }
        for (bool b : best[i]) os << ',' << (b ? 1 : 0);
        os << '\n';
    }
    return os.str();
}

nlohmann::ordered_json ComparisonTable::render_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto j = row_to_json(rows[i]);
        nlohmann::ordered_json flags;
        flags["em"] = best[i][0];
        flags["f1"] = best[i][1];
        flags["bleu"] = best[i][2];
        flags["rouge"] = best[i][3];
        flags["overall"] = best[i][4];
        j["best"] = std::move(flags);
        arr.push_back(std::move(j));
    }
    return arr;
}

Improvement improvement(const ReportRow& fine_tuned, const ReportRow& base) {
    if (fine_tuned.model_label != base.model_label)
        throw std::invalid_argument("improvement: model families differ ('" +
                                    fine_tuned.model_label + "' vs '" + base.model_label + "')");
    Improvement out;
    for (auto c : kColumns) {
        const auto ci = static_cast<std::size_t>(c);
        if (c == Column::overall && !(fine_tuned.overall_reported && base.overall_reported))
            continue;
        const double b = column_value(base, c);
        if (b == 0.0) continue;
        out.by_column[ci] = round_percent(100.0 * (column_value(fine_tuned, c) - b) / b);
    }
    return out;
}

}  // namespace resumeft
