#include <synrag/error.hpp>
#include <synrag/evalharness.hpp>
#include <synrag/metrics.hpp>
#include <synrag/text.hpp>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace synrag {

EvalRecord score(const EvalInput& input) {
    const auto candidate = metrics::tokenize_for_metrics(input.candidate_query);
    const auto reference = metrics::tokenize_for_metrics(input.reference_query);
    if (reference.empty()) {
        throw Error(ErrorCode::EmptyReference, input.spec_id);
    }
    EvalRecord record{input.model_id, input.run_index, input.spec_id, input.platform, 0.0, 0.0};
    if (!candidate.empty()) {
        record.bleu = metrics::bleu(candidate, reference);
        record.rouge_l = metrics::rouge_l(candidate, reference);
    }
    return record;
}

std::vector<RunSummary> summarize(std::span<const EvalRecord> records) {
    if (records.empty()) {
        throw Error(ErrorCode::InvalidArgument, "records", "nothing to summarize");
    }
    using Key = std::pair<std::string, Platform>;
    struct RunAcc {
        std::set<Key> keys;
        double bleu = 0.0;
        double rouge_l = 0.0;
    };
    std::vector<std::string> model_order;
    std::map<std::string, std::map<int, RunAcc>> by_model;

    for (const auto& r : records) {
        if (r.run_index < 1) {
            throw Error(ErrorCode::InvalidArgument, r.model_id, "run_index must be >= 1");
        }
        if (!by_model.contains(r.model_id)) model_order.push_back(r.model_id);
        auto& run = by_model[r.model_id][r.run_index];
        if (!run.keys.insert({r.spec_id, r.platform}).second) {
            throw Error(ErrorCode::UnbalancedRuns, r.model_id,
                        fmt::format("run {} scores {}/{} twice", r.run_index, r.spec_id, to_string(r.platform)));
        }
        run.bleu += r.bleu;
        run.rouge_l += r.rouge_l;
    }

    std::vector<RunSummary> out;
    for (const auto& model : model_order) {
        const auto& runs = by_model.at(model);
        const auto& reference_keys = runs.begin()->second.keys;
        RunSummary s;
        s.model_id = model;
        for (const auto& [index, run] : runs) {
            if (run.keys != reference_keys) {
                throw Error(ErrorCode::UnbalancedRuns, model,
                            fmt::format("run {} covers a different spec set than run {}", index,
                                        runs.begin()->first));
            }
            const auto n = static_cast<double>(run.keys.size());
            s.run_indices.push_back(index);
            s.run_bleu.push_back(run.bleu / n);
            s.run_rouge_l.push_back(run.rouge_l / n);
        }
        const auto runs_n = static_cast<double>(s.run_indices.size());
        for (std::size_t i = 0; i < s.run_indices.size(); ++i) {
            s.average_bleu += s.run_bleu[i];
            s.average_rouge_l += s.run_rouge_l[i];
        }
        s.average_bleu /= runs_n;
        s.average_rouge_l /= runs_n;
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

std::vector<int> all_run_indices(std::span<const RunSummary> summaries) {
    std::set<int> runs;
    for (const auto& s : summaries) runs.insert(s.run_indices.begin(), s.run_indices.end());
    return {runs.begin(), runs.end()};
}

// Cells for one row: per-run pairs aligned to `columns` (blank when the
// model lacks that run), then the average pair.
std::vector<std::string> row_cells(const RunSummary& s, const std::vector<int>& columns) {
    std::vector<std::string> cells;
    for (int run : columns) {
        const auto it = std::find(s.run_indices.begin(), s.run_indices.end(), run);
        if (it == s.run_indices.end()) {
            cells.emplace_back();
            cells.emplace_back();
            continue;
        }
        const auto i = static_cast<std::size_t>(it - s.run_indices.begin());
        cells.push_back(fmt::format("{:.4f}", s.run_bleu[i]));
        cells.push_back(fmt::format("{:.4f}", s.run_rouge_l[i]));
    }
    cells.push_back(fmt::format("{:.4f}", s.average_bleu));
    cells.push_back(fmt::format("{:.4f}", s.average_rouge_l));
    return cells;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

std::string render_markdown(std::span<const RunSummary> summaries) {
    const auto columns = all_run_indices(summaries);
    std::string out = "| Model |";
    std::string rule = "|---|";
    for (int run : columns) {
        out += fmt::format(" Run {} BLEU | Run {} ROUGE-L |", run, run);
        rule += "---:|---:|";
    }
    out += " Average BLEU | Average ROUGE-L |\n";
    rule += "---:|---:|\n";
    out += rule;
    for (const auto& s : summaries) {
        std::string model = s.model_id;
        for (std::size_t pos = 0; (pos = model.find('|', pos)) != std::string::npos; pos += 2) {
            model.replace(pos, 1, "\\|");
        }
        out += "| " + model + " |";
        for (const auto& cell : row_cells(s, columns)) out += " " + cell + " |";
        out += "\n";
    }
    return out;
}

std::string render_csv(std::span<const RunSummary> summaries) {
    const auto columns = all_run_indices(summaries);
    std::string out = "model";
    for (int run : columns) out += fmt::format(",run{}_bleu,run{}_rouge_l", run, run);
    out += ",average_bleu,average_rouge_l\n";
    for (const auto& s : summaries) {
        out += csv_escape(s.model_id);
        for (const auto& cell : row_cells(s, columns)) out += "," + cell;
        out += "\n";
    }
    return out;
}

std::string to_json(const EvalRecord& r) {
    nlohmann::ordered_json j = {{"model_id", r.model_id}, {"run_index", r.run_index},
                                {"spec_id", r.spec_id},   {"platform", to_string(r.platform)},
                                {"bleu", r.bleu},         {"rouge_l", r.rouge_l}};
    return j.dump();
}

namespace {

template <typename Fn>
void for_each_json_line(std::string_view jsonl, Fn&& fn) {
    std::size_t line_no = 0;
    for (std::size_t start = 0; start < jsonl.size();) {
        std::size_t end = jsonl.find('\n', start);
        if (end == std::string_view::npos) end = jsonl.size();
        const auto line = text::trim(jsonl.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        try {
            fn(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::IoError, "line " + std::to_string(line_no), e.what());
        } catch (const Error& e) {
            throw Error(ErrorCode::IoError, "line " + std::to_string(line_no), e.what());
        }
    }
}

Platform platform_field(const nlohmann::json& j) {
    const auto p = parse_platform(j.at("platform").get<std::string>());
    if (!p) throw Error(ErrorCode::InvalidArgument, "platform", "unknown platform");
    return *p;
}

}  // namespace

std::vector<EvalInput> parse_eval_inputs(std::string_view jsonl) {
    std::vector<EvalInput> out;
    for_each_json_line(jsonl, [&](const nlohmann::json& j) {
        out.push_back({j.at("model_id").get<std::string>(), j.at("run_index").get<int>(),
                       j.at("spec_id").get<std::string>(), platform_field(j),
                       j.at("candidate_query").get<std::string>(), j.at("reference_query").get<std::string>()});
    });
    return out;
}

std::vector<EvalRecord> parse_eval_records(std::string_view jsonl) {
    std::vector<EvalRecord> out;
    for_each_json_line(jsonl, [&](const nlohmann::json& j) {
        out.push_back({j.at("model_id").get<std::string>(), j.at("run_index").get<int>(),
                       j.at("spec_id").get<std::string>(), platform_field(j), j.at("bleu").get<double>(),
                       j.at("rouge_l").get<double>()});
    });
    return out;
}

}  // namespace synrag
