#include <synrag/commands.hpp>
#include <synrag/error.hpp>
#include <synrag/evalharness.hpp>
#include <synrag/genpipeline.hpp>
#include <synrag/ingest.hpp>
#include <synrag/syntax.hpp>
#include <synrag/text.hpp>
#include <synrag/threatspec.hpp>
#include <synrag/validators.hpp>
#include <synrag/vectorstore.hpp>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>

namespace synrag {

namespace fs = std::filesystem;

namespace {

http::RetryPolicy retry_policy(const ProviderSettings& p) {
    http::RetryPolicy policy;
    policy.retries = p.retries;
    policy.timeout = std::chrono::milliseconds(static_cast<long>(p.timeout_s * 1000.0));
    return policy;
}

bool is_provider_error(ErrorCode code) {
    return code == ErrorCode::ProviderUnavailable || code == ErrorCode::ProviderTimeout ||
           code == ErrorCode::DimensionMismatch;
}

int config_error(std::ostream& out, const std::string& message) {
    out << "error: " << message << "\n";
    return kExitConfigError;
}

std::optional<int> require_path(std::ostream& out, const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) return config_error(out, fmt::format("{} not found: {}", what, path.string()));
    return std::nullopt;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

std::map<Platform, SyntaxBundle> load_catalogs(const RunConfig& config, const std::vector<Platform>& platforms) {
    std::map<Platform, SyntaxBundle> out;
    for (Platform p : platforms) {
        const auto it = config.catalogs.find(p);
        if (it == config.catalogs.end()) {
            throw Error(ErrorCode::ConfigError, std::string(to_string(p)), "no catalog configured");
        }
        out.emplace(p, load_catalog(config.resolve(it->second), p));
    }
    return out;
}

}  // namespace

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const RunConfig& config) {
    if (config.embedding.kind == "stub") {
        return std::make_unique<StubEmbeddingProvider>(config.embedding_dimension);
    }
    RemoteEmbeddingConfig rc;
    if (!config.embedding.provider_id.empty()) rc.provider_id = config.embedding.provider_id;
    rc.endpoint = config.embedding.endpoint;
    rc.model = config.embedding.model;
    rc.api_key_env = config.embedding.api_key_env;
    rc.dimension = config.embedding_dimension;
    rc.retry = retry_policy(config.embedding);
    return std::make_unique<RemoteEmbeddingProvider>(std::move(rc));
}

std::unique_ptr<CompletionProvider> make_completion_provider(const RunConfig& config) {
    if (config.completion.kind == "stub") {
        StubCompletionConfig sc;
        if (!config.completion.provider_id.empty()) sc.provider_id = config.completion.provider_id;
        if (!config.stub_replies.empty()) sc.replies_dir = config.resolve(config.stub_replies);
        sc.fence = config.stub_fence;
        sc.unavailable = config.stub_unavailable;
        return std::make_unique<StubCompletionProvider>(std::move(sc));
    }
    RemoteCompletionConfig rc;
    if (!config.completion.provider_id.empty()) rc.provider_id = config.completion.provider_id;
    rc.endpoint = config.completion.endpoint;
    rc.model = config.completion.model;
    rc.api_key_env = config.completion.api_key_env;
    rc.retry = retry_policy(config.completion);
    return std::make_unique<RemoteCompletionProvider>(std::move(rc));
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& config, std::ostream& out) {
    for (Platform p : config.platforms) {
        const auto it = config.corpus_roots.find(p);
        if (it == config.corpus_roots.end()) {
            return config_error(out, fmt::format("no corpus root configured for {}", to_string(p)));
        }
        const auto root = config.resolve(it->second);
        if (!fs::is_directory(root)) {
            return config_error(out, fmt::format("corpus directory not found: {}", root.string()));
        }
    }

    const ChunkParams params{config.chunk_size, config.chunk_overlap};
    if (params.overlap == 0 || params.overlap >= params.chunk_size) {
        return config_error(out, "index.chunk_overlap must be in (0, chunk_size)");
    }

    auto embedder = make_embedding_provider(config);
    VectorIndex index(embedder->dimension(), embedder->id());
    std::size_t total = 0;
    try {
        for (Platform p : config.platforms) {
            const auto corpus = load_corpus_dir(config.resolve(config.corpus_roots.at(p)), p);
            std::vector<DocumentChunk> chunks;
            for (const auto& doc : corpus.documents) {
                auto doc_chunks = chunk_document(doc, params);
                std::move(doc_chunks.begin(), doc_chunks.end(), std::back_inserter(chunks));
            }
            constexpr std::size_t kBatch = 64;
            for (std::size_t start = 0; start < chunks.size(); start += kBatch) {
                const std::size_t stop = std::min(chunks.size(), start + kBatch);
                std::vector<std::string> texts;
                for (std::size_t i = start; i < stop; ++i) texts.push_back(chunks[i].text);
                auto vectors = embed(texts, *embedder);
                for (std::size_t i = start; i < stop; ++i) {
                    index.add(std::move(chunks[i]), std::move(vectors[i - start]));
                }
            }
            out << fmt::format("{}: {} documents, {} chunks ({} skipped files)\n", to_string(p),
                               corpus.documents.size(), chunks.size(), corpus.issues.size());
            total += chunks.size();
        }
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return is_provider_error(e.code()) ? kExitProviderError : kExitConfigError;
    }

    const auto path = config.resolved_index_path();
    persist(index, path);
    out << fmt::format("total: {} vectorized chunks -> {}\n", total, path.generic_string());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

int cmd_generate(const RunConfig& config, const fs::path& specs_dir, std::optional<Platform> only_platform,
                 std::ostream& out) {
    std::vector<Platform> platforms = config.platforms;
    if (only_platform) {
        if (std::find(platforms.begin(), platforms.end(), *only_platform) == platforms.end()) {
            return config_error(out, fmt::format("platform {} is not enabled in the config", to_string(*only_platform)));
        }
        platforms = {*only_platform};
    }
    const auto index_path = config.resolved_index_path();
    if (auto rc = require_path(out, index_path, "index file")) return *rc;
    if (!fs::is_directory(specs_dir)) {
        return config_error(out, fmt::format("spec directory not found: {}", specs_dir.string()));
    }

    std::unique_ptr<EmbeddingProvider> embedder;
    std::unique_ptr<CompletionProvider> completer;
    PipelineDeps deps;
    SpecDirectory specs;
    std::optional<IndexLoad> loaded;
    try {
        deps.catalogs = load_catalogs(config, platforms);
        for (const auto& [p, path] : config.prompt_templates) {
            deps.template_overrides[p] = text::read_file(config.resolve(path));
        }
        embedder = make_embedding_provider(config);
        completer = make_completion_provider(config);
        loaded = load(index_path, embedder->id());
        specs = load_spec_dir(specs_dir);
    } catch (const Error& e) {
        return config_error(out, e.what());
    }
    for (const auto& w : loaded->warnings) out << "warning: " << w << "\n";
    for (const auto& bad : specs.errors) {
        out << fmt::format("warning: skipping {}: {}\n", bad.path.generic_string(), bad.error.what());
    }

    deps.index = &loaded->index;
    deps.embedder = embedder.get();
    deps.completer = completer.get();
    deps.decoding = config.decoding;

    const auto outcomes = generate_all(specs.specs, platforms, deps, config.parallelism);
    std::vector<std::string> records;
    std::vector<std::string> failures;
    bool provider_failure = false;
    for (const auto& outcome : outcomes) {
        if (const auto* g = std::get_if<Generation>(&outcome)) {
            records.push_back(archive_record(*g));
        } else {
            const auto& f = std::get<GenerationFailure>(outcome);
            provider_failure = provider_failure || is_provider_error(f.code);
            failures.push_back(failure_record(f));
            out << fmt::format("failed {}/{}: {}\n", f.spec_id, to_string(f.platform), f.message);
        }
    }
    const auto dir = config.resolve(config.output_dir);
    text::write_file(dir / "generations.jsonl", join_lines(records));
    text::write_file(dir / "generation_failures.jsonl", join_lines(failures));
    out << fmt::format("generated {} of {} queries ({} failed) -> {}\n", records.size(), outcomes.size(),
                       failures.size(), (dir / "generations.jsonl").generic_string());

    if (!outcomes.empty() && records.empty()) {
        return provider_failure ? kExitProviderError : kExitValidationFailed;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& config, const fs::path& archive, std::ostream& out) {
    if (auto rc = require_path(out, archive, "archive")) return *rc;
    std::vector<ArchivedQuery> queries;
    std::map<Platform, SyntaxBundle> catalogs;
    try {
        queries = parse_archive(text::read_file(archive));
        std::vector<Platform> needed;
        for (const auto& q : queries) {
            if (std::find(needed.begin(), needed.end(), q.platform) == needed.end()) needed.push_back(q.platform);
        }
        catalogs = load_catalogs(config, needed);
    } catch (const Error& e) {
        return config_error(out, e.what());
    }

    std::vector<std::string> lines;
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& q : queries) {
        const auto report = validate_query(q.query_text, catalogs.at(q.platform), q.spec_id);
        ++counts[static_cast<int>(report.verdict)];
        lines.push_back(to_json(report));
        out << format_report(report, q.query_text);
    }
    const auto path = config.resolve(config.output_dir) / "validation.jsonl";
    text::write_file(path, join_lines(lines));
    out << fmt::format("{} queries: {} valid, {} valid_with_warnings, {} invalid -> {}\n", queries.size(), counts[0],
                       counts[1], counts[2], path.generic_string());
    return counts[2] > 0 ? kExitValidationFailed : kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

int cmd_evaluate(const RunConfig& config, const EvaluateOptions& options, std::ostream& out) {
    std::vector<EvalRecord> records;
    try {
        if (options.records) {
            if (auto rc = require_path(out, *options.records, "records file")) return *rc;
            records = parse_eval_records(text::read_file(*options.records));
        } else if (options.inputs) {
            if (auto rc = require_path(out, *options.inputs, "evaluation input")) return *rc;
            for (const auto& input : parse_eval_inputs(text::read_file(*options.inputs))) {
                records.push_back(score(input));
            }
        } else {
            if (options.archives.empty()) return config_error(out, "evaluate needs --archive, --input or --records");
            if (!fs::is_directory(options.references_dir)) {
                return config_error(out, fmt::format("reference directory not found: {}",
                                                     options.references_dir.string()));
            }
            for (std::size_t run = 0; run < options.archives.size(); ++run) {
                const auto& archive = options.archives[run];
                if (auto rc = require_path(out, archive, "archive")) return *rc;
                for (const auto& q : parse_archive(text::read_file(archive))) {
                    const auto ref_path = options.references_dir / std::string(to_string(q.platform)) /
                                          (q.spec_id + std::string(query_extension(q.platform)));
                    if (!fs::is_regular_file(ref_path)) {
                        out << fmt::format("warning: no reference for {}/{}; excluded from means\n", q.spec_id,
                                           to_string(q.platform));
                        continue;
                    }
                    EvalInput input;
                    input.model_id = options.model_id.empty() ? q.provider_id : options.model_id;
                    input.run_index = static_cast<int>(run + 1);
                    input.spec_id = q.spec_id;
                    input.platform = q.platform;
                    input.candidate_query = q.query_text;
                    input.reference_query = text::read_file(ref_path);
                    records.push_back(score(input));
                }
            }
        }
    } catch (const Error& e) {
        return config_error(out, e.what());
    }
    if (records.empty()) {
        out << "error: no scorable records\n";
        return kExitValidationFailed;
    }

    std::vector<RunSummary> summaries;
    try {
        summaries = summarize(records);
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return kExitValidationFailed;
    }

    std::vector<std::string> lines;
    for (const auto& r : records) lines.push_back(to_json(r));
    const auto dir = config.resolve(config.output_dir);
    const auto markdown = render_markdown(summaries);
    text::write_file(dir / "eval_records.jsonl", join_lines(lines));
    text::write_file(dir / "eval_table.md", markdown);
    text::write_file(dir / "eval_table.csv", render_csv(summaries));
    out << markdown;
    return kExitOk;
}

}  // namespace synrag
