#include <synrag/genpipeline.hpp>
#include <synrag/text.hpp>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <thread>

namespace synrag {

namespace {

constexpr std::string_view kAqlTemplate =
    R"(You are an expert in SIEM correlation and threat detection. Your task is to convert a detection description into a QRadar AQL query.

You will receive:
- A Detection specification (YAML format)
- A list of allowed AQL fields, keywords, functions, and database names
- Context from other API call

Use the following strict instructions:
1. Construct an AQL query using only the provided fields, keywords, functions, and databases.
2. Use the correct AQL clause order: SELECT → FROM → WHERE → LAST
3. Use only fields listed in the `fields` array. If a field from the detection rule isn't present, find the closest logical/semantic match or add a `-- TODO` comment.

Threat Detection Logic:
{{detection}}

Field List:
fields = {{fields}}

Keyword List:
keywords = {{keywords}}

Database List:
databases = {{databases}}

Function List:
functions = {{functions}}

Additional Context:
{{context}}

Instruction:
Generate the AQL query now.
)";

constexpr std::string_view kYaralTemplate =
    R"(You are an expert in SIEM correlation and threat detection. Your task is to convert a detection description into a Google SecOps YARA-L 2.0 rule.

You will receive:
- A Detection specification (YAML format)
- A list of allowed YARA-L sections, functions, and UDM field names
- Context from other API call

Use the following strict instructions:
1. Construct a YARA-L 2.0 rule using only the provided sections, functions, and UDM fields.
2. Use the correct YARA-L section order: meta → events → match → outcome → condition
3. Use only fields listed in the `udm_fields` array. If a field from the detection rule isn't present, find the closest logical/semantic match or add a `// TODO` comment.

Threat Detection Logic:
{{detection}}

UDM Field List:
udm_fields = {{udm_fields}}

Section List:
sections = {{sections}}

Function List:
functions = {{functions}}

Additional Context:
{{context}}

Instruction:
Generate the YARA-L rule now.
)";

std::string json_list(const std::vector<std::string>& items) { return nlohmann::json(items).dump(); }

std::string render_detection(const ThreatSpec& spec) {
    std::string out;
    out += "id: " + spec.id + "\n";
    out += "description: " + spec.description + "\n";
    out += "fields to select: " + json_list(spec.select_fields) + "\n";
    out += "source: " + spec.source + "\n";
    out += "logic: " + spec.logic;
    return out;
}

std::string render_context(std::span<const DocumentChunk> context) {
    if (context.empty()) return "N/A";
    std::string out;
    for (std::size_t i = 0; i < context.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += "[" + std::to_string(i + 1) + "] " + context[i].text;
    }
    return out;
}

}  // namespace

std::string_view default_prompt_template(Platform platform) {
    return platform == Platform::qradar ? kAqlTemplate : kYaralTemplate;
}

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tmpl.size() * 2);
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        const std::size_t open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        const std::size_t close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) {
            throw Error(ErrorCode::TemplateError, "", "unterminated placeholder at offset " + std::to_string(open));
        }
        const std::string name(text::trim(tmpl.substr(open + 2, close - open - 2)));
        const auto it = vars.find(name);
        if (it == vars.end()) {
            throw Error(ErrorCode::TemplateError, name, "unknown placeholder");
        }
        out.append(it->second);
        pos = close + 2;
    }
    return out;
}

PromptBundle build_prompt(const ThreatSpec& spec, const SyntaxBundle& bundle, std::span<const DocumentChunk> context,
                          Platform target, std::optional<std::string_view> template_override) {
    if (context.size() > kContextChunks) {
        throw Error(ErrorCode::InvalidArgument, "context",
                    "at most " + std::to_string(kContextChunks) + " chunks, got " + std::to_string(context.size()));
    }
    if (bundle.platform() != target) {
        throw Error(ErrorCode::CatalogMissing, std::string(to_string(target)),
                    "bundle is for " + std::string(to_string(bundle.platform())));
    }

    std::map<std::string, std::string> vars = {
        {"detection", render_detection(spec)},
        {"context", render_context(context)},
    };
    PromptBundle out;
    out.platform = target;
    out.spec_id = spec.id;
    for (const auto& component : bundle.component_names()) {
        vars[component] = json_list(allowed_tokens(bundle, component));
        out.catalog_components_included.push_back(component);
    }
    out.rendered_prompt = render_template(template_override.value_or(default_prompt_template(target)), vars);
    for (const auto& chunk : context) out.context_chunk_ids.push_back(chunk.chunk_id);
    return out;
}

std::string retrieval_text(const ThreatSpec& spec) { return spec.description + "\n" + spec.logic; }

std::vector<DocumentChunk> retrieve_context(const ThreatSpec& spec, const VectorIndex& index,
                                            const EmbeddingProvider& provider, Platform platform, std::size_t k) {
    const std::string query_text = retrieval_text(spec);
    const auto vectors = embed(std::span<const std::string>(&query_text, 1), provider);
    if (vectors.front().dimension() != index.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, provider.id(), "query and index dimensions differ");
    }
    const auto hits = top_k(index, vectors.front(), k, platform);
    std::vector<DocumentChunk> out;
    out.reserve(hits.size());
    for (const auto& hit : hits) out.push_back(index.find(hit.chunk_id)->chunk);
    return out;
}

std::string strip_code_fences(std::string_view completion) {
    const std::string_view trimmed = text::trim(completion);
    if (trimmed.size() < 6 || !trimmed.starts_with("```") || !trimmed.ends_with("```")) {
        return std::string(completion);
    }
    std::string_view inner = trimmed.substr(3, trimmed.size() - 6);
    // A language tag is the rest of the opening line when a newline follows.
    const std::size_t newline = inner.find('\n');
    if (newline != std::string_view::npos) {
        const std::string_view tag = inner.substr(0, newline);
        if (tag.find_first_of(" \t") == std::string_view::npos || text::trim(tag).empty()) {
            inner.remove_prefix(newline + 1);
        }
    }
    return std::string(text::trim(inner));
}

Generation generate(const ThreatSpec& spec, Platform platform, const PipelineDeps& deps) {
    if (deps.index == nullptr || deps.embedder == nullptr || deps.completer == nullptr) {
        throw Error(ErrorCode::InvalidArgument, "deps", "index, embedder and completer are required");
    }
    const auto catalog = deps.catalogs.find(platform);
    if (catalog == deps.catalogs.end()) {
        throw Error(ErrorCode::CatalogMissing, std::string(to_string(platform)));
    }
    const auto context = retrieve_context(spec, *deps.index, *deps.embedder, platform, deps.context_k);

    std::optional<std::string_view> override_template;
    if (const auto it = deps.template_overrides.find(platform); it != deps.template_overrides.end()) {
        override_template = it->second;
    }

    Generation g;
    g.prompt = build_prompt(spec, catalog->second, context, platform, override_template);
    CompletionRequest request{g.prompt.rendered_prompt, deps.decoding, spec.id, platform};
    g.response = deps.completer->complete(request);
    g.completion_raw = g.response.text;

    std::string query = strip_code_fences(g.completion_raw);
    if (text::trim(query).empty()) {
        throw Error(ErrorCode::EmptyCompletion, spec.id);
    }
    g.query.platform = platform;
    g.query.spec_id = spec.id;
    g.query.query_text = std::move(query);
    g.query.provider_id = deps.completer->id();
    g.query.prompt_hash = text::sha256_hex(g.prompt.rendered_prompt);
    g.query.created_at = std::chrono::system_clock::now();
    return g;
}

std::vector<GenerationOutcome> generate_all(std::span<const ThreatSpec> specs, std::span<const Platform> platforms,
                                            const PipelineDeps& deps, std::size_t parallelism) {
    struct Task {
        const ThreatSpec* spec;
        Platform platform;
    };
    std::vector<Task> tasks;
    for (const auto& spec : specs) {
        for (Platform p : platforms) tasks.push_back({&spec, p});
    }
    std::vector<std::optional<GenerationOutcome>> slots(tasks.size());
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& task = tasks[i];
            try {
                slots[i] = generate(*task.spec, task.platform, deps);
            } catch (const Error& e) {
                spdlog::error("generation failed for {}/{}: {}", task.spec->id, to_string(task.platform), e.what());
                slots[i] = GenerationFailure{task.spec->id, task.platform, e.code(), e.what()};
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, tasks.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    std::vector<GenerationOutcome> out;
    out.reserve(slots.size());
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
}

std::string archive_record(const Generation& g) {
    nlohmann::ordered_json record = {
        {"spec_id", g.query.spec_id},
        {"platform", to_string(g.query.platform)},
        {"provider_id", g.query.provider_id},
        {"prompt_hash", g.query.prompt_hash},
        {"context_chunk_ids", g.prompt.context_chunk_ids},
        {"prompt", g.prompt.rendered_prompt},
        {"completion_raw", g.completion_raw},
        {"query_text", g.query.query_text},
        {"timing", {{"latency_ms", g.response.latency.count()}}},
        {"usage",
         {{"prompt_tokens", g.response.prompt_tokens}, {"completion_tokens", g.response.completion_tokens}}},
    };
    return record.dump();
}

std::string failure_record(const GenerationFailure& f) {
    nlohmann::ordered_json record = {
        {"spec_id", f.spec_id},
        {"platform", to_string(f.platform)},
        {"error", to_string(f.code)},
        {"message", f.message},
    };
    return record.dump();
}

std::vector<ArchivedQuery> parse_archive(std::string_view jsonl) {
    std::vector<ArchivedQuery> out;
    std::size_t line_no = 0;
    for (std::size_t start = 0; start < jsonl.size();) {
        std::size_t end = jsonl.find('\n', start);
        if (end == std::string_view::npos) end = jsonl.size();
        const std::string_view line = text::trim(jsonl.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto record = nlohmann::json::parse(line);
            ArchivedQuery q;
            q.spec_id = record.at("spec_id").get<std::string>();
            const auto platform = parse_platform(record.at("platform").get<std::string>());
            if (!platform) throw Error(ErrorCode::IoError, "line " + std::to_string(line_no), "unknown platform");
            q.platform = *platform;
            q.provider_id = record.value("provider_id", "");
            q.query_text = record.at("query_text").get<std::string>();
            out.push_back(std::move(q));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::IoError, "line " + std::to_string(line_no), e.what());
        }
    }
    return out;
}

}  // namespace synrag
