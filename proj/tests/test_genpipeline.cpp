#include "test_util.hpp"

#include <synrag/genpipeline.hpp>
#include <synrag/text.hpp>

#include <nlohmann/json.hpp>

using namespace synrag;

namespace {

struct Fixture {
    SyntaxBundle aql = load_catalog(testutil::data_dir() / "catalogs" / "qradar_aql.json", Platform::qradar);
    SyntaxBundle yaral = load_catalog(testutil::data_dir() / "catalogs" / "secops_yaral.json", Platform::secops);
    StubEmbeddingProvider embedder{32};
    VectorIndex index{32, "stub-v1"};
    ThreatSpec spec = parse_spec(
        "description: Failed logins\nfields: [sourceip, username]\nsource: auth logs\nlogic: more than 10 failures\n",
        "brute");

    Fixture() {
        const std::vector<std::pair<Platform, std::string>> docs = {
            {Platform::qradar, "failed logins are counted with COUNT and GROUP BY username"},
            {Platform::qradar, "use LAST 10 MINUTES for short windows"},
            {Platform::secops, "USER_LOGIN events with security_result.action BLOCK are failures"},
            {Platform::secops, "match on $user over 10m"}};
        for (std::size_t i = 0; i < docs.size(); ++i) {
            DocumentChunk c;
            c.chunk_id = "doc" + std::to_string(i) + ":00000";
            c.doc_id = "doc" + std::to_string(i);
            c.origin = docs[i].first;
            c.text = docs[i].second;
            index.add(c, embed(std::vector<std::string>{c.text}, embedder)[0]);
        }
    }

    PipelineDeps deps(const CompletionProvider& completer) const {
        PipelineDeps d;
        d.index = &index;
        d.embedder = &embedder;
        d.completer = &completer;
        d.catalogs.emplace(Platform::qradar, aql);
        d.catalogs.emplace(Platform::secops, yaral);
        return d;
    }
};

std::string json_list(const std::vector<std::string>& v) { return nlohmann::json(v).dump(); }

}  // namespace

TEST_SUITE("genpipeline") {
    TEST_CASE("template rendering") {
        CHECK(render_template("a {{x}} b {{ y }}", {{"x", "1"}, {"y", "2"}}) == "a 1 b 2");
        CHECK_ERROR_CODE(render_template("{{missing}}", {}), ErrorCode::TemplateError);
        CHECK_ERROR_CODE(render_template("{{open", {{"open", ""}}), ErrorCode::TemplateError);
    }

    TEST_CASE("AQL prompt carries the labeled sections and catalog lists") {
        Fixture f;
        std::vector<DocumentChunk> context(2);
        context[0].chunk_id = "c0";
        context[0].text = "first chunk";
        context[1].chunk_id = "c1";
        context[1].text = "second chunk";
        const auto p = build_prompt(f.spec, f.aql, context, Platform::qradar);
        const auto& prompt = p.rendered_prompt;
        for (const char* label : {"Threat Detection Logic:", "Field List:", "Keyword List:", "Database List:",
                                  "Function List:", "Additional Context:"}) {
            CHECK(prompt.find(label) != std::string::npos);
        }
        CHECK(prompt.find("Use the correct AQL clause order: SELECT → FROM → WHERE → LAST") != std::string::npos);
        CHECK(prompt.find("fields = " + json_list(f.aql.aql().fields)) != std::string::npos);
        CHECK(prompt.find("keywords = " + json_list(f.aql.aql().keywords)) != std::string::npos);
        CHECK(prompt.find("databases = " + json_list(f.aql.aql().databases)) != std::string::npos);
        CHECK(prompt.find("functions = " + json_list(f.aql.aql().functions)) != std::string::npos);
        CHECK(prompt.find("[1] first chunk") != std::string::npos);
        CHECK(prompt.find("[2] second chunk") != std::string::npos);
        CHECK(p.context_chunk_ids == std::vector<std::string>{"c0", "c1"});
        CHECK(p.catalog_components_included.size() == 4);
    }

    TEST_CASE("empty context renders N/A") {
        Fixture f;
        const auto p = build_prompt(f.spec, f.aql, {}, Platform::qradar);
        CHECK(p.rendered_prompt.find("Additional Context:\nN/A") != std::string::npos);
    }

    TEST_CASE("SecOps prompt uses its own components") {
        Fixture f;
        const auto p = build_prompt(f.spec, f.yaral, {}, Platform::secops).rendered_prompt;
        CHECK(p.find("udm_fields = " + json_list(f.yaral.yaral().udm_fields)) != std::string::npos);
        CHECK(p.find("sections = " + json_list(f.yaral.yaral().sections)) != std::string::npos);
        CHECK(p.find("re.capture") != std::string::npos);
        CHECK(p.find("keywords =") == std::string::npos);
    }

    TEST_CASE("prompt preconditions") {
        Fixture f;
        CHECK_ERROR_CODE(build_prompt(f.spec, f.aql, std::vector<DocumentChunk>(6), Platform::qradar),
                         ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(build_prompt(f.spec, f.yaral, {}, Platform::qradar), ErrorCode::CatalogMissing);
        const auto custom = build_prompt(f.spec, f.aql, {}, Platform::qradar, std::string_view("only {{fields}}"));
        CHECK(custom.rendered_prompt == "only " + json_list(f.aql.aql().fields));
    }

    TEST_CASE("retrieval stays within the platform") {
        Fixture f;
        const auto q = retrieve_context(f.spec, f.index, f.embedder, Platform::qradar, 5);
        REQUIRE(q.size() == 2);
        for (const auto& c : q) CHECK(c.origin == Platform::qradar);
        CHECK(retrieval_text(f.spec) == "Failed logins\nmore than 10 failures");
    }

    TEST_CASE("code fences are stripped") {
        CHECK(strip_code_fences("```sql\nSELECT 1\n```") == "SELECT 1");
        CHECK(strip_code_fences("  ```\nrule x {}\n```  ") == "rule x {}");
        CHECK(strip_code_fences("SELECT 1") == "SELECT 1");
    }

    TEST_CASE("generate with the stub provider") {
        Fixture f;
        StubCompletionProvider stub(StubCompletionConfig{"stub-v1", std::string("```sql\nSELECT a\n```"), {}, false, false});
        const auto g = generate(f.spec, Platform::qradar, f.deps(stub));
        CHECK(g.query.query_text == "SELECT a");
        CHECK(g.completion_raw == "```sql\nSELECT a\n```");
        CHECK(g.query.prompt_hash == text::sha256_hex(g.prompt.rendered_prompt));
        CHECK(g.query.provider_id == "stub-v1");

        StubCompletionProvider empty(StubCompletionConfig{"stub-v1", std::string("  "), {}, false, false});
        CHECK_ERROR_CODE(generate(f.spec, Platform::qradar, f.deps(empty)), ErrorCode::EmptyCompletion);
    }

    TEST_CASE("stub fallback reply depends on the prompt") {
        Fixture f;
        StubCompletionProvider stub;
        const auto a = generate(f.spec, Platform::qradar, f.deps(stub));
        const auto b = generate(f.spec, Platform::qradar, f.deps(stub));
        CHECK(a.query.query_text == b.query.query_text);
        CHECK(a.query.query_text.find(a.query.prompt_hash.substr(0, 12)) != std::string::npos);
        const auto y = generate(f.spec, Platform::secops, f.deps(stub));
        CHECK(y.query.query_text.find("rule ") == 0);
    }

    TEST_CASE("batch generation is ordered and isolates failures") {
        Fixture f;
        StubCompletionProvider stub;
        std::vector<ThreatSpec> specs;
        for (const char* id : {"s1", "s2", "s3"}) {
            auto s = f.spec;
            s.id = id;
            specs.push_back(s);
        }
        const std::vector<Platform> platforms = {Platform::qradar, Platform::secops};
        const auto serial = generate_all(specs, platforms, f.deps(stub), 1);
        const auto parallel = generate_all(specs, platforms, f.deps(stub), 4);
        REQUIRE(serial.size() == 6);
        REQUIRE(parallel.size() == 6);
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(archive_record(std::get<Generation>(serial[i])) == archive_record(std::get<Generation>(parallel[i])));
        }
        CHECK(std::get<Generation>(serial[1]).query.platform == Platform::secops);
        CHECK(std::get<Generation>(serial[2]).query.spec_id == "s2");

        StubCompletionProvider down(StubCompletionConfig{"stub-v1", std::nullopt, {}, false, true});
        const auto failed = generate_all(specs, platforms, f.deps(down), 2);
        for (const auto& o : failed) {
            REQUIRE(std::holds_alternative<GenerationFailure>(o));
            CHECK(std::get<GenerationFailure>(o).code == ErrorCode::ProviderUnavailable);
        }
    }

    TEST_CASE("archive records round-trip") {
        Fixture f;
        StubCompletionProvider stub;
        const auto g = generate(f.spec, Platform::secops, f.deps(stub));
        const auto line = archive_record(g);
        const auto j = nlohmann::json::parse(line);
        for (const char* key : {"spec_id", "platform", "provider_id", "prompt_hash", "context_chunk_ids", "prompt",
                                "completion_raw", "query_text", "timing", "usage"}) {
            CHECK(j.contains(key));
        }
        const auto back = parse_archive(line + "\n");
        REQUIRE(back.size() == 1);
        CHECK(back[0].spec_id == "brute");
        CHECK(back[0].platform == Platform::secops);
        CHECK(back[0].query_text == g.query.query_text);
    }
}
