#include "test_util.hpp"

#include <synrag/config.hpp>
#include <synrag/text.hpp>

#include <sys/wait.h>

#include <cstdlib>

using namespace synrag;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(SYNRAG_CLI) + " -q " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Config pointing at the shipped fixtures, written into `dir`.
fs::path write_config(const fs::path& dir, const std::string& extra_completion = "") {
    const auto data = testutil::data_dir().string();
    const std::string toml = "[run]\noutput_dir = \"out\"\n"
                             "[corpus]\nqradar = \"" + data + "/corpus/qradar\"\nsecops = \"" + data + "/corpus/secops\"\n"
                             "[catalogs]\nqradar = \"" + data + "/catalogs/qradar_aql.json\"\nsecops = \"" + data +
                             "/catalogs/secops_yaral.json\"\n"
                             "[completion]\nprovider = \"stub\"\n" + extra_completion;
    text::write_file(dir / "run.toml", toml);
    return dir / "run.toml";
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("parses every section") {
        const auto c = parse_config(R"(
# comment
[run]
platforms = ["secops"]
output_dir = "o"   # trailing comment
parallelism = 3
[corpus]
secops = "c/s"
[catalogs]
secops = "cat.json"
[index]
chunk_size = 256
chunk_overlap = 32
[embedding]
provider = "remote"
endpoint = "http://localhost:8080/v1/embeddings"
model = "e5"
api_key_env = "EMB_KEY"
dimension = 384
[completion]
provider = "stub"
temperature = 0.2
max_tokens = 512
stub_fence = true
)", "/base");
        CHECK(c.platforms == std::vector<Platform>{Platform::secops});
        CHECK(c.resolve(c.output_dir) == fs::path("/base/o"));
        CHECK(c.resolved_index_path() == fs::path("/base/o/index.jsonl"));
        CHECK(c.parallelism == 3);
        CHECK(c.chunk_size == 256);
        CHECK(c.chunk_overlap == 32);
        CHECK(c.embedding.kind == "remote");
        CHECK(c.embedding_dimension == 384);
        CHECK(c.decoding.temperature == doctest::Approx(0.2));
        CHECK(c.decoding.max_tokens == 512);
        CHECK(c.stub_fence);
        CHECK(c.resolve("/abs") == fs::path("/abs"));
    }

    TEST_CASE("defaults") {
        const auto c = parse_config("", "/b");
        CHECK(c.platforms.size() == 2);
        CHECK(c.chunk_size == 500);
        CHECK(c.chunk_overlap == 100);
        CHECK(c.decoding.temperature == 0.0);
        CHECK(c.decoding.max_tokens == 2048);
        CHECK(c.embedding.kind == "stub");
    }

    TEST_CASE("rejects bad input") {
        CHECK_ERROR_CODE(parse_config("[run]\nunknown = 1\n", "/"), ErrorCode::ConfigError);
        CHECK_ERROR_CODE(parse_config("[run]\nplatforms = [\"splunk\"]\n", "/"), ErrorCode::ConfigError);
        CHECK_ERROR_CODE(parse_config("[run]\nparallelism = \"x\"\n", "/"), ErrorCode::ConfigError);
        CHECK_ERROR_CODE(parse_config("[run]\noutput_dir = \"open\n", "/"), ErrorCode::ConfigError);
        CHECK_ERROR_CODE(parse_config("[embedding]\nprovider = \"remote\"\n", "/"), ErrorCode::ConfigError);
        CHECK_ERROR_CODE(parse_config("[index]\nchunk_size = 1.5\n", "/"), ErrorCode::ConfigError);
        CHECK_ERROR_CODE(parse_config("[run]\nparallelism = 1\nparallelism = 2\n", "/"), ErrorCode::ConfigError);
    }
}

TEST_SUITE("cli") {
    TEST_CASE("full stub pipeline and exit codes") {
        const auto dir = testutil::scratch("cli");
        const auto cfg = write_config(dir).string();
        const auto log = dir / "log.txt";
        const auto specs = (testutil::data_dir() / "specs").string();

        REQUIRE(run("-c " + cfg + " ingest", log) == 0);
        CHECK(text::read_file(log).find("total:") != std::string::npos);
        REQUIRE(run("-c " + cfg + " generate --specs " + specs, log) == 0);
        CHECK(fs::exists(dir / "out" / "generations.jsonl"));
        CHECK(run("-c " + cfg + " validate", log) == 0);
        CHECK(run("-c " + cfg + " evaluate -a " + (dir / "out" / "generations.jsonl").string() + " -r " +
                      (testutil::data_dir() / "golden").string(),
                  log) == 0);
        CHECK(fs::exists(dir / "out" / "eval_table.md"));
        CHECK(fs::exists(dir / "out" / "eval_table.csv"));

        // An invalid archived query makes validate exit 1.
        text::write_file(dir / "bad.jsonl",
                         R"({"spec_id":"x","platform":"qradar","provider_id":"p","query_text":"FROM events SELECT a"})"
                         "\n");
        CHECK(run("-c " + cfg + " validate -a " + (dir / "bad.jsonl").string(), log) == 1);
        CHECK(text::read_file(log).find("ClauseOrder") != std::string::npos);

        CHECK(run("-c " + cfg + " generate --specs " + specs + " --platform secops", log) == 0);
    }

    TEST_CASE("configuration errors exit 2") {
        const auto dir = testutil::scratch("cli_cfg");
        const auto log = dir / "log.txt";
        text::write_file(dir / "bad.toml", "[run]\nnonsense = 1\n");
        CHECK(run("-c " + (dir / "bad.toml").string() + " ingest", log) == 2);
        text::write_file(dir / "nocorpus.toml", "[corpus]\nqradar = \"missing\"\nsecops = \"missing\"\n");
        CHECK(run("-c " + (dir / "nocorpus.toml").string() + " ingest", log) == 2);
        const auto cfg = write_config(dir).string();
        CHECK(run("-c " + cfg + " generate --specs " + (dir / "nope").string(), log) == 2);  // no index yet
    }

    TEST_CASE("provider outage exits 3") {
        const auto dir = testutil::scratch("cli_down");
        const auto cfg = write_config(dir, "stub_unavailable = true\n").string();
        const auto log = dir / "log.txt";
        REQUIRE(run("-c " + cfg + " ingest", log) == 0);
        CHECK(run("-c " + cfg + " generate --specs " + (testutil::data_dir() / "specs").string(), log) == 3);
        CHECK(text::read_file(dir / "out" / "generation_failures.jsonl").find("ProviderUnavailable") !=
              std::string::npos);
    }

    TEST_CASE("evaluate reports unbalanced runs") {
        const auto dir = testutil::scratch("cli_eval");
        const auto cfg = write_config(dir).string();
        const auto log = dir / "log.txt";
        text::write_file(dir / "records.jsonl",
                         R"({"model_id":"m","run_index":1,"spec_id":"a","platform":"qradar","bleu":0.1,"rouge_l":0.2})"
                         "\n"
                         R"({"model_id":"m","run_index":2,"spec_id":"b","platform":"qradar","bleu":0.1,"rouge_l":0.2})"
                         "\n");
        CHECK(run("-c " + cfg + " evaluate --records " + (dir / "records.jsonl").string(), log) == 1);
        CHECK(text::read_file(log).find("UnbalancedRuns") != std::string::npos);
    }
}
