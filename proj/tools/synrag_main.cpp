#include <synrag/commands.hpp>
#include <synrag/config.hpp>
#include <synrag/error.hpp>
#include <synrag/platform.hpp>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>
#include <optional>

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Retrieval-augmented detection query generation for QRadar AQL and SecOps YARA-L"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    bool quiet = false;
    bool verbose = false;
    app.add_option("-c,--config", config_path, "Run configuration (TOML)")->check(CLI::ExistingFile);
    app.add_option("-o,--output-dir", output_dir, "Override the configured output directory");
    app.add_flag("-q,--quiet", quiet, "Only log errors");
    app.add_flag("-v,--verbose", verbose, "Log debug detail");

    auto* ingest = app.add_subcommand("ingest", "Load, chunk and embed the corpora into the vector index");

    auto* generate = app.add_subcommand("generate", "Generate one query per threat spec and platform");
    std::string specs_dir;
    std::string platform_name;
    generate->add_option("-s,--specs", specs_dir, "Directory of threat spec YAML files")->required();
    generate->add_option("-p,--platform", platform_name, "Restrict to one platform")
        ->check(CLI::IsMember({"qradar", "secops"}));

    auto* validate = app.add_subcommand("validate", "Check archived queries against the syntax catalogs");
    std::string archive;
    validate->add_option("-a,--archive", archive, "Generation archive (default <output-dir>/generations.jsonl)");

    auto* evaluate = app.add_subcommand("evaluate", "Score generated queries with BLEU and ROUGE-L");
    std::vector<std::string> archives;
    std::string references;
    std::string model_id;
    std::string inputs;
    std::string records;
    evaluate->add_option("-a,--archive", archives, "Generation archive; repeat once per run");
    evaluate->add_option("-r,--references", references, "Reference queries as <dir>/<platform>/<spec_id>.<ext>");
    evaluate->add_option("-m,--model-id", model_id, "Model label for the table rows");
    evaluate->add_option("-i,--input", inputs, "Candidate/reference pairs (JSONL)");
    evaluate->add_option("--records", records, "Pre-scored records (JSONL)");

    CLI11_PARSE(app, argc, argv);

    auto logger = spdlog::stderr_color_mt("synrag");
    spdlog::set_default_logger(logger);
    spdlog::set_level(quiet ? spdlog::level::err : verbose ? spdlog::level::debug : spdlog::level::info);

    synrag::RunConfig config;
    try {
        if (!config_path.empty()) {
            config = synrag::load_config(config_path);
        } else {
            config.base_dir = fs::current_path();
        }
    } catch (const synrag::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return synrag::kExitConfigError;
    }
    if (!output_dir.empty()) config.output_dir = fs::absolute(output_dir);

    try {
        if (*ingest) return synrag::cmd_ingest(config, std::cout);
        if (*generate) {
            std::optional<synrag::Platform> only;
            if (!platform_name.empty()) only = synrag::parse_platform(platform_name);
            return synrag::cmd_generate(config, specs_dir, only, std::cout);
        }
        if (*validate) {
            const fs::path path = archive.empty() ? config.resolve(config.output_dir) / "generations.jsonl"
                                                  : fs::path(archive);
            return synrag::cmd_validate(config, path, std::cout);
        }
        if (*evaluate) {
            synrag::EvaluateOptions options;
            for (const auto& a : archives) options.archives.emplace_back(a);
            options.references_dir = references;
            options.model_id = model_id;
            if (!inputs.empty()) options.inputs = inputs;
            if (!records.empty()) options.records = records;
            return synrag::cmd_evaluate(config, options, std::cout);
        }
    } catch (const synrag::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return synrag::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return synrag::kExitConfigError;
    }
    return synrag::kExitOk;
}
