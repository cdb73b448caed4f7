#include <synrag/text.hpp>
#include <synrag/threatspec.hpp>

#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <set>

namespace synrag {

namespace {

constexpr std::string_view kSchemaKeys[] = {"id", "description", "fields", "source", "logic"};

bool is_schema_key(std::string_view key) {
    return std::find(std::begin(kSchemaKeys), std::end(kSchemaKeys), key) != std::end(kSchemaKeys);
}

std::string scalar_field(const YAML::Node& root, const std::string& name) {
    const YAML::Node node = root[name];
    if (!node || node.IsNull()) {
        throw Error(ErrorCode::MissingField, name);
    }
    if (!node.IsScalar()) {
        throw Error(ErrorCode::MalformedYaml, name, "expected a scalar");
    }
    std::string value = node.as<std::string>();
    if (text::trim(value).empty()) {
        throw Error(ErrorCode::EmptyField, name);
    }
    return value;
}

std::vector<std::string> list_field(const YAML::Node& root, const std::string& name) {
    const YAML::Node node = root[name];
    if (!node || node.IsNull()) {
        throw Error(ErrorCode::MissingField, name);
    }
    if (!node.IsSequence()) {
        throw Error(ErrorCode::MalformedYaml, name, "expected a sequence of strings");
    }
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& item : node) {
        if (!item.IsScalar()) {
            throw Error(ErrorCode::MalformedYaml, name, "expected a sequence of strings");
        }
        std::string value(text::trim(item.as<std::string>()));
        if (value.empty()) {
            throw Error(ErrorCode::EmptyField, name);
        }
        std::string folded = text::to_lower(value);
        if (!seen.insert(folded).second) {
            throw Error(ErrorCode::DuplicateSelectField, folded);
        }
        out.push_back(std::move(value));
    }
    if (out.empty()) {
        throw Error(ErrorCode::EmptyField, name);
    }
    return out;
}

}  // namespace

ThreatSpec parse_spec(std::string_view yaml_text, std::string_view fallback_id) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::MalformedYaml, "", e.what());
    }
    if (!root.IsMap()) {
        throw Error(ErrorCode::MalformedYaml, "", "top level must be a mapping");
    }

    ThreatSpec spec;
    spec.description = scalar_field(root, "description");
    spec.select_fields = list_field(root, "fields");
    spec.source = scalar_field(root, "source");
    spec.logic = scalar_field(root, "logic");

    if (const YAML::Node id = root["id"]; id && !id.IsNull()) {
        spec.id = scalar_field(root, "id");
    } else {
        spec.id = std::string(fallback_id);
    }

    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (is_schema_key(key)) continue;
        YAML::Emitter emitter;
        emitter << kv.second;
        spec.extra.emplace(key, emitter.c_str());
        spdlog::warn("spec {}: unknown key '{}' preserved", spec.id, key);
    }
    return spec;
}

std::string to_yaml(const ThreatSpec& spec) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << YAML::DoubleQuoted << spec.id;
    out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << spec.description;
    out << YAML::Key << "fields" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : spec.select_fields) out << YAML::DoubleQuoted << f;
    out << YAML::EndSeq;
    out << YAML::Key << "source" << YAML::Value << YAML::DoubleQuoted << spec.source;
    out << YAML::Key << "logic" << YAML::Value << YAML::DoubleQuoted << spec.logic;
    for (const auto& [key, value] : spec.extra) {
        out << YAML::Key << key << YAML::Value << YAML::Load(value);
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::vector<std::string> unknown_keys(const ThreatSpec& spec) {
    std::vector<std::string> keys;
    for (const auto& kv : spec.extra) keys.push_back(kv.first);
    return keys;
}

SpecDirectory load_spec_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::DirNotFound, dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".yaml" || ext == ".yml") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    SpecDirectory result;
    std::vector<std::pair<ThreatSpec, fs::path>> loaded;
    for (const auto& file : files) {
        try {
            loaded.emplace_back(parse_spec(text::read_file(file), file.stem().string()), file);
        } catch (const Error& e) {
            result.errors.push_back({file, e});
        }
    }
    std::sort(loaded.begin(), loaded.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.id, a.second) < std::tie(b.first.id, b.second);
    });
    for (auto& item : loaded) result.specs.push_back(std::move(item.first));
    return result;
}

}  // namespace synrag
