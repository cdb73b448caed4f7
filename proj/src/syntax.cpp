#include <synrag/error.hpp>
#include <synrag/syntax.hpp>
#include <synrag/text.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

namespace synrag {

SyntaxBundle::SyntaxBundle(AqlCatalog catalog) : catalog_(std::move(catalog)) {}
SyntaxBundle::SyntaxBundle(YaralCatalog catalog) : catalog_(std::move(catalog)) {}

Platform SyntaxBundle::platform() const {
    return std::holds_alternative<AqlCatalog>(catalog_) ? Platform::qradar : Platform::secops;
}

const AqlCatalog& SyntaxBundle::aql() const {
    if (const auto* c = std::get_if<AqlCatalog>(&catalog_)) return *c;
    throw Error(ErrorCode::PlatformMismatch, "secops", "bundle holds a YARA-L catalog");
}

const YaralCatalog& SyntaxBundle::yaral() const {
    if (const auto* c = std::get_if<YaralCatalog>(&catalog_)) return *c;
    throw Error(ErrorCode::PlatformMismatch, "qradar", "bundle holds an AQL catalog");
}

std::vector<std::string> SyntaxBundle::component_names() const {
    if (platform() == Platform::qradar) return {"fields", "keywords", "databases", "functions"};
    return {"sections", "functions", "udm_fields"};
}

namespace {

std::vector<std::string> read_component(const nlohmann::json& root, const std::string& name) {
    if (!root.contains(name)) {
        throw Error(ErrorCode::MalformedCatalog, name, "component missing");
    }
    const auto& arr = root.at(name);
    if (!arr.is_array()) {
        throw Error(ErrorCode::MalformedCatalog, name, "component must be an array of strings");
    }
    std::vector<std::string> out;
    std::set<std::string> folded;
    for (const auto& item : arr) {
        if (!item.is_string()) {
            throw Error(ErrorCode::MalformedCatalog, name, "component must be an array of strings");
        }
        std::string token(text::trim(item.get<std::string>()));
        if (token.empty()) {
            throw Error(ErrorCode::MalformedCatalog, name, "blank entry");
        }
        if (!folded.insert(text::to_lower(token)).second) {
            throw Error(ErrorCode::MalformedCatalog, name, "duplicate entry '" + token + "'");
        }
        out.push_back(std::move(token));
    }
    if (out.empty()) {
        throw Error(ErrorCode::EmptyComponent, name);
    }
    return out;
}

void check_section_order(const std::vector<std::string>& sections) {
    std::size_t previous = 0;
    bool first = true;
    for (std::string_view required : kRequiredYaralSections) {
        const auto it = std::find(sections.begin(), sections.end(), required);
        if (it == sections.end()) {
            throw Error(ErrorCode::MalformedCatalog, "sections", "missing section '" + std::string(required) + "'");
        }
        const auto pos = static_cast<std::size_t>(it - sections.begin());
        if (!first && pos < previous) {
            throw Error(ErrorCode::MalformedCatalog, "sections",
                        "section '" + std::string(required) + "' is out of order");
        }
        previous = pos;
        first = false;
    }
}

bool case_insensitive_component(Platform platform, std::string_view component) {
    return platform == Platform::qradar &&
           (component == "keywords" || component == "functions" || component == "databases");
}

}  // namespace

SyntaxBundle parse_catalog(std::string_view json_text, Platform platform) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedCatalog, "", e.what());
    }
    if (!root.is_object() || !root.contains("platform") || !root.at("platform").is_string()) {
        throw Error(ErrorCode::MalformedCatalog, "platform", "missing platform discriminator");
    }
    const auto declared = parse_platform(root.at("platform").get<std::string>());
    if (!declared) {
        throw Error(ErrorCode::MalformedCatalog, "platform", "unknown platform");
    }
    if (*declared != platform) {
        throw Error(ErrorCode::PlatformMismatch, std::string(to_string(*declared)),
                    "expected a " + std::string(to_string(platform)) + " catalog");
    }
    if (platform == Platform::qradar) {
        AqlCatalog c;
        c.keywords = read_component(root, "keywords");
        c.fields = read_component(root, "fields");
        c.functions = read_component(root, "functions");
        c.databases = read_component(root, "databases");
        return SyntaxBundle(std::move(c));
    }
    YaralCatalog c;
    c.sections = read_component(root, "sections");
    c.functions = read_component(root, "functions");
    c.udm_fields = read_component(root, "udm_fields");
    check_section_order(c.sections);
    return SyntaxBundle(std::move(c));
}

SyntaxBundle load_catalog(const std::filesystem::path& path, Platform platform) {
    return parse_catalog(text::read_file(path), platform);
}

const std::vector<std::string>& allowed_tokens(const SyntaxBundle& bundle, std::string_view component) {
    if (bundle.platform() == Platform::qradar) {
        const auto& c = bundle.aql();
        if (component == "keywords") return c.keywords;
        if (component == "fields") return c.fields;
        if (component == "functions") return c.functions;
        if (component == "databases") return c.databases;
    } else {
        const auto& c = bundle.yaral();
        if (component == "sections") return c.sections;
        if (component == "functions") return c.functions;
        if (component == "udm_fields") return c.udm_fields;
    }
    throw Error(ErrorCode::UnknownComponent, std::string(component),
                "not a " + std::string(to_string(bundle.platform())) + " component");
}

bool is_member(const SyntaxBundle& bundle, std::string_view component, std::string_view token) {
    const auto& tokens = allowed_tokens(bundle, component);
    if (case_insensitive_component(bundle.platform(), component)) {
        return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return text::iequals(t, token); });
    }
    return std::find(tokens.begin(), tokens.end(), token) != tokens.end();
}

}  // namespace synrag
