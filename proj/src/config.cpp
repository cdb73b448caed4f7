#include <synrag/config.hpp>
#include <synrag/error.hpp>
#include <synrag/text.hpp>

#include <fmt/format.h>

#include <charconv>
#include <variant>

namespace synrag {

namespace fs = std::filesystem;

std::filesystem::path RunConfig::resolve(const fs::path& p) const {
    if (p.empty() || p.is_absolute()) return p;
    return (base_dir / p).lexically_normal();
}

std::filesystem::path RunConfig::resolved_index_path() const {
    if (!index_path.empty()) return resolve(index_path);
    return resolve(output_dir) / "index.jsonl";
}

namespace {

using Value = std::variant<std::string, double, bool, std::vector<std::string>>;

struct Entry {
    Value value;
    std::size_t line;
};

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw Error(ErrorCode::ConfigError, "line " + std::to_string(line), message);
}

// Parses a double-quoted string starting at s[pos] == '"'; advances pos.
std::string parse_string(std::string_view s, std::size_t& pos, std::size_t line) {
    std::string out;
    ++pos;
    while (pos < s.size()) {
        const char c = s[pos++];
        if (c == '"') return out;
        if (c == '\\' && pos < s.size()) {
            const char e = s[pos++];
            switch (e) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case '\\': out.push_back('\\'); break;
                case '"': out.push_back('"'); break;
                default: fail(line, fmt::format("unsupported escape \\{}", e));
            }
            continue;
        }
        out.push_back(c);
    }
    fail(line, "unterminated string");
}

std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

Value parse_value(std::string_view raw, std::size_t line) {
    const std::string_view v = text::trim(raw);
    if (v.empty()) fail(line, "missing value");
    if (v.front() == '"') {
        std::size_t pos = 0;
        std::string s = parse_string(v, pos, line);
        if (!text::trim(v.substr(pos)).empty()) fail(line, "trailing characters after string");
        return s;
    }
    if (v.front() == '[') {
        std::vector<std::string> items;
        std::size_t pos = 1;
        for (;;) {
            while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
            if (pos >= v.size()) fail(line, "unterminated array");
            if (v[pos] == ']') break;
            if (v[pos] != '"') fail(line, "arrays may only hold strings");
            items.push_back(parse_string(v, pos, line));
            while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
            if (pos < v.size() && v[pos] == ',') ++pos;
        }
        if (!text::trim(v.substr(pos + 1)).empty()) fail(line, "trailing characters after array");
        return items;
    }
    if (v == "true") return true;
    if (v == "false") return false;
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), number);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail(line, fmt::format("cannot parse value '{}'", v));
    return number;
}

std::map<std::string, Entry> parse_document(std::string_view text) {
    std::map<std::string, Entry> out;
    std::string section;
    std::size_t line_no = 0;
    for (std::size_t start = 0; start <= text.size();) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text::trim(strip_comment(text.substr(start, end - start)));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            section = std::string(text::trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const std::string key(text::trim(line.substr(0, eq)));
        if (key.empty()) fail(line_no, "empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (out.contains(full)) fail(line_no, fmt::format("duplicate key '{}'", full));
        out.emplace(full, Entry{parse_value(line.substr(eq + 1), line_no), line_no});
    }
    return out;
}

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    template <typename T>
    std::optional<T> take(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        const Entry entry = it->second;
        entries_.erase(it);
        if (const auto* v = std::get_if<T>(&entry.value)) return *v;
        fail(entry.line, fmt::format("wrong type for '{}'", key));
    }

    std::optional<std::size_t> take_count(const std::string& key, std::size_t minimum) {
        const auto line = entries_.contains(key) ? entries_.at(key).line : 0;
        const auto v = take<double>(key);
        if (!v) return std::nullopt;
        if (*v < static_cast<double>(minimum) || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
            fail(line, fmt::format("'{}' must be an integer >= {}", key, minimum));
        }
        return static_cast<std::size_t>(*v);
    }

    void finish() const {
        if (!entries_.empty()) {
            const auto& [key, entry] = *entries_.begin();
            fail(entry.line, fmt::format("unknown key '{}'", key));
        }
    }

private:
    std::map<std::string, Entry> entries_;
};

void read_provider(Reader& r, const std::string& section, ProviderSettings& p) {
    if (auto v = r.take<std::string>(section + ".provider")) p.kind = *v;
    if (p.kind != "stub" && p.kind != "remote") {
        throw Error(ErrorCode::ConfigError, section + ".provider", "must be \"stub\" or \"remote\"");
    }
    if (auto v = r.take<std::string>(section + ".provider_id")) p.provider_id = *v;
    if (auto v = r.take<std::string>(section + ".endpoint")) p.endpoint = *v;
    if (auto v = r.take<std::string>(section + ".model")) p.model = *v;
    if (auto v = r.take<std::string>(section + ".api_key_env")) p.api_key_env = *v;
    if (auto v = r.take<double>(section + ".timeout_s")) p.timeout_s = *v;
    if (auto v = r.take_count(section + ".retries", 0)) p.retries = static_cast<int>(*v);
    if (p.kind == "remote" && p.endpoint.empty()) {
        throw Error(ErrorCode::ConfigError, section + ".endpoint", "required for a remote provider");
    }
}

void read_platform_paths(Reader& r, const std::string& section, std::map<Platform, fs::path>& out) {
    for (Platform p : kAllPlatforms) {
        if (auto v = r.take<std::string>(section + "." + std::string(to_string(p)))) out[p] = *v;
    }
}

}  // namespace

RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
    Reader r(parse_document(text));
    RunConfig c;
    c.base_dir = base_dir;

    if (auto v = r.take<std::vector<std::string>>("run.platforms")) {
        c.platforms.clear();
        for (const auto& name : *v) {
            const auto p = parse_platform(name);
            if (!p) throw Error(ErrorCode::ConfigError, "run.platforms", "unknown platform '" + name + "'");
            c.platforms.push_back(*p);
        }
        if (c.platforms.empty()) throw Error(ErrorCode::ConfigError, "run.platforms", "no platforms");
    }
    if (auto v = r.take<std::string>("run.output_dir")) c.output_dir = *v;
    if (auto v = r.take_count("run.parallelism", 1)) c.parallelism = *v;

    read_platform_paths(r, "corpus", c.corpus_roots);
    read_platform_paths(r, "catalogs", c.catalogs);
    read_platform_paths(r, "prompts", c.prompt_templates);

    if (auto v = r.take<std::string>("index.path")) c.index_path = *v;
    if (auto v = r.take_count("index.chunk_size", 2)) c.chunk_size = *v;
    if (auto v = r.take_count("index.chunk_overlap", 1)) c.chunk_overlap = *v;

    read_provider(r, "embedding", c.embedding);
    if (auto v = r.take_count("embedding.dimension", 1)) c.embedding_dimension = *v;

    read_provider(r, "completion", c.completion);
    if (auto v = r.take<double>("completion.temperature")) c.decoding.temperature = *v;
    if (auto v = r.take_count("completion.max_tokens", 1)) c.decoding.max_tokens = static_cast<int>(*v);
    if (auto v = r.take<std::string>("completion.stub_replies")) c.stub_replies = *v;
    if (auto v = r.take<bool>("completion.stub_fence")) c.stub_fence = *v;
    if (auto v = r.take<bool>("completion.stub_unavailable")) c.stub_unavailable = *v;

    r.finish();
    return c;
}

RunConfig load_config(const fs::path& path) {
    if (!fs::is_regular_file(path)) {
        throw Error(ErrorCode::ConfigError, path.string(), "config file not found");
    }
    return parse_config(text::read_file(path), path.parent_path());
}

}  // namespace synrag
