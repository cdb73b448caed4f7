#include <synrag/error.hpp>

namespace synrag {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedYaml: return "MalformedYaml";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::EmptyField: return "EmptyField";
        case ErrorCode::DuplicateSelectField: return "DuplicateSelectField";
        case ErrorCode::DirNotFound: return "DirNotFound";
        case ErrorCode::DecodeError: return "DecodeError";
        case ErrorCode::EmptyDocument: return "EmptyDocument";
        case ErrorCode::NoArticleTag: return "NoArticleTag";
        case ErrorCode::InvalidChunkParams: return "InvalidChunkParams";
        case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
        case ErrorCode::ProviderTimeout: return "ProviderTimeout";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::EmptyIndex: return "EmptyIndex";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::CorruptIndexFile: return "CorruptIndexFile";
        case ErrorCode::ProviderMismatch: return "ProviderMismatch";
        case ErrorCode::MalformedCatalog: return "MalformedCatalog";
        case ErrorCode::EmptyComponent: return "EmptyComponent";
        case ErrorCode::PlatformMismatch: return "PlatformMismatch";
        case ErrorCode::UnknownComponent: return "UnknownComponent";
        case ErrorCode::TemplateError: return "TemplateError";
        case ErrorCode::CatalogMissing: return "CatalogMissing";
        case ErrorCode::EmptyCompletion: return "EmptyCompletion";
        case ErrorCode::UnterminatedQuote: return "UnterminatedQuote";
        case ErrorCode::EmptyCandidate: return "EmptyCandidate";
        case ErrorCode::EmptyReference: return "EmptyReference";
        case ErrorCode::UnbalancedRuns: return "UnbalancedRuns";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& subject, const std::string& detail) {
    std::string msg(to_string(code));
    if (!subject.empty()) {
        msg += "(" + subject + ")";
    }
    if (!detail.empty()) {
        msg += ": " + detail;
    }
    return msg;
}

}  // namespace

Error::Error(ErrorCode code, std::string subject, const std::string& detail)
    : std::runtime_error(compose(code, subject, detail)), code_(code), subject_(std::move(subject)) {}

}  // namespace synrag
