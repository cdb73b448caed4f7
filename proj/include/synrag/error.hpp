#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synrag {

enum class ErrorCode {
    // threatspec
    MalformedYaml,
    MissingField,
    EmptyField,
    DuplicateSelectField,
    DirNotFound,
    // ingest
    DecodeError,
    EmptyDocument,
    NoArticleTag,
    InvalidChunkParams,
    // vectorstore / providers
    ProviderUnavailable,
    ProviderTimeout,
    DimensionMismatch,
    ZeroVector,
    EmptyIndex,
    InvalidArgument,
    CorruptIndexFile,
    ProviderMismatch,
    // syntax
    MalformedCatalog,
    EmptyComponent,
    PlatformMismatch,
    UnknownComponent,
    // genpipeline
    TemplateError,
    CatalogMissing,
    EmptyCompletion,
    // validators
    UnterminatedQuote,
    // evalharness
    EmptyCandidate,
    EmptyReference,
    UnbalancedRuns,
    // cli
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code plus the offending subject
/// (field name, path, component, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string subject, const std::string& detail = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    ErrorCode code_;
    std::string subject_;
};

}  // namespace synrag
