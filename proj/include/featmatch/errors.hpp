#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace featmatch {

/// Error category, doubling as the CLI exit code.
enum class ErrorCategory : int {
    config = 1,
    io = 2,
    provider = 3,
};

/// Base of all toolkit errors. Messages are module-prefixed at the throw
/// site (e.g. "ingest: ..."), so what surfaces on stderr names the stage
/// that failed.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string message)
        : std::runtime_error(std::move(message)), category_(category) {}

    [[nodiscard]] ErrorCategory category() const noexcept { return category_; }
    [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::string message)
        : Error(ErrorCategory::config, std::move(message)) {}
};

class IoError : public Error {
public:
    explicit IoError(std::string message)
        : Error(ErrorCategory::io, std::move(message)) {}
};

class ProviderError : public Error {
public:
    explicit ProviderError(std::string message)
        : Error(ErrorCategory::provider, std::move(message)) {}
};

/// Source file missing, unreadable, or unparsable.
class UnreadableSource : public IoError {
public:
    using IoError::IoError;
};

/// The configured name column does not exist in the source.
class MissingNameColumn : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Two rows of one dataset share a feature_id.
class DuplicateFeatureId : public IoError {
public:
    using IoError::IoError;
};

/// Explicit fusion weight outside [0,1].
class InvalidWeight : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Remote embedding endpoint unreachable, timed out, or replied garbage.
class RemoteUnavailable : public ProviderError {
public:
    using ProviderError::ProviderError;
};

/// Vectors of differing dimension or provider were mixed.
class DimensionMismatch : public ProviderError {
public:
    using ProviderError::ProviderError;
};

/// Report destination cannot be written.
class UnwritablePath : public IoError {
public:
    using IoError::IoError;
};

} // namespace featmatch
