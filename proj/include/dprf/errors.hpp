#pragma once

#include <stdexcept>
#include <string>

namespace dprf {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// --- core ---

class EmptyPersona : public Error {
public:
    using Error::Error;
};

// --- prompts ---

class UnknownTemplate : public Error {
public:
    using Error::Error;
};

class MissingBinding : public Error {
public:
    explicit MissingBinding(const std::string& placeholder)
        : Error("missing binding for placeholder {" + placeholder + "}"), placeholder_(placeholder) {}
    const std::string& placeholder() const { return placeholder_; }

private:
    std::string placeholder_;
};

class UnknownBinding : public Error {
public:
    explicit UnknownBinding(const std::string& placeholder)
        : Error("unknown binding {" + placeholder + "} not used by template"), placeholder_(placeholder) {}
    const std::string& placeholder() const { return placeholder_; }

private:
    std::string placeholder_;
};

// --- backends ---

// A failure worth retrying: timeout, 5xx, 429, connection loss.
class TransientBackendError : public Error {
public:
    explicit TransientBackendError(const std::string& message, int status = 0)
        : Error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

// A failure that retrying cannot fix (authentication, bad request, ...).
class PermanentBackendError : public Error {
public:
    explicit PermanentBackendError(const std::string& message, int status = 0)
        : Error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class RetriesExhausted : public Error {
public:
    RetriesExhausted(const std::string& message, int attempts)
        : Error(message), attempts_(attempts) {}
    int attempts() const { return attempts_; }

private:
    int attempts_;
};

class EmbeddingUnavailable : public Error {
public:
    using Error::Error;
};

class InvalidRequest : public Error {
public:
    using Error::Error;
};

// --- agents ---

class EmptyCompletion : public Error {
public:
    using Error::Error;
};

class EmptyAnalysis : public Error {
public:
    using Error::Error;
};

// --- metrics ---

class ZeroVector : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class EmptyTokenList : public Error {
public:
    using Error::Error;
};

// --- datasets ---

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationFailed : public Error {
public:
    using Error::Error;
};

// --- runner / journal ---

class JournalMismatch : public Error {
public:
    using Error::Error;
};

class EmptyJournal : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// --- simworld ---

class UnrecognizedPrompt : public Error {
public:
    using Error::Error;
};

}  // namespace dprf
