#pragma once

#include <stdexcept>
#include <string>

namespace dictscan {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;

    /// Class name, e.g. "InputError".
    virtual const char* kind() const noexcept { return "Error"; }
};

#define DICTSCAN_DEFINE_ERROR(Name)        \
    class Name : public Error {            \
    public:                                \
        using Error::Error;                \
        const char* kind() const noexcept override { return #Name; } \
    }

// imaging
DICTSCAN_DEFINE_ERROR(EmptyImage);
DICTSCAN_DEFINE_ERROR(DegenerateHistogram);
DICTSCAN_DEFINE_ERROR(ElementTooSmall);
DICTSCAN_DEFINE_ERROR(NoContent);
DICTSCAN_DEFINE_ERROR(ImageIoError);

// geometry
DICTSCAN_DEFINE_ERROR(NotVertical);
DICTSCAN_DEFINE_ERROR(Parallel);

// lexicon / corrector
DICTSCAN_DEFINE_ERROR(InvalidClusterLength);
DICTSCAN_DEFINE_ERROR(VersionError);

// ocr
DICTSCAN_DEFINE_ERROR(BackendUnavailable);
DICTSCAN_DEFINE_ERROR(BackendFailure);
DICTSCAN_DEFINE_ERROR(BackendTimeout);

// pipeline
DICTSCAN_DEFINE_ERROR(ConfigError);
DICTSCAN_DEFINE_ERROR(InputError);
DICTSCAN_DEFINE_ERROR(EmptyGroundTruth);

#undef DICTSCAN_DEFINE_ERROR

/// Malformed serialized data. Carries the 1-based line and column of the
/// offending byte when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    const char* kind() const noexcept override { return "ParseError"; }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// "<Kind>: message", with kind "Error" for exceptions outside the hierarchy.
inline std::string describe(const std::exception& e) {
    const auto* ours = dynamic_cast<const Error*>(&e);
    return std::string(ours ? ours->kind() : "Error") + ": " + e.what();
}

}  // namespace dictscan
