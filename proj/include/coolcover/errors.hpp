#pragma once

#include <stdexcept>
#include <string>

namespace coolcover {

enum class ErrorKind {
    InvalidArgument,
    DegeneratePolygon,
    TooFewLandmarks,
    AntimeridianSpan,
    InvalidFiltration,
    InsufficientData,
    ZeroVariance,
    SingularDesign,
    ParseError,
    MissingId,
    NetworkError,
    UpstreamError,
    IoError,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind),
          message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// The message without the kind prefix, for rewrapping with context.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument:   return "InvalidArgument";
    case ErrorKind::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorKind::TooFewLandmarks:   return "TooFewLandmarks";
    case ErrorKind::AntimeridianSpan:  return "AntimeridianSpan";
    case ErrorKind::InvalidFiltration: return "InvalidFiltration";
    case ErrorKind::InsufficientData:  return "InsufficientData";
    case ErrorKind::ZeroVariance:      return "ZeroVariance";
    case ErrorKind::SingularDesign:    return "SingularDesign";
    case ErrorKind::ParseError:        return "ParseError";
    case ErrorKind::MissingId:         return "MissingId";
    case ErrorKind::NetworkError:      return "NetworkError";
    case ErrorKind::UpstreamError:     return "UpstreamError";
    case ErrorKind::IoError:           return "IoError";
    }
    return "Error";
}

} // namespace coolcover
