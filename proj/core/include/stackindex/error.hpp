#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stackindex {

enum class ErrorCode {
    // dataset
    MalformedHeader,
    NonContiguousMonths,
    DuplicateMonth,
    DuplicateTag,
    NegativeCount,
    UnparseableCell,
    EmptyDataset,
    NotFound,
    AmbiguousTag,
    DuplicateMember,
    TooFewMembers,
    NoObservations,
    // models
    SeriesTooShort,
    InvalidConfig,
    SingularDesign,
    HorizonTooLarge,
    InvalidHorizon,
    InvalidLevel,
    InvalidOrder,
    MismatchedHorizons,
    MismatchedOrigins,
    MismatchedLevels,
    TooFewForecasts,
    UnknownModel,
    // changepoint / evaluation
    InvalidArgument,
    LengthMismatch,
    EmptyInput,
    HoldoutTooLong,
    WindowTooLong,
    // ingestion / storage
    TransportError,
    QuotaExhausted,
    UnknownTag,
    RangeEmpty,
    IoError,
    ChecksumMismatch,
    VersionUnsupported,
    // service
    InvalidRequest,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Broad classification used to map errors onto HTTP statuses and exit codes.
enum class ErrorKind { NotFound, InvalidInput, ModelFailure, Io };

ErrorKind kind_of(ErrorCode code) noexcept;

/// Exception carrying a stable machine-readable code plus key/value details.
class Error : public std::runtime_error {
public:
    using Details = std::vector<std::pair<std::string, std::string>>;

    Error(ErrorCode code, const std::string& message, Details details = {})
        : std::runtime_error(message), code_(code), details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_of(code_); }
    const Details& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    Details details_;
};

} // namespace stackindex
