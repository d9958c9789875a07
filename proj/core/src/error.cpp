#include "stackindex/error.hpp"

namespace stackindex {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::NonContiguousMonths: return "NonContiguousMonths";
    case ErrorCode::DuplicateMonth: return "DuplicateMonth";
    case ErrorCode::DuplicateTag: return "DuplicateTag";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::UnparseableCell: return "UnparseableCell";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::AmbiguousTag: return "AmbiguousTag";
    case ErrorCode::DuplicateMember: return "DuplicateMember";
    case ErrorCode::TooFewMembers: return "TooFewMembers";
    case ErrorCode::NoObservations: return "NoObservations";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::InvalidHorizon: return "InvalidHorizon";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::MismatchedHorizons: return "MismatchedHorizons";
    case ErrorCode::MismatchedOrigins: return "MismatchedOrigins";
    case ErrorCode::MismatchedLevels: return "MismatchedLevels";
    case ErrorCode::TooFewForecasts: return "TooFewForecasts";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::HoldoutTooLong: return "HoldoutTooLong";
    case ErrorCode::WindowTooLong: return "WindowTooLong";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::QuotaExhausted: return "QuotaExhausted";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::RangeEmpty: return "RangeEmpty";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    }
    return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownTag:
        return ErrorKind::NotFound;
    case ErrorCode::SingularDesign:
    case ErrorCode::NoObservations:
        return ErrorKind::ModelFailure;
    case ErrorCode::TransportError:
    case ErrorCode::QuotaExhausted:
    case ErrorCode::IoError:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::VersionUnsupported:
        return ErrorKind::Io;
    default:
        return ErrorKind::InvalidInput;
    }
}

} // namespace stackindex
