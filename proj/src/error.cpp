#include "semspace/error.hpp"

namespace semspace {

std::string_view toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidEncoding: return "InvalidEncoding";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::OutOfVocabulary: return "OutOfVocabulary";
    case ErrorKind::EmptyCounts: return "EmptyCounts";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::CutLocus: return "CutLocus";
    case ErrorKind::FlagDegenerate: return "FlagDegenerate";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::TooManyMinors: return "TooManyMinors";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::EmptyContext: return "EmptyContext";
    case ErrorKind::InvalidTagMap: return "InvalidTagMap";
    case ErrorKind::KernelVertex: return "KernelVertex";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::InvalidTruncation: return "InvalidTruncation";
    case ErrorKind::ChartEscape: return "ChartEscape";
    case ErrorKind::NoGap: return "NoGap";
    case ErrorKind::DegenerateStart: return "DegenerateStart";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DictionaryMismatch: return "DictionaryMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<long long> detail,
             std::string subject)
    : std::runtime_error(message), kind_(kind), detail_(detail), subject_(std::move(subject)) {}

Error Error::withSubject(std::string subject) const {
  return Error(kind_, what(), detail_, std::move(subject));
}

}  // namespace semspace
