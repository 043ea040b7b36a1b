#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semspace {

enum class ErrorKind {
  InvalidArgument,
  InvalidEncoding,
  EmptyDocument,
  OutOfVocabulary,
  EmptyCounts,
  InsufficientData,
  ZeroVector,
  DimensionMismatch,
  RankDeficient,
  CutLocus,
  FlagDegenerate,
  IndexError,
  TooManyMinors,
  SizeMismatch,
  EmptyContext,
  InvalidTagMap,
  KernelVertex,
  KindMismatch,
  InvalidTruncation,
  ChartEscape,
  NoGap,
  DegenerateStart,
  NoConvergence,
  DictionaryMismatch,
  IoError,
  ParseError,
};

std::string_view toString(ErrorKind kind);

/// Every module reports failures through this exception type. `detail`
/// carries the integer payload some kinds define (the actual rank for
/// RankDeficient, the 1-based failing index for FlagDegenerate, ...), and
/// `subject` names the entity involved (a text id, a user id, a lexeme).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<long long> detail = std::nullopt, std::string subject = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<long long>& detail() const noexcept { return detail_; }
  const std::string& subject() const noexcept { return subject_; }

  /// Returns a copy of this error with `subject` attached.
  Error withSubject(std::string subject) const;

 private:
  ErrorKind kind_;
  std::optional<long long> detail_;
  std::string subject_;
};

}  // namespace semspace
