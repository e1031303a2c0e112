#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wief {

enum class ErrorKind {
  NonResidue,
  NotSquarefree,
  DegenerateD,
  FieldMismatch,
  ImaginaryField,
  PeriodOverflow,
  EvenRamified,
  UnsupportedLevel,
  BaseInIdeal,
  IncompleteFactorization,
  ZeroIdeal,
  NotCoprimeIndices,
  ZeroElement,
  NotAdmissible,
  ParseError,
  NonIntegral,
  InvalidArgument,
  IoError,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonResidue: return "NonResidue";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::DegenerateD: return "DegenerateD";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ImaginaryField: return "ImaginaryField";
    case ErrorKind::PeriodOverflow: return "PeriodOverflow";
    case ErrorKind::EvenRamified: return "EvenRamified";
    case ErrorKind::UnsupportedLevel: return "UnsupportedLevel";
    case ErrorKind::BaseInIdeal: return "BaseInIdeal";
    case ErrorKind::IncompleteFactorization: return "IncompleteFactorization";
    case ErrorKind::ZeroIdeal: return "ZeroIdeal";
    case ErrorKind::NotCoprimeIndices: return "NotCoprimeIndices";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonIntegral: return "NonIntegral";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Domain error carrying a machine-readable kind; the CLI maps it to a JSON object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace wief
