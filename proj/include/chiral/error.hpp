#pragma once

#include <stdexcept>
#include <string>

namespace chiral {

enum class ErrorKind {
  NotPrime,
  ReducibleModulus,
  BadModulus,
  ZeroElement,
  NotASquare,
  NoEmbedding,
  ContextMismatch,
  IdentityElement,
  CapExceededWithoutOrder,
  UnrecognizedSubgroup,
  ElementsNotMaterialized,
  DegenerateOrder,
  ParabolicTooLarge,
  PreconditionFailed,
  OrderTooSmall,
  WrongResidue,
  NoSqrt5,
  NotAPrimePower,
  UnsupportedScale,
  DegenerateOmega1,
  Parse,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::BadModulus: return "BadModulus";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::NotASquare: return "NotASquare";
    case ErrorKind::NoEmbedding: return "NoEmbedding";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::IdentityElement: return "IdentityElement";
    case ErrorKind::CapExceededWithoutOrder: return "CapExceededWithoutOrder";
    case ErrorKind::UnrecognizedSubgroup: return "UnrecognizedSubgroup";
    case ErrorKind::ElementsNotMaterialized: return "ElementsNotMaterialized";
    case ErrorKind::DegenerateOrder: return "DegenerateOrder";
    case ErrorKind::ParabolicTooLarge: return "ParabolicTooLarge";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::OrderTooSmall: return "OrderTooSmall";
    case ErrorKind::WrongResidue: return "WrongResidue";
    case ErrorKind::NoSqrt5: return "NoSqrt5";
    case ErrorKind::NotAPrimePower: return "NotAPrimePower";
    case ErrorKind::UnsupportedScale: return "UnsupportedScale";
    case ErrorKind::DegenerateOmega1: return "DegenerateOmega1";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chiral
