#pragma once

#include <stdexcept>
#include <string>

namespace andolab {

enum class Err {
  BadParams,
  NotHermitian,
  NotPSD,
  NotOrthonormalInput,
  NotCommuting,
  NotContraction,
  NotStrict,
  DegenerateDefect,
  RankDeficient,
  DimMismatch,
  MissingUnitary,
  BadP,
  NotContractiveInBase,
  ProductNotStrict,
  SNotInterpolating,
  SNotMixedIsometry,
  ANormInvalid,
  HashMismatch,
  IoError,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::BadParams: return "BadParams";
    case Err::NotHermitian: return "NotHermitian";
    case Err::NotPSD: return "NotPSD";
    case Err::NotOrthonormalInput: return "NotOrthonormalInput";
    case Err::NotCommuting: return "NotCommuting";
    case Err::NotContraction: return "NotContraction";
    case Err::NotStrict: return "NotStrict";
    case Err::DegenerateDefect: return "DegenerateDefect";
    case Err::RankDeficient: return "RankDeficient";
    case Err::DimMismatch: return "DimMismatch";
    case Err::MissingUnitary: return "MissingUnitary";
    case Err::BadP: return "BadP";
    case Err::NotContractiveInBase: return "NotContractiveInBase";
    case Err::ProductNotStrict: return "ProductNotStrict";
    case Err::SNotInterpolating: return "SNotInterpolating";
    case Err::SNotMixedIsometry: return "SNotMixedIsometry";
    case Err::ANormInvalid: return "ANormInvalid";
    case Err::HashMismatch: return "HashMismatch";
    case Err::IoError: return "IoError";
  }
  return "Unknown";
}

/// Library-wide exception. `value` carries the offending residual/norm when
/// one exists (0 otherwise).
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code(code),
        value(value) {}

  Err code;
  double value;
};

}  // namespace andolab
