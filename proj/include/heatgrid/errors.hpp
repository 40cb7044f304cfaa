#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace heatgrid {

// Every failure the engine can raise. The class of an error determines the
// CLI exit code: I/O -> 2, validation -> 3, numeric -> 4.
enum class Errc {
  // I/O
  IoFailure,
  FileNotFound,
  // validation
  BadMagic,
  UnsupportedVersion,
  WrongPayloadKind,
  TruncatedPayload,
  OutOfRangeValue,
  InvalidField,
  GridMismatch,
  LegendMissingCode,
  LegendDuplicateCode,
  NegativePopulation,
  WrongStep,
  BadConfig,
  BadArgument,
  EmptySeries,
  // numeric
  ZeroPeak,
  ZeroDemand,
  ZeroPopulation,
  AllMissingCell,
  DomainError,
  DegenerateTie,  // informational; selection still succeeds, see Selection::tie
};

constexpr int exit_code_for(Errc c) {
  switch (c) {
    case Errc::IoFailure:
    case Errc::FileNotFound:
      return 2;
    case Errc::ZeroPeak:
    case Errc::ZeroDemand:
    case Errc::ZeroPopulation:
    case Errc::AllMissingCell:
    case Errc::DomainError:
    case Errc::DegenerateTie:
      return 4;
    default:
      return 3;
  }
}

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::IoFailure: return "IoFailure";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::WrongPayloadKind: return "WrongPayloadKind";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::OutOfRangeValue: return "OutOfRangeValue";
    case Errc::InvalidField: return "InvalidField";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::LegendMissingCode: return "LegendMissingCode";
    case Errc::LegendDuplicateCode: return "LegendDuplicateCode";
    case Errc::NegativePopulation: return "NegativePopulation";
    case Errc::WrongStep: return "WrongStep";
    case Errc::BadConfig: return "BadConfig";
    case Errc::BadArgument: return "BadArgument";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::ZeroPeak: return "ZeroPeak";
    case Errc::ZeroDemand: return "ZeroDemand";
    case Errc::ZeroPopulation: return "ZeroPopulation";
    case Errc::AllMissingCell: return "AllMissingCell";
    case Errc::DomainError: return "DomainError";
    case Errc::DegenerateTie: return "DegenerateTie";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + std::move(msg)),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return exit_code_for(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) raise(code, msg);
}

}  // namespace heatgrid
