#pragma once

#include <stdexcept>
#include <string>

namespace tanglev {

enum class Errc {
  NotFactorizable,
  SyntaxError,
  ArityMismatch,
  OrientationMismatch,
  IndexOutOfRange,
  PatternNotFound,
  CapMismatch,
  Inconsistent,
  MissingSeed,
  NonGenericCharacter,
  BranchDegenerate,
  SingularN,
  NoIntertwiner,
  AmbiguousIntertwiner,
  SingularM,
  SingularGram,
  UnsupportedOrientation,
  InvalidArgument,
  Io
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotFactorizable: return "NotFactorizable";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::OrientationMismatch: return "OrientationMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::PatternNotFound: return "PatternNotFound";
    case Errc::CapMismatch: return "CapMismatch";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::MissingSeed: return "MissingSeed";
    case Errc::NonGenericCharacter: return "NonGenericCharacter";
    case Errc::BranchDegenerate: return "BranchDegenerate";
    case Errc::SingularN: return "SingularN";
    case Errc::NoIntertwiner: return "NoIntertwiner";
    case Errc::AmbiguousIntertwiner: return "AmbiguousIntertwiner";
    case Errc::SingularM: return "SingularM";
    case Errc::SingularGram: return "SingularGram";
    case Errc::UnsupportedOrientation: return "UnsupportedOrientation";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tanglev
