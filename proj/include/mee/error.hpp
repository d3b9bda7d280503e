#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mee {

enum class Errc {
  NotHermitian,
  NotNormalized,
  NotXForm,
  Unphysical,
  SingularFilter,
  ZeroSuccessProbability,
  SingularBoost,
  DegenerateC,
  NonPositiveDenominator,
  BoostCapExceeded,
  NoConvergence,
  NegativeTime,
  NonPositiveN,
  InvalidModel,
  StepTooLarge,
  PhysicalityLost,
  InvalidConfig,
  IoFailure,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NotXForm: return "NotXForm";
    case Errc::Unphysical: return "Unphysical";
    case Errc::SingularFilter: return "SingularFilter";
    case Errc::ZeroSuccessProbability: return "ZeroSuccessProbability";
    case Errc::SingularBoost: return "SingularBoost";
    case Errc::DegenerateC: return "DegenerateC";
    case Errc::NonPositiveDenominator: return "NonPositiveDenominator";
    case Errc::BoostCapExceeded: return "BoostCapExceeded";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NegativeTime: return "NegativeTime";
    case Errc::NonPositiveN: return "NonPositiveN";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::PhysicalityLost: return "PhysicalityLost";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mee
