#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsf {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define NSF_DEFINE_ERROR(name)                                                 \
    class name : public Error {                                                \
      public:                                                                  \
        using Error::Error;                                                    \
    }

NSF_DEFINE_ERROR(NearZeroVector);
NSF_DEFINE_ERROR(AntipodalPoints);
NSF_DEFINE_ERROR(KTooLarge);
NSF_DEFINE_ERROR(TimeOutOfRange);
NSF_DEFINE_ERROR(NonPositiveCoupling);
NSF_DEFINE_ERROR(BeyondBlowup);
NSF_DEFINE_ERROR(NoBlowup);
NSF_DEFINE_ERROR(DomainExceeded);
NSF_DEFINE_ERROR(ZeroInitialEnergy);
NSF_DEFINE_ERROR(ExponentRelationViolated);
NSF_DEFINE_ERROR(ZeroSection);
NSF_DEFINE_ERROR(BadMagic);
NSF_DEFINE_ERROR(LengthMismatch);
NSF_DEFINE_ERROR(NormViolation);
NSF_DEFINE_ERROR(ConfigError);

#undef NSF_DEFINE_ERROR

// Step failures carry the index of the offending step so runs can report it.
class StepRejected : public Error {
  public:
    StepRejected(const std::string& what, std::size_t step) : Error(what), step_index(step) {}
    std::size_t step_index;
};

class LeftTube : public Error {
  public:
    LeftTube(const std::string& what, std::size_t step) : Error(what), step_index(step) {}
    std::size_t step_index;
};

} // namespace nsf
