#pragma once

#include <stdexcept>
#include <string>

namespace tase {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define TASE_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(what) {}   \
    };

TASE_DEFINE_ERROR(NotPositiveDefinite)
TASE_DEFINE_ERROR(NoConvergence)
TASE_DEFINE_ERROR(NotSymmetric)
TASE_DEFINE_ERROR(IllConditioned)
TASE_DEFINE_ERROR(DuplicateOmega)
TASE_DEFINE_ERROR(DomainError)
TASE_DEFINE_ERROR(SolveFailure)
TASE_DEFINE_ERROR(NonFiniteState)
TASE_DEFINE_ERROR(PoleHit)
TASE_DEFINE_ERROR(RootFindingFailure)
TASE_DEFINE_ERROR(InvalidMu)
TASE_DEFINE_ERROR(SingularA)
TASE_DEFINE_ERROR(NotSimultaneouslyDiagonalizable)
TASE_DEFINE_ERROR(ConfigError)
TASE_DEFINE_ERROR(NoBracket)

#undef TASE_DEFINE_ERROR

}  // namespace tase
