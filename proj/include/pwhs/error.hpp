#pragma once

#include <stdexcept>
#include <string>

namespace pwhs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PWHS_ERROR(Name)                                   \
    class Name : public Error {                            \
    public:                                                \
        explicit Name(const std::string& what) : Error(what) {} \
    }

PWHS_ERROR(PoleEvaluation);
PWHS_ERROR(UnsupportedField);
PWHS_ERROR(ExclusionPoint);
PWHS_ERROR(DegenerateMap);
PWHS_ERROR(PoleApproach);
PWHS_ERROR(Timeout);
PWHS_ERROR(NoTransit);
PWHS_ERROR(PoleOnArc);
PWHS_ERROR(FamilyAbsent);
PWHS_ERROR(DomainViolation);
PWHS_ERROR(RankDeficient);
PWHS_ERROR(UnsupportedZoneForm);
PWHS_ERROR(ConfigError);

#undef PWHS_ERROR

}  // namespace pwhs
