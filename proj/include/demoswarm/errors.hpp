#pragma once

#include <stdexcept>
#include <string>

namespace demoswarm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DEMOSWARM_ERROR(Name)                     \
    class Name : public Error {                   \
    public:                                       \
        explicit Name(const std::string& what)    \
            : Error(#Name ": " + what) {}         \
    }

DEMOSWARM_ERROR(InvalidArgument);
DEMOSWARM_ERROR(InitializationFailure);
DEMOSWARM_ERROR(OutsideArena);
DEMOSWARM_ERROR(UnknownMission);
DEMOSWARM_ERROR(TraceMismatch);
DEMOSWARM_ERROR(SizeMismatch);
DEMOSWARM_ERROR(NonpositiveDiameter);
DEMOSWARM_ERROR(EmptySample);
DEMOSWARM_ERROR(DegenerateMargin);
DEMOSWARM_ERROR(InvalidDemonstration);
DEMOSWARM_ERROR(ParseError);

#undef DEMOSWARM_ERROR

}  // namespace demoswarm
