#pragma once

#include <stdexcept>
#include <string>

namespace lifetrack {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define LIFETRACK_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                             \
        explicit Name(const std::string& msg = #Name) : Error(msg) {} \
    }

LIFETRACK_DEFINE_ERROR(TooFewWaypoints);
LIFETRACK_DEFINE_ERROR(DegenerateSegment);
LIFETRACK_DEFINE_ERROR(PathExhausted);
LIFETRACK_DEFINE_ERROR(InvalidSpec);
LIFETRACK_DEFINE_ERROR(NumericBlowup);
LIFETRACK_DEFINE_ERROR(QpFailure);
LIFETRACK_DEFINE_ERROR(EmptyBatch);
LIFETRACK_DEFINE_ERROR(EmptyData);
LIFETRACK_DEFINE_ERROR(EmptyMemory);
LIFETRACK_DEFINE_ERROR(LengthMismatch);
LIFETRACK_DEFINE_ERROR(UnknownEvalId);
LIFETRACK_DEFINE_ERROR(TrajectoryTooShort);
LIFETRACK_DEFINE_ERROR(MissingTestSet);
LIFETRACK_DEFINE_ERROR(ConfigError);
LIFETRACK_DEFINE_ERROR(IoError);

#undef LIFETRACK_DEFINE_ERROR

}  // namespace lifetrack
