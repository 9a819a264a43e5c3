#pragma once

#include <stdexcept>
#include <string>

namespace reachkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct RankDeficient : Error {
    using Error::Error;
};

struct NotSymmetric : Error {
    using Error::Error;
};

struct IdenticalPoints : Error {
    using Error::Error;
};

struct MissingFrames : Error {
    using Error::Error;
};

struct AllPairsDegenerate : Error {
    using Error::Error;
};

struct NonPositiveReach : Error {
    using Error::Error;
};

struct UnsupportedSpec : Error {
    using Error::Error;
};

struct InvalidSpec : Error {
    using Error::Error;
};

} // namespace reachkit
