#pragma once

#include <stdexcept>
#include <string>

namespace sketchdepth {

// Error taxonomy shared by the library and the CLI exit-code contract:
// format errors (bad bytes) vs validation errors (bad values) vs faults.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct RenderError : Error {
    using Error::Error;
};

struct TrainingFault : Error {
    using Error::Error;
};

struct SamplerFault : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace sketchdepth
