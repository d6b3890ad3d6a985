#pragma once

#include <stdexcept>
#include <string>

namespace sgcl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// graph construction / ingestion
struct InvalidGraph : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct EmptyGraph : Error { using Error::Error; };

// caption parsing
struct ParseError : Error { using Error::Error; };
struct UnknownStructure : Error { using Error::Error; };

// negative mining
struct WrongShape : Error { using Error::Error; };
struct EmptyVocab : Error { using Error::Error; };

// batch construction
struct ConfigError : Error { using Error::Error; };
struct EmptyPositives : Error { using Error::Error; };

// loss kernel
struct ShapeMismatch : Error { using Error::Error; };
struct EmptyPositiveSet : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };

// encoders
struct EmptyText : Error { using Error::Error; };

}  // namespace sgcl
