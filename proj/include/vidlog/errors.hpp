#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vidlog {

// Root of every error the engine throws. The CLI maps InputError to exit
// code 2 and ConfigError to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// embedding-store
class FormatError : public InputError {
public:
    using InputError::InputError;
};
class TruncatedPayload : public InputError {
public:
    using InputError::InputError;
};
class NonFiniteValue : public InputError {
public:
    using InputError::InputError;
};

// similarity-engine
class ZeroNormFrame : public InputError {
public:
    explicit ZeroNormFrame(std::size_t index)
        : InputError("frame " + std::to_string(index) + " has zero norm"), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// temporal-segmenter
class InvalidK : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// fewshot-head
class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};
class UnknownLabel : public InputError {
public:
    using InputError::InputError;
};
class EmptyInput : public InputError {
public:
    using InputError::InputError;
};
class LengthMismatch : public InputError {
public:
    using InputError::InputError;
};

// log-builder
class MissingDistribution : public InputError {
public:
    using InputError::InputError;
};
class UnsupportedFormat : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// eval-harness
class SingleCluster : public ConfigError {
public:
    using ConfigError::ConfigError;
};
class CenterSeparationFailure : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace vidlog
