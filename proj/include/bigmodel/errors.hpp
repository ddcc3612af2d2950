#pragma once

#include <stdexcept>
#include <string>

namespace bigmodel {

/// Malformed or out-of-range input. The CLI maps this to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pipeline stage was asked to run before the artifact it consumes exists.
/// The CLI maps this to exit status 3.
class DependencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bigmodel
