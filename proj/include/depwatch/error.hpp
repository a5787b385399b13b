#pragma once

#include <stdexcept>
#include <string>

namespace depwatch {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem access failed (unreadable directory, missing file).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace depwatch
