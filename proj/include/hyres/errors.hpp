#ifndef HYRES_ERRORS_HPP
#define HYRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hyres {

// Invariant violations on domain types and operation preconditions.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A file that is not a recognized container/image format.
class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A recognized file whose payload is truncated or inconsistent.
class corruption_error : public std::runtime_error {
public:
    explicit corruption_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Inverse transform fed a field that should have been Hermitian-symmetric.
class symmetry_error : public std::runtime_error {
public:
    explicit symmetry_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hyres

#endif
