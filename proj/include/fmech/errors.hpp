#ifndef FMECH_ERRORS_HPP
#define FMECH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fmech {

/// Malformed or inconsistent input: dimension mismatch, empty point set,
/// bad mechanism parameters, infeasible capacities.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// An exact oracle was asked for an instance beyond its enumeration cap.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fmech

#endif
