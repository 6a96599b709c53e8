#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

// A caller broke a documented precondition (bad edge, bad permutation, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// The request exceeds a hard size limit of the exact engines.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fpp
