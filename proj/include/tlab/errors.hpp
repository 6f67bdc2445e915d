#pragma once

#include <stdexcept>
#include <string>

namespace tlab {

// Bad user input: malformed files, flag values out of domain, violated
// preconditions that a caller could have checked. CLI maps this to exit 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A guard tripped: the request is well-formed but exceeds an enumeration or
// memory limit of the chosen mode. CLI maps this to exit 3.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A bounded search ran out of its node budget. Carries partial progress so
// reports can show how far the enumeration got.
class BudgetError : public CapacityError {
public:
    BudgetError(const std::string& what, unsigned long long nodes_visited)
        : CapacityError(what), nodes(nodes_visited) {}
    unsigned long long nodes;
};

}  // namespace tlab
