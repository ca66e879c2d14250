#pragma once

#include <stdexcept>
#include <string>

namespace filament {

// Input violates a documented precondition (bad file, bad flag, bad data).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to reach its tolerance or hit a degenerate
// configuration (singular system, monitor breach, unresolved quadrature).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace filament
