#pragma once

#include <stdexcept>
#include <string>

namespace recomb {

// Bad user input or arguments. The CLI maps these to exit code 2.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// The requested analysis has no meaning for this input (still exit code 2).
struct not_applicable_error : validation_error {
  explicit not_applicable_error(const std::string& what) : validation_error(what) {}
};

// A configurable size guard was exceeded. Exit code 3.
struct resource_limit_error : std::runtime_error {
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// An identity that must hold by construction failed. Exit code 4.
struct invariant_violation : std::logic_error {
  explicit invariant_violation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace recomb
