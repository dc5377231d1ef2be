#pragma once

#include <stdexcept>

namespace keq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Workload limit violations (group order, alphabet size, subset enumeration,
// brute-force word counts). The CLI maps these to a dedicated exit code.
struct CapExceeded : Error {
  using Error::Error;
};

}  // namespace keq
