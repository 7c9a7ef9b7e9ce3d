#pragma once

#include <stdexcept>
#include <string>

namespace hnc {

// Precondition violations on operation inputs (empty cluster, root has no
// sibling, degenerate hyperplane, configuration outside a required stratum).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violations of guarantees the algorithms themselves provide; reaching one
// signals an implementation bug, not bad input.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Post-step invariant failures during numerical integration (dt too large,
// or a field bug).
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed Newick / scenario input.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hnc
