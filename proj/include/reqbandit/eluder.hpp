#pragma once

#include "reqbandit/confidence.hpp"

#include <cstddef>
#include <span>

namespace reqbandit {

// Exhaustive epsilon-eluder dimension of a finite class over a finite context
// set: the longest sequence of distinct contexts such that, for one common
// eps' > epsilon, each context is eps'-independent of its predecessors.
// A class of identical functions has dimension 0 under this reading.
// Envelope: |contexts| <= 8 and |members| <= 16, else EnvelopeExceeded.
std::size_t eluder_dimension_bruteforce(std::span<const Regressor> members,
                                        std::span<const ArmContext> contexts, double epsilon);

}  // namespace reqbandit
