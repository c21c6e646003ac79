// SPDX-License-Identifier: Apache-2.0
//
// gensm-mimo: hybrid precoding for GenSM-aided mmWave MIMO
// Copyright (C) 2026 gensm-mimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef GENSM_ERRORS_HPP
#define GENSM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gensm {

/// A dimension or structural constraint on the system configuration is violated.
struct InvalidDimensions : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An antenna-group index vector violates the ordering/range constraint.
struct InvalidIndices : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operands passed to a linear-algebra kernel do not have matching shapes.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Repeated channel re-draws failed (sector/config combination is inconsistent).
struct DegenerateChannel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A positive-definite factorization failed or a result left the finite range.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterate left the strict interior of its barrier feasible set.
struct BoundaryViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No (N_K, N_M) divisor pair satisfies the partition constraints.
struct NoFeasiblePartition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The channel rank cannot support the requested number of streams.
struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A file could not be read/written or its contents are malformed.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gensm

#endif
