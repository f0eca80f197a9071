// Copyright 2026 The sembed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// GPT fragment construction, accessible subspaces and the depolarizer.

#pragma once

#include <span>
#include <vector>

#include "sembed/quantum.hpp"

namespace sembed {

inline constexpr double kRankRelTol = 1e-9;
inline constexpr double kFragmentProbTol = 1e-9;

/// Vectorized states (rows of `states`) and effects (rows of `effects`) in the
/// Hilbert-Schmidt coordinates of quantum.hpp, with the maximally mixed state
/// and the unit effect.
struct GptFragment {
  int dim = 0;  // Hilbert space dimension d; vectors have length d*d
  RMatrix states;
  RMatrix effects;
  RVector mm_state;
  RVector unit_effect;

  Eigen::Index state_count() const { return states.rows(); }
  Eigen::Index effect_count() const { return effects.rows(); }
  /// Throws InvalidInput when a probability leaves [-1e-9, 1+1e-9] or u.mu != 1.
  void validate() const;
};

GptFragment build_fragment(std::span<const DensityMatrix> states,
                           std::span<const DichotomicMeasurement> measurements);

/// Fragment given directly by coordinates; mm_state/unit_effect are taken as given.
GptFragment fragment_from_vectors(RMatrix states, RMatrix effects, RVector mm_state,
                                  RVector unit_effect);

struct AccessibleFragment {
  RMatrix proj_states;        // n x k_states
  RMatrix proj_effects;       // 2m x k_effects
  RMatrix inclusion_states;   // d^2 x k_states, orthonormal columns
  RMatrix inclusion_effects;  // d^2 x k_effects, orthonormal columns
  RMatrix depolarizer;        // d^2 x d^2

  Eigen::Index state_rank() const { return inclusion_states.cols(); }
  Eigen::Index effect_rank() const { return inclusion_effects.cols(); }
  /// Projections are the pseudoinverses (here: transposes) of the inclusions.
  RMatrix projection_states() const { return inclusion_states.transpose(); }
  RMatrix projection_effects() const { return inclusion_effects.transpose(); }
};

/// Orthonormal basis (columns) of the row space of `rows`, via SVD with
/// threshold rel_tol * largest singular value.
RMatrix row_space_basis(const RMatrix& rows, double rel_tol = kRankRelTol);

AccessibleFragment accessible_fragment(const GptFragment& frag,
                                       double rel_tol = kRankRelTol);

/// D = mu u^T, so D v = (u.v) mu.
RMatrix depolarizing_map(const GptFragment& frag);

}  // namespace sembed
