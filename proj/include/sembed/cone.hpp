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

// Facet (H-) representation of finitely generated cones via incremental
// double description.

#pragma once

#include <cstddef>

#include "sembed/quantum.hpp"

namespace sembed {

inline constexpr double kConeTol = 1e-9;

/// {v : facets * v >= 0} is the cone. Rows have unit Euclidean norm and are
/// sorted lexicographically. A rank-deficient cone carries each complement
/// direction w as the pair of rows w, -w.
struct ConeHRepresentation {
  RMatrix facets;
  std::size_t generator_count = 0;
  std::size_t space_dim = 0;

  Eigen::Index facet_count() const { return facets.rows(); }
};

struct DoubleDescriptionOptions {
  double zero_tol = kConeTol;    // |<g, h>| below this counts as incident
  double dedup_tol = 1e-9;       // generator / facet deduplication
  double rank_rel_tol = 1e-9;    // linear-algebra rank thresholds
};

/// Generators are the rows of `generators` (count x k).
ConeHRepresentation facet_enumeration(const RMatrix& generators,
                                      const DoubleDescriptionOptions& options = {});

bool cone_contains(const ConeHRepresentation& h, const RVector& v, double tol = kConeTol);

}  // namespace sembed
