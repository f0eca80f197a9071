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

#include "sembed/fragment.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "sembed/errors.hpp"

namespace sembed {

void GptFragment::validate() const {
  const Eigen::Index len = static_cast<Eigen::Index>(dim) * dim;
  if (dim < 1 || states.cols() != len || effects.cols() != len || mm_state.size() != len ||
      unit_effect.size() != len) {
    throw InvalidInput("fragment: inconsistent vector lengths");
  }
  if (states.rows() == 0 || effects.rows() == 0) {
    throw InvalidInput("fragment needs at least one state and one effect");
  }
  if (std::abs(unit_effect.dot(mm_state) - 1.0) > 1e-10) {
    throw InvalidInput("fragment: unit effect does not normalize the maximally mixed state");
  }
  const RMatrix probs = effects * states.transpose();
  const double lo = probs.minCoeff();
  const double hi = probs.maxCoeff();
  if (lo < -kFragmentProbTol || hi > 1.0 + kFragmentProbTol) {
    std::ostringstream os;
    os << "fragment probabilities span [" << lo << ", " << hi << "]";
    throw InvalidInput(os.str());
  }
}

GptFragment build_fragment(std::span<const DensityMatrix> states,
                           std::span<const DichotomicMeasurement> measurements) {
  if (states.empty() || measurements.empty()) {
    throw InvalidInput("build_fragment: need at least one state and one measurement");
  }
  const int d = states.front().dim();
  const Eigen::Index len = static_cast<Eigen::Index>(d) * d;
  GptFragment f;
  f.dim = d;
  f.states.resize(static_cast<Eigen::Index>(states.size()), len);
  f.effects.resize(2 * static_cast<Eigen::Index>(measurements.size()), len);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != d) throw InvalidInput("build_fragment: state dimension mismatch");
    f.states.row(static_cast<Eigen::Index>(i)) = vectorize(states[i]).transpose();
  }
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    const auto& m = measurements[i];
    if (m.first.dim() != d || m.second.dim() != d) {
      throw InvalidInput("build_fragment: effect dimension mismatch");
    }
    const auto row = 2 * static_cast<Eigen::Index>(i);
    f.effects.row(row) = vectorize(m.first).transpose();
    f.effects.row(row + 1) = vectorize(m.second).transpose();
  }
  f.mm_state = vectorize(CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d)));
  f.unit_effect = vectorize(CMatrix(CMatrix::Identity(d, d)));
  f.validate();
  return f;
}

GptFragment fragment_from_vectors(RMatrix states, RMatrix effects, RVector mm_state,
                                  RVector unit_effect) {
  GptFragment f;
  const auto len = states.cols();
  f.dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(len))));
  f.states = std::move(states);
  f.effects = std::move(effects);
  f.mm_state = std::move(mm_state);
  f.unit_effect = std::move(unit_effect);
  f.validate();
  return f;
}

RMatrix row_space_basis(const RMatrix& rows, double rel_tol) {
  if (rows.size() == 0) throw InvalidInput("row_space_basis: empty matrix");
  Eigen::JacobiSVD<RMatrix> svd(rows, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  if (!(top > 0.0)) throw InvalidInput("subspace of all-zero vectors has rank zero");
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > rel_tol * top) ++rank;
  return svd.matrixV().leftCols(rank);
}

AccessibleFragment accessible_fragment(const GptFragment& frag, double rel_tol) {
  AccessibleFragment acc;
  acc.inclusion_states = row_space_basis(frag.states, rel_tol);
  acc.inclusion_effects = row_space_basis(frag.effects, rel_tol);
  acc.proj_states = frag.states * acc.inclusion_states;
  acc.proj_effects = frag.effects * acc.inclusion_effects;
  acc.depolarizer = depolarizing_map(frag);
  return acc;
}

RMatrix depolarizing_map(const GptFragment& frag) {
  return frag.mm_state * frag.unit_effect.transpose();
}

}  // namespace sembed
