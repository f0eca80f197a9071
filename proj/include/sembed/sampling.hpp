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

// Random states, dichotomic POVMs, unitaries and the fixed projective grid.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sembed/quantum.hpp"

namespace sembed {

/// Counter-addressed random stream: the pair (seed, stream_id) fully
/// determines the sequence, independent of which thread consumes it.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  /// Complex standard normal with E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

struct SamplerConfig {
  int dim = 2;
  bool pure = true;
  double purity_lower = 0.0;  // clamped to 1/d on use
  double purity_upper = 1.0;
  std::uint64_t max_rejections = 1'000'000;

  /// Throws InvalidInput on an inconsistent window.
  void validate() const;
  double lower() const;
  double upper() const;
};

CMatrix haar_unitary(int d, RngStream& rng);
CMatrix euler_unitary(double alpha, double beta, double gamma);
CMatrix euler_qubit_unitary(RngStream& rng);
DensityMatrix haar_pure_state(int d, RngStream& rng);
DensityMatrix ginibre_mixed_state(int d, RngStream& rng);
DensityMatrix sample_state(const SamplerConfig& config, RngStream& rng);
/// Draws E like a state (projective when config.pure) and pairs it with I-E.
DichotomicMeasurement sample_dichotomic_povm(const SamplerConfig& config, RngStream& rng);

struct ProjectiveGrid {
  std::vector<DichotomicMeasurement> measurements;
  std::size_t raw_kets = 0;
  std::size_t distinct_projectors = 0;
  std::size_t effect_count = 0;
};

/// Qubit kets (sin(j pi/20), e^{i k pi/5} cos(j pi/20)), j in 0..9, k in 0..4,
/// deduplicated as projectors and paired with their complements.
ProjectiveGrid fixed_projective_grid();

inline constexpr double kGridDedupTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-10;

bool is_unitary(const CMatrix& u, double tol = kUnitaryTol);
std::vector<Effect> rotate_effects(std::span<const Effect> effects, const CMatrix& u);
std::vector<DichotomicMeasurement> rotate_measurements(
    std::span<const DichotomicMeasurement> measurements, const CMatrix& u);
std::vector<DensityMatrix> rotate_states(std::span<const DensityMatrix> states,
                                         const CMatrix& u);

}  // namespace sembed
