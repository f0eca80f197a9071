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

#include "sembed/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sembed/errors.hpp"

namespace sembed {
namespace {

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream),
                       static_cast<std::uint32_t>(stream >> 32), 0x5EEDu};
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  auto seq = make_seed(seed, stream);
  return std::mt19937_64(seq);
}

CMatrix ginibre(int d, RngStream& rng) {
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

void require_dim(int d) {
  if (d < 2) throw InvalidInput("dimension must be at least 2");
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

Complex RngStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * (1.0 / std::numbers::sqrt2);
}

void SamplerConfig::validate() const {
  require_dim(dim);
  if (pure) return;
  if (!(purity_lower <= purity_upper)) throw InvalidInput("purity_lower exceeds purity_upper");
  if (purity_upper < 1.0 / dim - 1e-12 || purity_lower > 1.0 + 1e-12) {
    throw InvalidInput("purity window lies outside [1/d, 1]");
  }
  if (max_rejections == 0) throw InvalidInput("max_rejections must be positive");
}

double SamplerConfig::lower() const { return std::max(purity_lower, 1.0 / dim); }
double SamplerConfig::upper() const { return std::min(purity_upper, 1.0); }

CMatrix haar_unitary(int d, RngStream& rng) {
  require_dim(d);
  for (;;) {
    const CMatrix z = ginibre(d, rng);
    Eigen::HouseholderQR<CMatrix> qr(z);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    const CMatrix q = qr.householderQ();
    CVector phases(d);
    bool degenerate = false;
    for (int i = 0; i < d; ++i) {
      const double a = std::abs(r(i, i));
      if (a < 1e-300) {
        degenerate = true;
        break;
      }
      phases(i) = r(i, i) / a;
    }
    if (degenerate) continue;
    return q * phases.asDiagonal();
  }
}

CMatrix euler_unitary(double alpha, double beta, double gamma) {
  auto uz = [](double t) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -t / 2);
    m(1, 1) = std::polar(1.0, t / 2);
    return m;
  };
  CMatrix uy(2, 2);
  uy << std::cos(beta / 2), -std::sin(beta / 2), std::sin(beta / 2), std::cos(beta / 2);
  return uz(alpha) * uy * uz(gamma);
}

CMatrix euler_qubit_unitary(RngStream& rng) {
  // Haar measure sin(beta) d(alpha) d(beta) d(gamma): cos(beta) uniform.
  const double alpha = 2 * std::numbers::pi * rng.uniform();
  const double beta = std::acos(1.0 - 2.0 * rng.uniform());
  const double gamma = 2 * std::numbers::pi * rng.uniform();
  return euler_unitary(alpha, beta, gamma);
}

DensityMatrix haar_pure_state(int d, RngStream& rng) {
  const CMatrix u = haar_unitary(d, rng);
  return DensityMatrix::from_ket(u.col(0));
}

DensityMatrix ginibre_mixed_state(int d, RngStream& rng) {
  require_dim(d);
  const CMatrix g = ginibre(d, rng);
  const CMatrix w = g * g.adjoint();
  return DensityMatrix(w / w.trace().real());
}

DensityMatrix sample_state(const SamplerConfig& config, RngStream& rng) {
  config.validate();
  if (config.pure) return haar_pure_state(config.dim, rng);
  const double lo = config.lower();
  const double hi = config.upper();
  for (std::uint64_t attempt = 0; attempt < config.max_rejections; ++attempt) {
    DensityMatrix rho = ginibre_mixed_state(config.dim, rng);
    const double p = purity(rho);
    if (p >= lo && p <= hi) return rho;
  }
  std::ostringstream os;
  os << "no state with purity in [" << lo << ", " << hi << "] after "
     << config.max_rejections << " draws";
  throw SamplingBudgetExceeded(os.str());
}

DichotomicMeasurement sample_dichotomic_povm(const SamplerConfig& config, RngStream& rng) {
  const DensityMatrix m = sample_state(config, rng);
  return make_dichotomic(Effect(m.matrix()));
}

ProjectiveGrid fixed_projective_grid() {
  ProjectiveGrid grid;
  std::vector<CMatrix> projectors;
  auto seen = [&](const CMatrix& p) {
    return std::any_of(projectors.begin(), projectors.end(), [&](const CMatrix& q) {
      return (p - q).cwiseAbs().maxCoeff() <= kGridDedupTol;
    });
  };
  std::vector<CMatrix> kept;
  for (int j = 0; j <= 9; ++j) {
    for (int k = 0; k <= 4; ++k) {
      ++grid.raw_kets;
      CVector ket(2);
      const double theta = j * std::numbers::pi / 20.0;
      ket << std::sin(theta), std::polar(std::cos(theta), k * std::numbers::pi / 5.0);
      const CMatrix p = ket * ket.adjoint();
      if (seen(p)) continue;
      projectors.push_back(p);
      const CMatrix pc = CMatrix::Identity(2, 2) - p;
      // A projector whose complement already heads a measurement adds nothing.
      if (std::any_of(kept.begin(), kept.end(), [&](const CMatrix& q) {
            return (pc - q).cwiseAbs().maxCoeff() <= kGridDedupTol;
          })) {
        continue;
      }
      kept.push_back(p);
      grid.measurements.push_back(make_dichotomic(Effect(p)));
    }
  }
  grid.distinct_projectors = projectors.size();
  grid.effect_count = 2 * grid.measurements.size();
  return grid;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() == 0 || u.rows() != u.cols()) return false;
  const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff() < tol;
}

namespace {
void require_unitary(const CMatrix& u, int d) {
  if (u.rows() != d) throw InvalidInput("rotation: dimension mismatch");
  if (!is_unitary(u)) throw InvalidInput("rotation matrix is not unitary");
}
}  // namespace

std::vector<Effect> rotate_effects(std::span<const Effect> effects, const CMatrix& u) {
  std::vector<Effect> out;
  out.reserve(effects.size());
  for (const auto& e : effects) {
    require_unitary(u, e.dim());
    out.emplace_back(u * e.matrix() * u.adjoint());
  }
  return out;
}

std::vector<DichotomicMeasurement> rotate_measurements(
    std::span<const DichotomicMeasurement> measurements, const CMatrix& u) {
  std::vector<DichotomicMeasurement> out;
  out.reserve(measurements.size());
  for (const auto& m : measurements) {
    require_unitary(u, m.first.dim());
    out.push_back({Effect(u * m.first.matrix() * u.adjoint()),
                   Effect(u * m.second.matrix() * u.adjoint())});
  }
  return out;
}

std::vector<DensityMatrix> rotate_states(std::span<const DensityMatrix> states,
                                         const CMatrix& u) {
  std::vector<DensityMatrix> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    require_unitary(u, s.dim());
    out.emplace_back(u * s.matrix() * u.adjoint());
  }
  return out;
}

}  // namespace sembed
