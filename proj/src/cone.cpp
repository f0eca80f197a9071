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

#include "sembed/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <boost/dynamic_bitset.hpp>

#include "sembed/errors.hpp"

namespace sembed {
namespace {

using Bits = boost::dynamic_bitset<>;

struct Ray {
  RVector h;
  Bits zeros;  // indices of inserted generators with <g, h> = 0
};

bool lex_less(const RVector& a, const RVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

std::vector<RVector> normalized_unique(const RMatrix& g, double dedup_tol) {
  std::vector<RVector> rows;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double nrm = g.row(i).norm();
    if (!(nrm > 1e-12)) continue;
    rows.emplace_back(g.row(i).transpose() / nrm);
  }
  std::sort(rows.begin(), rows.end(), lex_less);
  std::vector<RVector> unique;
  for (auto& r : rows) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const RVector& u) {
      return (u - r).cwiseAbs().maxCoeff() <= dedup_tol;
    });
    if (!dup) unique.push_back(std::move(r));
  }
  return unique;
}

Eigen::Index numeric_rank(const RMatrix& m, double rel_tol) {
  if (m.rows() == 0) return 0;
  Eigen::ColPivHouseholderQR<RMatrix> qr(m);
  qr.setThreshold(rel_tol);
  return qr.rank();
}

// Pivoted Gram-Schmidt: repeatedly take the generator with the largest
// component orthogonal to those already chosen.
std::vector<std::size_t> initial_basis(const std::vector<RVector>& gens, Eigen::Index k) {
  std::vector<RVector> resid(gens.begin(), gens.end());
  std::vector<std::size_t> chosen;
  std::vector<bool> used(gens.size(), false);
  for (Eigen::Index step = 0; step < k; ++step) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (used[i]) continue;
      const double n = resid[i].norm();
      if (n > best_norm) {
        best_norm = n;
        best = i;
      }
    }
    used[best] = true;
    chosen.push_back(best);
    const RVector q = resid[best] / resid[best].norm();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!used[i]) resid[i] -= q.dot(resid[i]) * q;
    }
  }
  return chosen;
}

// Extreme rays of {h : <g, h> >= 0 for all g}, for a spanning generator set.
std::vector<RVector> dual_extreme_rays(const std::vector<RVector>& gens,
                                       const DoubleDescriptionOptions& opt) {
  const Eigen::Index k = gens.front().size();
  const std::size_t count = gens.size();
  const auto basis = initial_basis(gens, k);

  RMatrix ab(k, k);
  for (Eigen::Index i = 0; i < k; ++i) ab.row(i) = gens[basis[i]].transpose();
  const RMatrix inv = ab.partialPivLu().inverse();

  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    Ray r{inv.col(j).normalized(), Bits(count)};
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i != j) r.zeros.set(basis[i]);
    }
    rays.push_back(std::move(r));
  }

  std::vector<bool> inserted(count, false);
  for (auto b : basis) inserted[b] = true;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < count; ++i) {
    if (!inserted[i]) order.push_back(i);
  }

  const std::size_t needed = k >= 2 ? static_cast<std::size_t>(k - 2) : 0;
  for (std::size_t gi : order) {
    const RVector& g = gens[gi];
    std::vector<double> val(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = g.dot(rays[r].h);
      if (val[r] > opt.zero_tol) {
        pos.push_back(r);
      } else if (val[r] < -opt.zero_tol) {
        neg.push_back(r);
      } else {
        zero.push_back(r);
      }
    }
    inserted[gi] = true;
    if (neg.empty()) {
      for (auto r : zero) rays[r].zeros.set(gi);
      continue;
    }

    std::vector<Ray> next;
    next.reserve(pos.size() + zero.size() + pos.size() * neg.size());
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        Bits common = rays[p].zeros & rays[q].zeros;
        if (common.count() < needed) continue;
        RMatrix sub(static_cast<Eigen::Index>(common.count()), k);
        Eigen::Index row = 0;
        for (auto i = common.find_first(); i != Bits::npos; i = common.find_next(i)) {
          sub.row(row++) = gens[i].transpose();
        }
        if (numeric_rank(sub, opt.rank_rel_tol) != static_cast<Eigen::Index>(needed)) continue;
        RVector h = val[p] * rays[q].h - val[q] * rays[p].h;
        const double nrm = h.norm();
        if (!(nrm > 0.0)) continue;
        common.set(gi);
        next.push_back(Ray{h / nrm, std::move(common)});
      }
    }
    for (std::size_t p : pos) next.push_back(std::move(rays[p]));
    for (std::size_t z : zero) {
      rays[z].zeros.set(gi);
      next.push_back(std::move(rays[z]));
    }
    rays = std::move(next);
  }

  std::vector<RVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.h));
  return out;
}

RMatrix canonical_rows(std::vector<RVector> rows, double dedup_tol, Eigen::Index k) {
  for (auto& r : rows) r.normalize();
  std::sort(rows.begin(), rows.end(), lex_less);
  std::vector<RVector> unique;
  for (auto& r : rows) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const RVector& u) {
      return (u - r).cwiseAbs().maxCoeff() <= dedup_tol;
    });
    if (!dup) unique.push_back(std::move(r));
  }
  RMatrix m(static_cast<Eigen::Index>(unique.size()), k);
  for (std::size_t i = 0; i < unique.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = unique[i].transpose();
  }
  return m;
}

}  // namespace

ConeHRepresentation facet_enumeration(const RMatrix& generators,
                                      const DoubleDescriptionOptions& options) {
  const Eigen::Index k = generators.cols();
  if (k < 1) throw InvalidInput("facet_enumeration: space dimension must be positive");
  auto gens = normalized_unique(generators, options.dedup_tol);
  if (gens.empty()) throw InvalidInput("facet_enumeration: all generators are zero");

  ConeHRepresentation out;
  out.generator_count = static_cast<std::size_t>(generators.rows());
  out.space_dim = static_cast<std::size_t>(k);

  RMatrix stacked(static_cast<Eigen::Index>(gens.size()), k);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    stacked.row(static_cast<Eigen::Index>(i)) = gens[i].transpose();
  }
  Eigen::JacobiSVD<RMatrix> svd(stacked, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > options.rank_rel_tol * sv(0)) ++rank;

  std::vector<RVector> rows;
  if (rank == k) {
    rows = dual_extreme_rays(gens, options);
  } else {
    // Enumerate inside the span, then pin the orthogonal complement.
    const RMatrix span = svd.matrixV().leftCols(rank);
    const RMatrix perp = svd.matrixV().rightCols(k - rank);
    std::vector<RVector> reduced;
    for (const auto& g : gens) reduced.emplace_back((span.transpose() * g).normalized());
    for (auto& h : dual_extreme_rays(reduced, options)) rows.emplace_back(span * h);
    for (Eigen::Index j = 0; j < perp.cols(); ++j) {
      rows.emplace_back(perp.col(j));
      rows.emplace_back(-perp.col(j));
    }
  }
  out.facets = canonical_rows(std::move(rows), options.dedup_tol, k);
  return out;
}

bool cone_contains(const ConeHRepresentation& h, const RVector& v, double tol) {
  if (static_cast<std::size_t>(v.size()) != h.space_dim) {
    throw InvalidInput("cone_contains: dimension mismatch");
  }
  if (h.facets.rows() == 0) return true;
  return (h.facets * v).minCoeff() >= -tol;
}

}  // namespace sembed
