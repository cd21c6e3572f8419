// Copyright 2026 The ctcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctcsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ctcsim {

namespace {

double offdiag_max(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = r + 1; c < a.cols(); ++c) {
      m = std::max(m, std::abs(a(r, c)));
    }
  }
  return m;
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& h) {
  if (!h.is_square()) throw std::invalid_argument("hermitian_eigen: matrix not square");
  if (!h.is_hermitian(kHermitianTol)) {
    throw std::invalid_argument("hermitian_eigen: matrix not Hermitian within tolerance");
  }
  const std::size_t n = h.rows();

  // Symmetrize once so roundoff asymmetry cannot leak into the rotations.
  ComplexMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, a.max_abs());
  const double stop = 1e-13 * scale;
  const int max_sweeps = 100;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag_max(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double beta = std::abs(apq);
        if (beta <= stop * 1e-2) continue;

        // Phase-factored rotation: with P = diag(e^{i phi}, 1) the 2x2 pivot
        // block becomes real symmetric, then a standard Jacobi angle kills
        // the off-diagonal entry. Combined columns:
        //   G[p][p] = c e^{i phi},  G[p][q] = s e^{i phi}
        //   G[q][p] = -s,           G[q][q] = c
        const Complex phase = apq / beta;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * beta);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const Complex gpp = c * phase;
        const Complex gpq = s * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp - akq * s;
          a(k, q) = akp * gpq + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk - s * aqk;
          a(q, k) = std::conj(gpq) * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * gpp - vkq * s;
          v(k, q) = vkp * gpq + vkq * c;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  if (sweep == max_sweeps && offdiag_max(a) > stop) {
    throw std::runtime_error("hermitian_eigen: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) {
      out.eigenvectors(r, k) = v(r, order[k]);
    }
  }
  return out;
}

namespace {

struct Reflector {
  std::size_t offset;      // rows [offset, n) are touched
  std::vector<Complex> v;  // Householder vector, length n - offset
  double tau;              // 2 / |v|^2
};

void apply_reflector_to_vector(const Reflector& h, std::vector<Complex>& x) {
  Complex dot = 0.0;
  for (std::size_t i = 0; i < h.v.size(); ++i) {
    dot += std::conj(h.v[i]) * x[h.offset + i];
  }
  dot *= h.tau;
  for (std::size_t i = 0; i < h.v.size(); ++i) {
    x[h.offset + i] -= dot * h.v[i];
  }
}

}  // namespace

NullspaceResult nullspace_with_info(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw std::invalid_argument("nullspace: matrix not square");
  if (!(tol > 0.0)) throw std::invalid_argument("nullspace: tol must be positive");
  const std::size_t n = m.rows();

  NullspaceResult out;
  if (n == 0) return out;

  // null(m) is the orthogonal complement of range(m†). QR with column
  // pivoting on m† finds that range; the leftover Householder columns span
  // the complement.
  ComplexMatrix r = m.adjoint();
  std::vector<Reflector> reflectors;
  std::size_t rank = 0;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += std::norm(r(i, j));
      const double nj = std::sqrt(s);
      if (nj > best_norm) {
        best_norm = nj;
        best = j;
      }
    }
    out.decision_pivots.push_back(best_norm);
    if (best_norm <= tol) break;
    rank = k + 1;

    if (best != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(r(i, k), r(i, best));
    }

    Reflector refl;
    refl.offset = k;
    refl.v.assign(n - k, Complex(0.0, 0.0));
    for (std::size_t i = k; i < n; ++i) refl.v[i - k] = r(i, k);

    const Complex x0 = refl.v[0];
    const double xnorm = best_norm;
    const Complex alpha = (std::abs(x0) > 0.0) ? -(x0 / std::abs(x0)) * xnorm : Complex(-xnorm, 0.0);
    refl.v[0] -= alpha;
    double vsq = 0.0;
    for (const auto& c : refl.v) vsq += std::norm(c);
    if (vsq == 0.0) {
      // column already aligned with e_k
      r(k, k) = alpha;
      continue;
    }
    refl.tau = 2.0 / vsq;

    for (std::size_t j = k; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += std::conj(refl.v[i - k]) * r(i, j);
      dot *= refl.tau;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= dot * refl.v[i - k];
    }
    reflectors.push_back(std::move(refl));
  }

  for (double p : out.decision_pivots) {
    if (p > tol / 10.0 && p < tol * 10.0) out.rank_ambiguous = true;
  }

  // Q columns rank..n-1: apply the stored reflectors to the tail unit vectors.
  for (std::size_t j = rank; j < n; ++j) {
    std::vector<Complex> col(n, Complex(0.0, 0.0));
    col[j] = 1.0;
    for (auto it = reflectors.rbegin(); it != reflectors.rend(); ++it) {
      apply_reflector_to_vector(*it, col);
    }
    out.basis.push_back(ComplexMatrix::column(col));
  }
  return out;
}

std::vector<ComplexMatrix> nullspace(const ComplexMatrix& m, double tol) {
  return nullspace_with_info(m, tol).basis;
}

std::vector<Complex> solve_linear(const ComplexMatrix& a, const std::vector<Complex>& b) {
  if (!a.is_square() || a.rows() != b.size()) {
    throw std::invalid_argument("solve_linear: shape mismatch");
  }
  const std::size_t n = a.rows();
  ComplexMatrix work = a;
  std::vector<Complex> rhs = b;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(work(i, k)) > std::abs(work(piv, k))) piv = i;
    }
    if (std::abs(work(piv, k)) < 1e-13 * std::max(1.0, work.max_abs())) {
      throw std::runtime_error("solve_linear: singular system");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(work(k, j), work(piv, j));
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = work(i, k) / work(k, k);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t j = k; j < n; ++j) work(i, j) -= f * work(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t ik = n; ik-- > 0;) {
    Complex acc = rhs[ik];
    for (std::size_t j = ik + 1; j < n; ++j) acc -= work(ik, j) * x[j];
    x[ik] = acc / work(ik, ik);
  }
  return x;
}

}  // namespace ctcsim
