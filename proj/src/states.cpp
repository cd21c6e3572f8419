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

#include "ctcsim/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctcsim/linalg.hpp"

namespace ctcsim {

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kNormTol = 1e-10;
constexpr double kBranchDropTol = 1e-14;

void check_dims_nonempty(const std::vector<std::size_t>& dims, const char* what) {
  if (dims.empty()) throw std::invalid_argument(std::string(what) + ": no subsystems declared");
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument(std::string(what) + ": zero subsystem dimension");
  }
}

}  // namespace

std::size_t total_dim(const std::vector<std::size_t>& dims) {
  std::size_t d = 1;
  for (std::size_t x : dims) d *= x;
  return d;
}

std::vector<std::size_t> subsystem_strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    stride[i - 1] = stride[i] * dims[i];
  }
  return stride;
}

PureState::PureState(std::vector<Complex> amplitudes, std::vector<std::size_t> subsystem_dims)
    : amps_(std::move(amplitudes)), dims_(std::move(subsystem_dims)) {
  check_dims_nonempty(dims_, "PureState");
  if (amps_.size() != total_dim(dims_)) {
    throw std::invalid_argument("PureState: amplitude count does not match subsystem dims");
  }
  double n2 = 0.0;
  for (const auto& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("PureState: non-finite amplitude");
    }
    n2 += std::norm(a);
  }
  if (std::abs(std::sqrt(n2) - 1.0) > kNormTol) {
    throw std::invalid_argument("PureState: amplitudes not normalized");
  }
}

PureState PureState::basis_state(std::size_t index, std::vector<std::size_t> subsystem_dims) {
  const std::size_t d = total_dim(subsystem_dims);
  if (index >= d) throw std::invalid_argument("PureState::basis_state: index out of range");
  std::vector<Complex> amps(d, Complex(0.0, 0.0));
  amps[index] = 1.0;
  return PureState(std::move(amps), std::move(subsystem_dims));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, std::vector<std::size_t> subsystem_dims)
    : mat_(std::move(matrix)), dims_(std::move(subsystem_dims)) {
  check_dims_nonempty(dims_, "DensityMatrix");
  if (!mat_.is_square() || mat_.rows() != total_dim(dims_)) {
    throw std::invalid_argument("DensityMatrix: matrix side does not match subsystem dims");
  }
  if (!mat_.all_finite()) throw std::invalid_argument("DensityMatrix: non-finite entry");
  if (!mat_.is_hermitian(kHermitianTol)) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
  }
  const Complex tr = mat_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1 by " +
                                std::to_string(std::abs(tr - Complex(1.0, 0.0))));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const std::size_t d = psi.dim();
  ComplexMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      m(r, c) = psi.amplitudes()[r] * std::conj(psi.amplitudes()[c]);
    }
  }
  return DensityMatrix(std::move(m), psi.subsystem_dims());
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<std::size_t> subsystem_dims) {
  const std::size_t d = total_dim(subsystem_dims);
  ComplexMatrix m = ComplexMatrix::identity(d);
  m *= Complex(1.0 / static_cast<double>(d), 0.0);
  return DensityMatrix(std::move(m), std::move(subsystem_dims));
}

double DensityMatrix::min_eigenvalue() const {
  return hermitian_eigen(mat_).eigenvalues.front();
}

DensityMatrix DensityMatrix::repartitioned(std::vector<std::size_t> subsystem_dims) const {
  if (total_dim(subsystem_dims) != dim()) {
    throw std::invalid_argument("DensityMatrix::repartitioned: dimension mismatch");
  }
  return DensityMatrix(mat_, std::move(subsystem_dims));
}

Unitary::Unitary(ComplexMatrix matrix, std::vector<std::size_t> subsystem_dims)
    : mat_(std::move(matrix)), dims_(std::move(subsystem_dims)) {
  check_dims_nonempty(dims_, "Unitary");
  if (!mat_.is_square() || mat_.rows() != total_dim(dims_)) {
    throw std::invalid_argument("Unitary: matrix side does not match subsystem dims");
  }
  if (!mat_.all_finite()) throw std::invalid_argument("Unitary: non-finite entry");
  const double resid = mat_.unitarity_residual();
  if (resid > kHermitianTol) {
    throw std::invalid_argument("Unitary: U†U deviates from identity by " +
                                std::to_string(resid));
  }
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& mat, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep) {
  check_dims_nonempty(dims, "partial_trace");
  if (!mat.is_square() || mat.rows() != total_dim(dims)) {
    throw std::invalid_argument("partial_trace: matrix side does not match dims");
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set empty");
  std::vector<std::size_t> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end()) {
    throw std::invalid_argument("partial_trace: duplicate keep index");
  }
  if (keep_sorted.back() >= dims.size()) {
    throw std::invalid_argument("partial_trace: keep index out of range");
  }

  std::vector<std::size_t> traced;
  for (std::size_t i = 0, k = 0; i < dims.size(); ++i) {
    if (k < keep_sorted.size() && keep_sorted[k] == i) {
      ++k;
    } else {
      traced.push_back(i);
    }
  }

  const std::vector<std::size_t> stride = subsystem_strides(dims);
  std::size_t dim_keep = 1, dim_traced = 1;
  for (std::size_t i : keep_sorted) dim_keep *= dims[i];
  for (std::size_t i : traced) dim_traced *= dims[i];

  // Offset of each kept (traced) multi-index inside the full index.
  auto offsets_for = [&](const std::vector<std::size_t>& subs, std::size_t count) {
    std::vector<std::size_t> off(count, 0);
    for (std::size_t v = 0; v < count; ++v) {
      std::size_t rem = v;
      std::size_t o = 0;
      for (std::size_t i = subs.size(); i-- > 0;) {
        const std::size_t digit = rem % dims[subs[i]];
        rem /= dims[subs[i]];
        o += digit * stride[subs[i]];
      }
      off[v] = o;
    }
    return off;
  };
  const std::vector<std::size_t> keep_off = offsets_for(keep_sorted, dim_keep);
  const std::vector<std::size_t> traced_off = offsets_for(traced, dim_traced);

  ComplexMatrix out(dim_keep, dim_keep);
  for (std::size_t rk = 0; rk < dim_keep; ++rk) {
    for (std::size_t ck = 0; ck < dim_keep; ++ck) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dim_traced; ++t) {
        acc += mat(keep_off[rk] + traced_off[t], keep_off[ck] + traced_off[t]);
      }
      out(rk, ck) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  ComplexMatrix reduced = partial_trace_matrix(state.matrix(), state.subsystem_dims(), keep_sorted);
  std::vector<std::size_t> new_dims;
  for (std::size_t i : keep_sorted) new_dims.push_back(state.subsystem_dims()[i]);
  return DensityMatrix(std::move(reduced), std::move(new_dims));
}

DensityMatrix apply_unitary(const DensityMatrix& state, const Unitary& u,
                            const std::vector<std::size_t>& targets) {
  const auto& dims = state.subsystem_dims();
  if (targets.size() != u.subsystem_dims().size()) {
    throw std::invalid_argument("apply_unitary: target count does not match unitary slots");
  }
  {
    std::vector<std::size_t> t = targets;
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) {
      throw std::invalid_argument("apply_unitary: duplicate target");
    }
  }
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets[k] >= dims.size()) {
      throw std::invalid_argument("apply_unitary: target index out of range");
    }
    if (dims[targets[k]] != u.subsystem_dims()[k]) {
      throw std::invalid_argument("apply_unitary: target dimension mismatch at slot " +
                                  std::to_string(k));
    }
  }

  const std::size_t big = state.dim();
  const std::size_t small = u.dim();
  const std::vector<std::size_t> stride = subsystem_strides(dims);

  // Mixed-radix offset of each target-slot index inside the full index.
  std::vector<std::size_t> off(small, 0);
  for (std::size_t a = 0; a < small; ++a) {
    std::size_t rem = a;
    std::size_t o = 0;
    for (std::size_t k = targets.size(); k-- > 0;) {
      const std::size_t digit = rem % u.subsystem_dims()[k];
      rem /= u.subsystem_dims()[k];
      o += digit * stride[targets[k]];
    }
    off[a] = o;
  }
  // Target-slot index of every full index, and the index with targets zeroed.
  std::vector<std::size_t> tidx(big), base(big);
  for (std::size_t i = 0; i < big; ++i) {
    std::size_t a = 0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const std::size_t digit = (i / stride[targets[k]]) % dims[targets[k]];
      a = a * u.subsystem_dims()[k] + digit;
    }
    tidx[i] = a;
    base[i] = i - off[a];
  }

  // Row-sparse view of u: permutation-like gates then cost O(D^2) not O(4 D^2).
  std::vector<std::vector<std::pair<std::size_t, Complex>>> u_rows(small);
  for (std::size_t r = 0; r < small; ++r) {
    for (std::size_t c = 0; c < small; ++c) {
      const Complex v = u.matrix()(r, c);
      if (v != Complex(0.0, 0.0)) u_rows[r].push_back({c, v});
    }
  }

  const ComplexMatrix& rho = state.matrix();
  ComplexMatrix tmp(big, big);
  for (std::size_t i = 0; i < big; ++i) {
    Complex* out_row = tmp.row_data(i);
    for (const auto& [ap, coeff] : u_rows[tidx[i]]) {
      const Complex* src = rho.row_data(base[i] + off[ap]);
      for (std::size_t j = 0; j < big; ++j) out_row[j] += coeff * src[j];
    }
  }
  ComplexMatrix out(big, big);
  for (std::size_t i = 0; i < big; ++i) {
    const Complex* in_row = tmp.row_data(i);
    Complex* out_row = out.row_data(i);
    for (std::size_t j = 0; j < big; ++j) {
      Complex acc = 0.0;
      for (const auto& [bp, coeff] : u_rows[tidx[j]]) {
        acc += in_row[base[j] + off[bp]] * std::conj(coeff);
      }
      out_row[j] = acc;
    }
  }
  return DensityMatrix(std::move(out), dims);
}

double trace_distance_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  const EigenDecomposition eig = hermitian_eigen(a - b);
  double s = 0.0;
  for (double w : eig.eigenvalues) s += std::abs(w);
  return 0.5 * s;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.subsystem_dims() != b.subsystem_dims()) {
    throw std::invalid_argument("trace_distance: subsystem dims differ");
  }
  return trace_distance_matrix(a.matrix(), b.matrix());
}

std::vector<MeasurementBranch> measure_computational(const DensityMatrix& state,
                                                     std::size_t subsystem) {
  const auto& dims = state.subsystem_dims();
  if (subsystem >= dims.size()) {
    throw std::invalid_argument("measure_computational: subsystem out of range");
  }
  const std::vector<std::size_t> stride = subsystem_strides(dims);
  const std::size_t d_meas = dims[subsystem];
  const std::size_t big = state.dim();

  auto digit_of = [&](std::size_t i) { return (i / stride[subsystem]) % d_meas; };

  std::vector<MeasurementBranch> out;
  for (std::size_t k = 0; k < d_meas; ++k) {
    double p = 0.0;
    for (std::size_t i = 0; i < big; ++i) {
      if (digit_of(i) == k) p += state.matrix()(i, i).real();
    }
    if (p <= kBranchDropTol) continue;

    ComplexMatrix proj(big, big);
    for (std::size_t i = 0; i < big; ++i) {
      if (digit_of(i) != k) continue;
      for (std::size_t j = 0; j < big; ++j) {
        if (digit_of(j) != k) continue;
        proj(i, j) = state.matrix()(i, j) / p;
      }
    }
    out.push_back(MeasurementBranch{k, p, DensityMatrix(std::move(proj), dims)});
  }
  return out;
}

CorrelationMetrics correlation_metrics(const DensityMatrix& joint) {
  const auto& dims = joint.subsystem_dims();
  if (dims.size() != 2 || dims[0] != 2 || dims[1] != 2) {
    throw std::invalid_argument("correlation_metrics: expected two qubit registers");
  }
  CorrelationMetrics m;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      m.joint_probs[2 * a + b] = std::max(0.0, joint.matrix()(2 * a + b, 2 * a + b).real());
    }
  }
  const auto& p = m.joint_probs;
  m.zz = p[0] - p[1] - p[2] + p[3];

  const double pa[2] = {p[0] + p[1], p[2] + p[3]};
  const double pb[2] = {p[0] + p[2], p[1] + p[3]};
  double mi = 0.0;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const double pab = p[2 * a + b];
      if (pab <= 0.0) continue;
      const double denom = pa[a] * pb[b];
      if (denom <= 0.0) continue;
      mi += pab * std::log2(pab / denom);
    }
  }
  // Clip the roundoff shadow of MI >= 0.
  m.mutual_information_bits = (mi < 0.0 && mi > -1e-9) ? 0.0 : mi;
  return m;
}

}  // namespace ctcsim
