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

#include "ctcsim/deutsch.hpp"

#include <cmath>
#include <stdexcept>

#include "ctcsim/linalg.hpp"

namespace ctcsim {

namespace {

constexpr double kFixedPointResidualTol = 1e-8;
constexpr double kOscillationMatchTol = 1e-10;
constexpr double kOscillationMoveTol = 1e-6;
constexpr std::size_t kOscillationWindow = 8;

std::vector<Complex> vec_row_major(const ComplexMatrix& m) {
  return m.entries();
}

ComplexMatrix unvec_row_major(const std::vector<Complex>& v, std::size_t d) {
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = v[i * d + j];
  }
  return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    }
  }
  return out;
}

/// Last-element oscillation check over a history of loop states.
void detect_oscillation(const std::vector<ComplexMatrix>& history, bool* detected,
                        std::optional<std::size_t>* period) {
  *detected = false;
  period->reset();
  if (history.size() < 3) return;
  const std::size_t last = history.size() - 1;
  if (trace_distance_matrix(history[last], history[last - 1]) <= kOscillationMoveTol) return;
  const std::size_t max_p = std::min(kOscillationWindow, last);
  for (std::size_t p = 2; p <= max_p; ++p) {
    if (trace_distance_matrix(history[last], history[last - p]) <= kOscillationMatchTol) {
      *detected = true;
      *period = p;
      return;
    }
  }
}

}  // namespace

DeutschMap::DeutschMap(Unitary interaction, DensityMatrix system_input)
    : interaction_(std::move(interaction)), system_input_(std::move(system_input)) {
  if (interaction_.subsystem_dims().size() != 2) {
    throw std::invalid_argument("DeutschMap: interaction must declare (system, CTC) slots");
  }
  if (system_input_.dim() != system_dim()) {
    throw std::invalid_argument("DeutschMap: system input side does not match system slot");
  }
}

ComplexMatrix deutsch_map_apply_matrix(const DeutschMap& map, const ComplexMatrix& sigma) {
  const std::size_t dc = map.ctc_dim();
  if (!sigma.is_square() || sigma.rows() != dc) {
    throw std::invalid_argument("deutsch_map_apply: sigma side does not match CTC slot");
  }
  const ComplexMatrix joint = kron(map.system_input().matrix(), sigma);
  const ComplexMatrix& u = map.interaction().matrix();
  const ComplexMatrix evolved = u * joint * u.adjoint();
  return partial_trace_matrix(evolved, {map.system_dim(), dc}, {1});
}

DensityMatrix deutsch_map_apply(const DeutschMap& map, const DensityMatrix& sigma) {
  ComplexMatrix out = deutsch_map_apply_matrix(map, sigma.matrix());
  return DensityMatrix(std::move(out), sigma.subsystem_dims());
}

ComplexMatrix superoperator_matrix(const DeutschMap& map) {
  const std::size_t d = map.ctc_dim();
  ComplexMatrix s(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix unit(d, d);
      unit(i, j) = 1.0;
      const ComplexMatrix image = deutsch_map_apply_matrix(map, unit);
      const std::size_t col = i * d + j;
      for (std::size_t r = 0; r < d * d; ++r) {
        s(r, col) = image(r / d, r % d);
      }
    }
  }
  return s;
}

DensityMatrix ctc_output(const DeutschMap& map, const DensityMatrix& sigma_fixed) {
  const std::size_t dc = map.ctc_dim();
  if (sigma_fixed.dim() != dc) {
    throw std::invalid_argument("ctc_output: sigma side does not match CTC slot");
  }
  const ComplexMatrix joint = kron(map.system_input().matrix(), sigma_fixed.matrix());
  const ComplexMatrix& u = map.interaction().matrix();
  const ComplexMatrix evolved = u * joint * u.adjoint();
  ComplexMatrix out = partial_trace_matrix(evolved, {map.system_dim(), dc}, {0});
  return DensityMatrix(std::move(out), map.system_input().subsystem_dims());
}

DensityMatrix canonical_fixed_point(const DeutschMap& map, const DensityMatrix& seed) {
  const std::size_t d = map.ctc_dim();
  if (seed.dim() != d) {
    throw std::invalid_argument("canonical_fixed_point: seed side does not match CTC slot");
  }
  const std::size_t n = d * d;
  const ComplexMatrix s = superoperator_matrix(map);
  ComplexMatrix s_minus_i = s;
  for (std::size_t i = 0; i < n; ++i) s_minus_i(i, i) -= 1.0;

  // The averaged orbit converges to the component of the start along
  // ker(S - I), with the transient living in range(S - I). Splitting the
  // space that way needs ker(S - I), and range(S - I)^⊥ = ker((S - I)†).
  const std::vector<ComplexMatrix> kernel = nullspace(s_minus_i, kNullspacePivotTol);
  const std::vector<ComplexMatrix> corange = nullspace(s_minus_i.adjoint(), kNullspacePivotTol);
  if (kernel.empty() || kernel.size() != corange.size()) {
    throw std::runtime_error(
        "canonical_fixed_point: fixed-space rank detection failed (kernel dim " +
        std::to_string(kernel.size()) + ", cokernel dim " + std::to_string(corange.size()) + ")");
  }
  const std::size_t k = kernel.size();

  const std::vector<Complex> x = vec_row_major(deutsch_map_apply_matrix(map, seed.matrix()));

  ComplexMatrix gram(k, k);
  std::vector<Complex> rhs(k, Complex(0.0, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::conj(corange[a](i, 0)) * kernel[b](i, 0);
      gram(a, b) = acc;
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(corange[a](i, 0)) * x[i];
    rhs[a] = acc;
  }
  const std::vector<Complex> coeff = solve_linear(gram, rhs);

  std::vector<Complex> proj(n, Complex(0.0, 0.0));
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t i = 0; i < n; ++i) proj[i] += coeff[b] * kernel[b](i, 0);
  }

  ComplexMatrix candidate = hermitian_part(unvec_row_major(proj, d));
  const double tr = candidate.trace().real();
  if (std::abs(tr) < 0.5) {
    throw std::runtime_error("canonical_fixed_point: projected state lost its trace");
  }
  candidate *= Complex(1.0 / tr, 0.0);

  const double residual = max_abs_diff(deutsch_map_apply_matrix(map, candidate), candidate);
  if (residual > kFixedPointResidualTol) {
    throw std::runtime_error("canonical_fixed_point: residual " + std::to_string(residual) +
                             " exceeds bound; the projection did not converge");
  }
  return DensityMatrix(std::move(candidate), seed.subsystem_dims());
}

PowerIterateResult power_iterate(const DeutschMap& map, const DensityMatrix& seed, std::size_t n,
                                 bool averaged) {
  if (seed.dim() != map.ctc_dim()) {
    throw std::invalid_argument("power_iterate: seed side does not match CTC slot");
  }
  std::vector<ComplexMatrix> history;
  history.reserve(std::min<std::size_t>(n, kOscillationWindow + 2) + 1);
  ComplexMatrix current = seed.matrix();
  ComplexMatrix mean = seed.matrix();
  history.push_back(current);

  for (std::size_t step = 1; step <= n; ++step) {
    current = deutsch_map_apply_matrix(map, current);
    if (averaged) {
      // running mean of Phi^1 .. Phi^step
      const double w = 1.0 / static_cast<double>(step);
      if (step == 1) {
        mean = current;
      } else {
        mean *= Complex(1.0 - w, 0.0);
        ComplexMatrix inc = current;
        inc *= Complex(w, 0.0);
        mean += inc;
      }
    }
    history.push_back(current);
    if (history.size() > kOscillationWindow + 2) history.erase(history.begin());
  }

  PowerIterateResult out{
      DensityMatrix(averaged && n > 0 ? mean : current, seed.subsystem_dims()), false, {}};
  detect_oscillation(history, &out.oscillation_detected, &out.period);
  return out;
}

FixedPointReport fixed_point_set(const DeutschMap& map) {
  const std::size_t d = map.ctc_dim();
  const std::size_t n = d * d;
  const ComplexMatrix s = superoperator_matrix(map);
  ComplexMatrix s_minus_i = s;
  for (std::size_t i = 0; i < n; ++i) s_minus_i(i, i) -= 1.0;

  const NullspaceResult ns = nullspace_with_info(s_minus_i, kNullspacePivotTol);

  // The channel commutes with the adjoint, so Hermitian and anti-Hermitian
  // parts of any fixed operator are fixed separately. Splitting each complex
  // basis vector and re-orthonormalizing over real coefficients yields a
  // Hermitian basis whose count is the fixed-space dimension.
  std::vector<ComplexMatrix> candidates;
  for (const auto& v : ns.basis) {
    const ComplexMatrix m = unvec_row_major(v.entries(), d);
    const ComplexMatrix h = hermitian_part(m);
    ComplexMatrix ah(d, d);  // (M - M†) / (2i), Hermitian
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        ah(i, j) = (m(i, j) - std::conj(m(j, i))) / Complex(0.0, 2.0);
      }
    }
    candidates.push_back(h);
    candidates.push_back(ah);
  }

  std::vector<ComplexMatrix> basis;
  for (ComplexMatrix cand : candidates) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) overlap += std::conj(b(i, j)) * cand(i, j);
        }
        // overlap is real for Hermitian pairs; keep only the real part so
        // roundoff in the imaginary part cannot skew the projection
        ComplexMatrix scaled = b;
        scaled *= Complex(overlap.real(), 0.0);
        cand -= scaled;
      }
    }
    const double norm = cand.frobenius_norm();
    if (norm > 1e-6) {
      cand *= Complex(1.0 / norm, 0.0);
      basis.push_back(std::move(cand));
    }
  }

  const DensityMatrix seed = (map.system_dim() == map.ctc_dim())
                                 ? map.system_input().repartitioned({d})
                                 : DensityMatrix::maximally_mixed({d});
  DensityMatrix canonical = canonical_fixed_point(map, seed);
  const double residual =
      max_abs_diff(deutsch_map_apply_matrix(map, canonical.matrix()), canonical.matrix());

  FixedPointReport report{std::move(basis), std::move(canonical), false, residual,
                          ns.rank_ambiguous,  false, {}};
  report.unique = report.fixed_space_basis.size() == 1;

  const PowerIterateResult orbit = power_iterate(map, seed, 32, /*averaged=*/false);
  report.oscillation_detected = orbit.oscillation_detected;
  report.oscillation_period = orbit.period;
  return report;
}

}  // namespace ctcsim
