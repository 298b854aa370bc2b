#pragma once

// Exact sampling of Haar CUE/COE/CSE eigenphases and their unimodular
// versions.
//
// Matrix models:
//   * Haar U(N): QR of a Ginibre matrix, with the R-diagonal phase fix
//     U = Q diag(r_jj / |r_jj|) that makes the distribution exactly Haar.
//   * Haar SU(N): U = V exp(i (-arg det V + 2 pi k) / N) with V Haar on U(N)
//     and k uniform on {0, ..., N-1}.  A fixed branch k = 0 would bias the
//     eigenphase density by a rigid rotation, so the center element is drawn
//     uniformly (U(N) ~ (SU(N) x U(1)) / Z_N).
//   * COE: W = V V^T, CSE: W = V^D V with V^D = J V^T J^{-1}, J = i sigma_2
//     (x) I_N; the CSE spectrum is doubly degenerate (Kramers).
//
// The unimodular constraint is imposed by the global-rotation projection
//   theta_j -> wrap(theta_j - S/N + 2 pi k / N),  S = wrap(sum theta),
// with k uniform on {0, ..., N-1}.  The circular-ensemble joint density is
// invariant under rigid rotations, so S mod 2pi is uniform and independent of
// the rotation-equivalence class; the projection therefore lands exactly on
// the conditional measure at det = 1.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "unicirc/ensemble.hpp"
#include "unicirc/errors.hpp"
#include "unicirc/phases.hpp"
#include "unicirc/rng.hpp"

namespace unicirc {

using Matrix = Eigen::MatrixXcd;

// dim x dim matrix of iid standard complex Gaussians (E[|z|^2] = 1), filled
// row by row so the draw order is part of the determinism contract.
inline Matrix ginibre(int dim, PhiloxEngine& rng) {
  if (dim < 1) throw InvalidParams("ginibre: dim must be >= 1");
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = complex_gaussian(rng);
    }
  }
  return g;
}

// Haar-distributed U(dim) matrix.
inline Matrix haar_unitary(int dim, PhiloxEngine& rng) {
  if (dim < 1) throw InvalidParams("haar_unitary: dim must be >= 1");
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Matrix g = ginibre(dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix u = qr.householderQ();
    bool ok = true;
    for (int j = 0; j < dim; ++j) {
      const std::complex<double> r = qr.matrixQR()(j, j);
      const double mag = std::abs(r);
      if (mag == 0.0) {
        ok = false;  // probability zero; redraw once
        break;
      }
      u.col(j) *= r / mag;
    }
    if (ok) return u;
  }
  throw EigensolverFailure("haar_unitary: QR produced a zero diagonal twice");
}

// Haar-distributed SU(dim) matrix: |det - 1| <= 1e-10 by construction.
inline Matrix haar_special_unitary(int dim, PhiloxEngine& rng) {
  Matrix u = haar_unitary(dim, rng);
  const double det_arg = std::arg(u.determinant());
  const std::uint64_t k = uniform_below(rng, static_cast<std::uint64_t>(dim));
  const double phase = (-det_arg + kTwoPi * static_cast<double>(k)) / dim;
  u *= std::polar(1.0, phase);
  return u;
}

// Symmetric unitary W = V V^T with V Haar on U(N); eigenphases follow COE(N).
inline Matrix symmetric_unitary(int N, PhiloxEngine& rng) {
  const Matrix v = haar_unitary(N, rng);
  return v * v.transpose();
}

// The symplectic unit J = i sigma_2 (x) I_N = [[0, I], [-I, 0]], size 2N.
inline Matrix symplectic_unit(int N) {
  Matrix j = Matrix::Zero(2 * N, 2 * N);
  j.topRightCorner(N, N) = Matrix::Identity(N, N);
  j.bottomLeftCorner(N, N) = -Matrix::Identity(N, N);
  return j;
}

// Selfdual unitary W = (J V^T J^{-1}) V of size 2N with V Haar on U(2N);
// eigenphases follow CSE(N) with exact Kramers degeneracy.
inline Matrix selfdual_unitary(int N, PhiloxEngine& rng) {
  if (N < 1) throw InvalidParams("selfdual_unitary: N must be >= 1");
  const Matrix v = haar_unitary(2 * N, rng);
  const Matrix j = symplectic_unit(N);
  return j * v.transpose() * j.transpose() * v;  // J^{-1} = J^T
}

// Max-norm residuals used by the structural invariants.
inline double unitarity_residual(const Matrix& u) {
  const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}
inline double symmetry_residual(const Matrix& u) {
  return (u - u.transpose()).cwiseAbs().maxCoeff();
}
inline double selfduality_residual(const Matrix& u) {
  const Matrix j = symplectic_unit(static_cast<int>(u.rows()) / 2);
  return (u - j * u.transpose() * j.transpose()).cwiseAbs().maxCoeff();
}

// Eigenphases of a unitary matrix via a dense non-symmetric eigensolver;
// every eigenvalue modulus must sit within tol of 1.
inline PhaseVector eigenphases(const Matrix& w, double tol = 1e-8) {
  Eigen::ComplexEigenSolver<Matrix> solver(w, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw EigensolverFailure("eigenphases: dense eigensolver did not converge");
  }
  std::vector<double> phases(static_cast<std::size_t>(w.rows()));
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const std::complex<double> lambda = solver.eigenvalues()(i);
    if (std::abs(std::abs(lambda) - 1.0) > tol) {
      throw NotUnitary("eigenphases: eigenvalue modulus " +
                       std::to_string(std::abs(lambda)) +
                       " deviates from 1 beyond tol");
    }
    phases[static_cast<std::size_t>(i)] = std::arg(lambda);
  }
  return make_phase_vector(std::move(phases));
}

// Collapses the doubly degenerate CSE spectrum: 2N sorted phases pair up as
// nearest neighbours (one pairing may straddle the +/-pi seam); each pair is
// replaced by its circular mean.
inline PhaseVector kramers_reduce(const PhaseVector& pv, double tol = 1e-7) {
  const std::size_t n = pv.size();
  if (n % 2 != 0) {
    throw PairingFailure("kramers_reduce: odd number of phases");
  }
  if (n == 0) return pv;
  const auto& p = pv.phases;

  // Two candidate pairings of the sorted circle: aligned (0,1)(2,3)... or
  // shifted (1,2)(3,4)...(last,first) with the last pair across the seam.
  double gap_aligned = 0.0;
  for (std::size_t m = 0; m + 1 < n; m += 2) {
    gap_aligned = std::max(gap_aligned, p[m + 1] - p[m]);
  }
  double gap_shifted = (p[0] + kTwoPi) - p[n - 1];  // seam pair
  for (std::size_t m = 1; m + 1 < n; m += 2) {
    gap_shifted = std::max(gap_shifted, p[m + 1] - p[m]);
  }

  std::vector<double> reduced(n / 2);
  if (gap_aligned <= gap_shifted) {
    if (gap_aligned > tol) {
      throw PairingFailure("kramers_reduce: partner gap " +
                           std::to_string(gap_aligned) +
                           " exceeds tol (input not selfdual?)");
    }
    for (std::size_t m = 0; m < n; m += 2) {
      reduced[m / 2] = 0.5 * (p[m] + p[m + 1]);
    }
  } else {
    if (gap_shifted > tol) {
      throw PairingFailure("kramers_reduce: partner gap " +
                           std::to_string(gap_shifted) +
                           " exceeds tol (input not selfdual?)");
    }
    for (std::size_t m = 1; m + 1 < n; m += 2) {
      reduced[(m - 1) / 2] = 0.5 * (p[m] + p[m + 1]);
    }
    reduced[n / 2 - 1] = wrap_to_pi(0.5 * (p[n - 1] + p[0] + kTwoPi));
  }
  return make_phase_vector(std::move(reduced), pv.constrained);
}

namespace detail {

// Deterministic core of the global-rotation projection with the branch k
// fixed; exposed for tests.
inline PhaseVector unimodular_rotate_k(const PhaseVector& pv, std::uint64_t k) {
  const std::size_t n = pv.size();
  if (n == 0) throw InvalidParams("unimodular_rotate: empty phase vector");
  const double s = wrap_to_pi(pv.phase_sum());
  std::vector<double> rotated(n);
  const double shift = -s / static_cast<double>(n) +
                       kTwoPi * static_cast<double>(k) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    rotated[i] = wrap_to_pi(pv.phases[i] + shift);
  }
  return make_phase_vector(std::move(rotated), /*constrained=*/true);
}

}  // namespace detail

// Projects an unconstrained phase vector onto the unimodular conditional
// measure.  Pairwise phase differences are preserved mod 2pi.
inline PhaseVector unimodular_rotate(const PhaseVector& pv, PhiloxEngine& rng) {
  if (pv.size() == 0) {
    throw InvalidParams("unimodular_rotate: empty phase vector");
  }
  const std::uint64_t k = uniform_below(rng, pv.size());
  return detail::unimodular_rotate_k(pv, k);
}

// The two equivalent routes to unimodular CUE eigenphases.
enum class Beta2Path {
  determinant_correction,  // Haar SU(N) matrix, phases read off directly
  phase_rotation,          // Haar U(N) phases through unimodular_rotate
};

// Draws `count` eigenphase vectors from the requested ensemble.
inline std::vector<PhaseVector> sample_eigenphases(
    const EnsembleSpec& spec, int count, PhiloxEngine& rng,
    Beta2Path beta2_path = Beta2Path::determinant_correction) {
  spec.validate();
  if (!spec.samplable()) {
    throw UnsupportedBeta(
        "sample_eigenphases: matrix models exist for beta in {1, 2, 4}");
  }
  if (count < 1) throw InvalidParams("sample_eigenphases: count must be >= 1");

  std::vector<PhaseVector> batch;
  batch.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PhaseVector pv;
    switch (spec.beta) {
      case 2:
        if (spec.unimodular &&
            beta2_path == Beta2Path::determinant_correction) {
          pv = eigenphases(haar_special_unitary(spec.N, rng));
          pv.constrained = true;
        } else {
          pv = eigenphases(haar_unitary(spec.N, rng));
          if (spec.unimodular) pv = unimodular_rotate(pv, rng);
        }
        break;
      case 1:
        pv = eigenphases(symmetric_unitary(spec.N, rng));
        if (spec.unimodular) pv = unimodular_rotate(pv, rng);
        break;
      case 4:
        pv = kramers_reduce(eigenphases(selfdual_unitary(spec.N, rng)));
        if (spec.unimodular) pv = unimodular_rotate(pv, rng);
        break;
    }
    batch.push_back(std::move(pv));
  }
  return batch;
}

}  // namespace unicirc
