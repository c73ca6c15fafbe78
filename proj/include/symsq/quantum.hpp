#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "symsq/bits.hpp"
#include "symsq/concepts.hpp"
#include "symsq/symmetry.hpp"

namespace symsq {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Dimension cap for plain state vectors. Overridable through SYMSQ_MAX_DIM
/// (a power of two, at most 2^16).
inline std::size_t max_state_dim() {
  static const std::size_t cached = [] {
    const char *raw = std::getenv("SYMSQ_MAX_DIM");
    if (raw == nullptr)
      return std::size_t{1} << 16;
    char *end = nullptr;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || value == 0 || (value & (value - 1)) != 0 ||
        value > (1ull << 16))
      throw std::invalid_argument("SYMSQ_MAX_DIM must be a power of two in [1, 2^16]");
    return static_cast<std::size_t>(value);
  }();
  return cached;
}

namespace detail {

inline double hermiticity_defect(const Matrix &m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest |eigenvalue|. Exact eigensolve up to dim 512; above that a
/// deterministic power iteration, which can only under-estimate, so it
/// flags violations without ever rejecting a genuine contraction.
inline double spectral_norm_estimate(const Matrix &m) {
  if (m.rows() <= 512) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  Vector v = Vector::Ones(m.rows());
  for (Eigen::Index k = 0; k < m.rows(); ++k)
    v(k) += cplx(0.25 * std::cos(0.7 * static_cast<double>(k)),
                 0.25 * std::sin(1.3 * static_cast<double>(k)));
  v.normalize();
  double rayleigh = 0.0;
  for (int it = 0; it < 64; ++it) {
    Vector w = m * v;
    const double norm = w.norm();
    if (norm < 1e-300)
      return 0.0;
    rayleigh = norm;
    v = w / norm;
  }
  return rayleigh;
}

} // namespace detail

/// Unit-norm complex amplitude vector.
class StateVector {
public:
  explicit StateVector(Vector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1 || static_cast<std::size_t>(amp_.size()) > max_state_dim())
      throw std::invalid_argument("StateVector: dimension outside [1, max_state_dim]");
    if (std::abs(amp_.norm() - 1.0) > 1e-10)
      throw std::invalid_argument("StateVector: amplitudes are not unit norm");
  }

  Eigen::Index dim() const { return amp_.size(); }
  const Vector &vec() const { return amp_; }

private:
  Vector amp_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityOperator {
public:
  explicit DensityOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
      throw std::invalid_argument("DensityOperator: matrix must be square");
    if (mat_.rows() > 4096)
      throw std::invalid_argument("DensityOperator: dimension above 4096");
    if (detail::hermiticity_defect(mat_) > 1e-10)
      throw std::invalid_argument("DensityOperator: not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > 1e-10 || std::abs(mat_.trace().imag()) > 1e-10)
      throw std::invalid_argument("DensityOperator: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("DensityOperator: negative eigenvalue");
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix &matrix() const { return mat_; }

private:
  Matrix mat_;
};

/// Hermitian operator with spectral norm at most 1, the shape of every
/// quantum statistical query.
class Observable {
public:
  explicit Observable(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
      throw std::invalid_argument("Observable: matrix must be square");
    if (detail::hermiticity_defect(mat_) > 1e-10)
      throw std::invalid_argument("Observable: not Hermitian");
    if (detail::spectral_norm_estimate(mat_) > 1.0 + 1e-9)
      throw std::invalid_argument("Observable: operator norm exceeds 1");
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix &matrix() const { return mat_; }

  bool is_diagonal() const {
    for (Eigen::Index i = 0; i < mat_.rows(); ++i)
      for (Eigen::Index j = 0; j < mat_.cols(); ++j)
        if (i != j && mat_(i, j) != cplx(0.0, 0.0))
          return false;
    return true;
  }

private:
  Matrix mat_;
};

inline Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace detail {

/// Single-qubit Hadamard butterfly on bit q of the index.
inline void hadamard_on_bit(Vector &v, int q) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  const Eigen::Index size = v.size();
  const Eigen::Index mask = Eigen::Index{1} << q;
  for (Eigen::Index base = 0; base < size; base += mask << 1) {
    for (Eigen::Index k = base; k < base + mask; ++k) {
      const cplx a = v(k);
      const cplx b = v(k + mask);
      v(k) = (a + b) * inv_sqrt2;
      v(k + mask) = (a - b) * inv_sqrt2;
    }
  }
}

/// Hadamard on bits [0, count).
inline void hadamard_layer(Vector &v, int count) {
  for (int q = 0; q < count; ++q)
    hadamard_on_bit(v, q);
}

} // namespace detail

/// Quantum example state of a Boolean concept under the uniform input
/// distribution: amplitude 1/sqrt(|X|) at index 2x + f(x).
inline StateVector example_state(const Concept &f) {
  const std::size_t domain = f.domain_size;
  if (domain == 0 || 2 * domain > max_state_dim())
    throw std::invalid_argument("example_state: 2*|X| exceeds the dimension cap");
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(2 * domain));
  const double a = 1.0 / std::sqrt(static_cast<double>(domain));
  for (std::uint64_t x = 0; x < domain; ++x)
    amp(static_cast<Eigen::Index>(2 * x + static_cast<std::uint64_t>(f(x)))) = a;
  return StateVector(std::move(amp));
}

/// Exact block expansion of |psi_f><psi_f| against the |+>,|-> basis of the
/// label qubit: the uniform state u and the phase state phi_f carry the
/// whole projector, and `residual` is the largest deviation entry.
struct PhaseKickback {
  Vector phi;
  Vector u;
  double residual = 0.0;
};

inline PhaseKickback phase_kickback_decompose(const std::vector<int> &truth_table) {
  const std::size_t domain = truth_table.size();
  if (domain == 0 || (domain & (domain - 1)) != 0)
    throw std::invalid_argument("phase_kickback_decompose: truth table length must be a power of two");
  PhaseKickback out;
  const double a = 1.0 / std::sqrt(static_cast<double>(domain));
  out.u = Vector::Constant(static_cast<Eigen::Index>(domain), cplx(a, 0.0));
  out.phi = Vector(static_cast<Eigen::Index>(domain));
  for (std::size_t x = 0; x < domain; ++x) {
    if (truth_table[x] != 0 && truth_table[x] != 1)
      throw std::invalid_argument("phase_kickback_decompose: truth table entries must be 0/1");
    out.phi(static_cast<Eigen::Index>(x)) = truth_table[x] ? cplx(-a, 0.0) : cplx(a, 0.0);
  }

  Vector psi = Vector::Zero(static_cast<Eigen::Index>(2 * domain));
  for (std::size_t x = 0; x < domain; ++x)
    psi(static_cast<Eigen::Index>(2 * x + static_cast<std::size_t>(truth_table[x]))) = a;

  const cplx h = cplx(0.70710678118654752440, 0.0);
  Vector plus(2), minus(2);
  plus << h, h;
  minus << h, -h;
  const Matrix pmm = minus * minus.adjoint();
  const Matrix pmp = minus * plus.adjoint();
  const Matrix ppm = plus * minus.adjoint();
  const Matrix ppp = plus * plus.adjoint();

  const Matrix reconstructed =
      0.5 * (kron(out.phi * out.phi.adjoint(), pmm) + kron(out.phi * out.u.adjoint(), pmp) +
             kron(out.u * out.phi.adjoint(), ppm) + kron(out.u * out.u.adjoint(), ppp));
  out.residual = (psi * psi.adjoint() - reconstructed).cwiseAbs().maxCoeff();
  return out;
}

/// The coherently extended example state with registers (x_A, c_hat, label),
/// most significant first: amplitude 2^{-n^2/2} at
/// (x_A << (n+2)) | (c_hat << 1) | g(x_A).
inline StateVector prep_extend(const ParityConcept &g) {
  const int n = g.n();
  const int bits = n * n + n + 2;
  if (bits > 14)
    throw std::invalid_argument("prep_extend: composed register exceeds 2^14");
  const std::size_t matrices = std::size_t{1} << (n * n);
  Vector amp = Vector::Zero(Eigen::Index{1} << bits);
  const double a = 1.0 / std::sqrt(static_cast<double>(matrices));
  for (std::uint32_t x = 0; x < matrices; ++x) {
    const std::uint32_t c_hat = degree_parity_mask(x, n);
    const std::uint32_t label = static_cast<std::uint32_t>(g.evaluate(x));
    const std::uint64_t index =
        (static_cast<std::uint64_t>(x) << (n + 2)) | (static_cast<std::uint64_t>(c_hat) << 1) | label;
    amp(static_cast<Eigen::Index>(index)) = a;
  }
  return StateVector(std::move(amp));
}

/// Scale relating the raw expectation of the Fourier-mass observable to the
/// Fourier mass itself. The projector sandwich transmits only the label-1
/// branch of the Hadamard-transformed example state, and that branch carries
/// half the norm, so <M_T> = (1/2) sum_{S in T} f_hat(S)^2. Thresholds in
/// the learners are set from this measured factor, never assumed away.
inline double fourier_mass_claimed_scale() { return 2.0; }

/// M_T = H^(m+1) (I x Pi_1) M (I x Pi_1) H^(m+1), with M the projector onto
/// the characters in T. Expectation on an example state of f over {0,1}^m is
/// (1/2) sum_{S in T} f_hat(S)^2.
inline Observable fourier_mass_observable(const std::vector<std::uint32_t> &t_set, int m) {
  if (m < 1 || m > 12)
    throw std::invalid_argument("fourier_mass_observable: m out of range [1,12]");
  const std::size_t chars = std::size_t{1} << m;
  std::vector<std::uint8_t> in_t(chars, 0);
  for (auto s : t_set) {
    if (s >= chars)
      throw std::invalid_argument("fourier_mass_observable: character outside {0,1}^m");
    in_t[s] = 1;
  }
  const Eigen::Index dim = Eigen::Index{1} << (m + 1);
  Matrix mat(dim, dim);
  Vector col(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    col.setZero();
    col(c) = 1.0;
    detail::hadamard_layer(col, m + 1);
    for (Eigen::Index idx = 0; idx < dim; ++idx)
      if ((idx & 1) == 0 || !in_t[static_cast<std::size_t>(idx >> 1)])
        col(idx) = 0.0;
    detail::hadamard_layer(col, m + 1);
    mat.col(c) = col;
  }
  return Observable(std::move(mat));
}

/// Fourier-mass observable for T_i = { sigma : sigma_i = 1 }, whose
/// expectation on a parity example state over uniform {0,1}^m is 1/2 when
/// coordinate i is in the parity support and 0 otherwise. i is 0-based.
inline Observable influence_observable_ideal(int i, int m) {
  if (i < 0 || i >= m)
    throw std::invalid_argument("influence_observable_ideal: coordinate outside [0,m)");
  std::vector<std::uint32_t> t_set;
  t_set.reserve(std::size_t{1} << (m - 1));
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << m); ++s)
    if ((s >> i) & 1u)
      t_set.push_back(s);
  return fourier_mass_observable(t_set, m);
}

namespace detail {

/// B_i on the low n+2 bits: the two Hadamard layers of the Fourier-mass
/// construction, the label-1 and character-i projections, and the matching
/// layers on the way out, applied literally in sequence.
inline void apply_composed_fourier_chain(Vector &v, int n, int i) {
  hadamard_layer(v, n + 2);
  hadamard_layer(v, n + 2);
  const Eigen::Index label_bit = 1;
  const Eigen::Index char_bit = Eigen::Index{1} << (1 + i);
  for (Eigen::Index idx = 0; idx < v.size(); ++idx)
    if ((idx & label_bit) == 0 || (idx & char_bit) == 0)
      v(idx) = 0.0;
  hadamard_layer(v, n + 2);
  hadamard_layer(v, n + 2);
}

} // namespace detail

/// <g'_S| I x B_i |g'_S> computed by statevector simulation, without
/// materializing the observable. i is 0-based in [0, n].
inline double composed_influence_expectation(const ParityConcept &g, int i) {
  const int n = g.n();
  if (i < 0 || i > n)
    throw std::invalid_argument("composed_influence_expectation: coordinate outside [0,n]");
  const StateVector prepared = prep_extend(g);
  Vector w = prepared.vec();
  detail::apply_composed_fourier_chain(w, n, i);
  const cplx value = prepared.vec().dot(w);
  if (std::abs(value.imag()) > 1e-10)
    throw std::runtime_error("composed_influence_expectation: non-real expectation");
  return value.real();
}

/// The composed influence observable pulled back to the plain example-state
/// space C^(2^(n^2+1)): columns are B_i applied through the isometry
/// |x_A, b> -> |x_A, c_hat(x_A), b>. Target-independent by construction.
inline Observable influence_observable_composed(int i, int n) {
  if (n < 1 || n > 3)
    throw std::invalid_argument("influence_observable_composed: n out of range [1,3]");
  if (i < 0 || i > n)
    throw std::invalid_argument("influence_observable_composed: coordinate outside [0,n]");
  const std::size_t matrices = std::size_t{1} << (n * n);
  const Eigen::Index dim = Eigen::Index{1} << (n * n + 1);
  const Eigen::Index ext_dim = Eigen::Index{1} << (n * n + n + 2);
  std::vector<std::uint32_t> c_hats(matrices);
  for (std::uint32_t x = 0; x < matrices; ++x)
    c_hats[x] = degree_parity_mask(x, n);

  const auto lift = [&](std::uint64_t x, std::uint64_t b) {
    return static_cast<Eigen::Index>((x << (n + 2)) |
                                     (static_cast<std::uint64_t>(c_hats[x]) << 1) | b);
  };

  Matrix mat(dim, dim);
  Vector ext(ext_dim);
  for (std::uint64_t x = 0; x < matrices; ++x) {
    for (std::uint64_t b = 0; b < 2; ++b) {
      ext.setZero();
      ext(lift(x, b)) = 1.0;
      detail::apply_composed_fourier_chain(ext, n, i);
      const Eigen::Index col = static_cast<Eigen::Index>(2 * x + b);
      for (std::uint64_t y = 0; y < matrices; ++y)
        for (std::uint64_t c = 0; c < 2; ++c)
          mat(static_cast<Eigen::Index>(2 * y + c), col) = ext(lift(y, c));
    }
  }
  return Observable(std::move(mat));
}

/// Sign of rho - sigma: the projector difference P+ - P- of the spectral
/// decomposition. Zero eigenvalues fall to the negative side, so identical
/// states give -I; the contracted quantity is the gap, not the operator.
inline Observable helstrom_observable(const DensityOperator &rho, const DensityOperator &sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("helstrom_observable: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix() - sigma.matrix());
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index k = 0; k < rho.dim(); ++k) {
    const double sign = solver.eigenvalues()(k) > 0.0 ? 1.0 : -1.0;
    out += sign * (solver.eigenvectors().col(k) * solver.eigenvectors().col(k).adjoint());
  }
  return Observable(std::move(out));
}

inline DensityOperator pure_density(const StateVector &psi) {
  return DensityOperator(psi.vec() * psi.vec().adjoint());
}

inline Observable helstrom_observable(const StateVector &a, const StateVector &b) {
  return helstrom_observable(pure_density(a), pure_density(b));
}

/// Pure-pure fast path sqrt(1 - |<a|b>|^2).
inline double trace_distance(const StateVector &a, const StateVector &b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  const double overlap_sq = std::min(1.0, std::norm(a.vec().dot(b.vec())));
  return std::sqrt(1.0 - overlap_sq);
}

/// General path (1/2) sum |eigenvalues(rho - sigma)|.
inline double trace_distance(const DensityOperator &rho, const DensityOperator &sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix() - sigma.matrix(),
                                               Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

inline DensityOperator mixture_density(const std::vector<StateVector> &states) {
  if (states.empty())
    throw std::invalid_argument("mixture_density: empty ensemble");
  Matrix acc = Matrix::Zero(states.front().dim(), states.front().dim());
  for (const auto &s : states) {
    if (s.dim() != states.front().dim())
      throw std::invalid_argument("mixture_density: dimension mismatch");
    acc += s.vec() * s.vec().adjoint();
  }
  acc /= static_cast<double>(states.size());
  return DensityOperator(std::move(acc));
}

namespace detail {

inline double real_expectation(const cplx &value, double clamp_to) {
  if (std::abs(value.imag()) > 1e-10)
    throw std::runtime_error("expectation: imaginary residue above 1e-10, non-Hermitian construction");
  return std::clamp(value.real(), -clamp_to, clamp_to);
}

} // namespace detail

inline double expectation(const Observable &obs, const StateVector &psi) {
  if (obs.dim() != psi.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  return detail::real_expectation(psi.vec().dot(obs.matrix() * psi.vec()), 1.0);
}

inline double expectation(const Observable &obs, const DensityOperator &rho) {
  if (obs.dim() != rho.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  return detail::real_expectation((obs.matrix() * rho.matrix()).trace(), 1.0);
}

/// The variance-saturating observable: |u><w| against |+><-| plus the
/// adjoint block, with w the uniform superposition over a maximum orbit.
/// Its expectation on any class member is +-sqrt(|O*|/|X|) depending only on
/// the member's bit on that orbit.
inline Observable tight_variance_observable(const OrbitPartition &part) {
  const std::size_t domain = part.domain_size;
  if (2 * domain > max_state_dim())
    throw std::invalid_argument("tight_variance_observable: 2*|X| exceeds the dimension cap");
  std::size_t best = 0;
  for (std::size_t k = 1; k < part.blocks.size(); ++k)
    if (part.blocks[k].size() > part.blocks[best].size())
      best = k;
  const auto &star = part.blocks[best];

  Vector u = Vector::Constant(static_cast<Eigen::Index>(domain),
                              cplx(1.0 / std::sqrt(static_cast<double>(domain)), 0.0));
  Vector w = Vector::Zero(static_cast<Eigen::Index>(domain));
  const double ws = 1.0 / std::sqrt(static_cast<double>(star.size()));
  for (auto x : star)
    w(static_cast<Eigen::Index>(x)) = ws;

  const cplx h = cplx(0.70710678118654752440, 0.0);
  Vector plus(2), minus(2);
  plus << h, h;
  minus << h, -h;
  const Matrix block2 = u * w.adjoint();            // the |+><-| block
  const Matrix out = kron(block2, plus * minus.adjoint()) +
                     kron(block2.adjoint(), minus * plus.adjoint());
  return Observable(out);
}

} // namespace symsq
