#pragma once

// Test-only reference models. Everything here is built from ladder operators on the
// tensor product atom x M1 x M2 (each truncated at one quantum) and exponentiated by
// eigendecomposition, so it shares no code path with the library's hand-placed matrices.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "bimodal/linalg.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::Matrix<cd, 8, 8>;
using Vec = Eigen::Matrix<cd, 8, 1>;

// Product index: atom * 4 + n1 * 2 + n2, with atom 0 = g, 1 = e.
inline int product_index(int atom, int n1, int n2) { return atom * 4 + n1 * 2 + n2; }

// Library basis V1..V8 expressed as product indices.
inline const std::array<int, 8>& v_to_product() {
  static const std::array<int, 8> map{
      product_index(1, 0, 0),  // V1 |e,0,0>
      product_index(0, 1, 1),  // V2 |g,1,1>
      product_index(1, 1, 1),  // V3 |e,1,1>
      product_index(0, 0, 0),  // V4 |g,0,0>
      product_index(1, 1, 0),  // V5 |e,1,0>
      product_index(0, 0, 1),  // V6 |g,0,1>
      product_index(1, 0, 1),  // V7 |e,0,1>
      product_index(0, 1, 0),  // V8 |g,1,0>
  };
  return map;
}

inline Eigen::Matrix2cd lowering() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 1) = 1.0;
  return m;
}

inline Mat kron3(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, const Eigen::Matrix2cd& c) {
  Mat out;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      out(i, j) = a(i / 4, j / 4) * b((i / 2) % 2, (j / 2) % 2) * c(i % 2, j % 2);
  return out;
}

struct Operators {
  Mat a1, a2, s_minus, s_z, id;
  Operators() {
    const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd low = lowering();
    Eigen::Matrix2cd sz = Eigen::Matrix2cd::Zero();
    sz(0, 0) = -0.5;
    sz(1, 1) = 0.5;
    a1 = kron3(I, low, I);
    a2 = kron3(I, I, low);
    s_minus = kron3(low, I, I);
    s_z = kron3(sz, I, I);
    id = Mat::Identity();
  }
};

inline const Operators& ops() {
  static const Operators o;
  return o;
}

// Hamiltonian (product basis) in the frame rotating with omega_1 times the total
// excitation number: Delta (S_z + 1/2) - delta n2 + f1 g1-coupling + f2 g2-coupling + f1 f2 lambda H_I.
inline Mat hamiltonian(double detuning, double f1, double omega, double delta, double lambda) {
  const auto& o = ops();
  const double f2 = 1.0 - f1;
  const Mat s_plus = o.s_minus.adjoint();
  Mat h = detuning * (o.s_z + 0.5 * o.id) - delta * (o.a2.adjoint() * o.a2);
  h += f1 * 0.5 * omega * (s_plus * o.a1 + o.a1.adjoint() * o.s_minus);
  h += f2 * 0.5 * omega * (s_plus * o.a2 + o.a2.adjoint() * o.s_minus);
  h += f1 * f2 * lambda * (o.a1.adjoint() * o.a2 + o.a2.adjoint() * o.a1);
  return h;
}

// exp(-i H t) for Hermitian H.
inline Mat evolve(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::Matrix<cd, 8, 1> ph;
  for (int k = 0; k < 8; ++k) ph(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Time-ordered product of midpoint exponentials over n slices of [t0, t1].
inline Mat sliced(const std::function<Mat(double)>& h_at, double t0, double t1, int n) {
  Mat u = Mat::Identity();
  const double dt = (t1 - t0) / n;
  for (int k = 0; k < n; ++k) u = evolve(h_at(t0 + (k + 0.5) * dt), dt) * u;
  return u;
}

// Product-basis matrix -> library propagator (V basis).
inline bimodal::Propagator to_library(const Mat& m) {
  bimodal::Propagator u;
  const auto& map = v_to_product();
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) u(i, j) = m(map[i], map[j]);
  return u;
}

inline Vec from_library(const bimodal::StateVector& s) {
  Vec v = Vec::Zero();
  const auto& map = v_to_product();
  for (std::size_t i = 0; i < 8; ++i) v(map[i]) = s[i];
  return v;
}

inline bimodal::StateVector to_library(const Vec& v) {
  bimodal::StateVector s;
  const auto& map = v_to_product();
  for (std::size_t i = 0; i < 8; ++i) s[i] = v(map[i]);
  return s;
}

// Closed-form constant-detuning two-level propagator for
//   H = [[D/2, W/2], [W/2, -D/2]] (first row: excited),
// exp(-iHt) = cos(Wg t/2) I - i sin(Wg t/2) (D sz + W sx)/Wg, Wg = sqrt(W^2 + D^2).
struct TwoLevel {
  cd ee, eg, ge, gg;
};

inline TwoLevel constant_detuning(double omega, double detuning, double t) {
  const double wg = std::hypot(omega, detuning);
  const double c = std::cos(0.5 * wg * t);
  const double s = wg > 0.0 ? std::sin(0.5 * wg * t) / wg : 0.5 * t;
  const cd i{0.0, 1.0};
  return {c - i * s * detuning, -i * s * omega, -i * s * omega, c + i * s * detuning};
}

// Haar-ish random unitary: exponential of a random Hermitian matrix, in the library basis.
inline bimodal::Propagator random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Mat a;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = cd(n01(rng), n01(rng));
  const Mat h = 0.5 * (a + a.adjoint());
  return to_library(evolve(h, 1.0));
}

inline bimodal::StateVector random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  bimodal::StateVector s;
  double norm = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    s[i] = cd(n01(rng), n01(rng));
    norm += std::norm(s[i]);
  }
  for (std::size_t i = 0; i < 8; ++i) s[i] /= std::sqrt(norm);
  return s;
}

}  // namespace oracle
