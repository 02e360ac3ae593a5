#pragma once

// Dense complex algebra on the fixed 8-state space atom x M1 x M2 with at most
// one photon per mode.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>

namespace bimodal {

using Complex = std::complex<double>;

inline constexpr std::size_t kDim = 8;

/// Basis states in the fixed order used throughout the library.
///   V1=|e,0,0>  V2=|g,1,1>  V3=|e,1,1>  V4=|g,0,0>
///   V5=|e,1,0>  V6=|g,0,1>  V7=|e,0,1>  V8=|g,1,0>
/// The enumerator value is the 0-based storage index.
enum class Basis : std::size_t { V1 = 0, V2, V3, V4, V5, V6, V7, V8 };

enum class AtomLevel { g, e };

struct BasisLabel {
  AtomLevel atom;
  int photons_m1;  // 0 or 1
  int photons_m2;  // 0 or 1

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

constexpr std::size_t idx(Basis b) { return static_cast<std::size_t>(b); }

BasisLabel label_of(Basis b);
/// Throws std::invalid_argument for photon numbers outside {0, 1}.
Basis basis_of(const BasisLabel& label);

class StateVector {
 public:
  StateVector() { amps_.fill(Complex{0.0, 0.0}); }
  StateVector(std::initializer_list<Complex> amps);

  /// Unit vector on one basis state.
  static StateVector basis(Basis b);

  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](Basis b) { return amps_[idx(b)]; }
  const Complex& operator[](Basis b) const { return amps_[idx(b)]; }

  double norm_squared() const;
  double probability(Basis b) const { return std::norm(amps_[idx(b)]); }

  const std::array<Complex, kDim>& amplitudes() const { return amps_; }

 private:
  std::array<Complex, kDim> amps_;
};

/// 8x8 complex matrix, row-major. Entry (i, j) is <V_{i+1}| U |V_{j+1}>.
class Propagator {
 public:
  Propagator() { entries_.fill(Complex{0.0, 0.0}); }

  static Propagator identity();
  static Propagator diagonal(const std::array<Complex, kDim>& diag);

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * kDim + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * kDim + j]; }
  Complex& operator()(Basis i, Basis j) { return (*this)(idx(i), idx(j)); }
  const Complex& operator()(Basis i, Basis j) const { return (*this)(idx(i), idx(j)); }

  Propagator adjoint() const;

  Propagator& operator+=(const Propagator& o);
  Propagator& operator-=(const Propagator& o);
  Propagator& operator*=(Complex s);

  const std::array<Complex, kDim * kDim>& entries() const { return entries_; }

 private:
  std::array<Complex, kDim * kDim> entries_;
};

Propagator operator+(Propagator a, const Propagator& b);
Propagator operator-(Propagator a, const Propagator& b);
Propagator operator*(Complex s, Propagator a);

/// result_i = sum_j u_ij s_j
StateVector apply(const Propagator& u, const StateVector& s);

/// Sequential evolution: `u_earlier` acts first, so the result is u_later * u_earlier.
Propagator compose(const Propagator& u_later, const Propagator& u_earlier);

/// Compose a time-ordered list given earliest first.
Propagator compose_sequence(std::initializer_list<Propagator> earliest_first);

/// max_ij |(U^dagger U - I)_ij|
double unitarity_defect(const Propagator& u);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Propagator& a, const Propagator& b);
double max_abs_diff(const StateVector& a, const StateVector& b);

std::ostream& operator<<(std::ostream& os, const Propagator& u);

}  // namespace bimodal
