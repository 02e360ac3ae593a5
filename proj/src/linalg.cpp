#include "bimodal/linalg.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace bimodal {

namespace {

constexpr std::array<BasisLabel, kDim> kLabels{{
    {AtomLevel::e, 0, 0},
    {AtomLevel::g, 1, 1},
    {AtomLevel::e, 1, 1},
    {AtomLevel::g, 0, 0},
    {AtomLevel::e, 1, 0},
    {AtomLevel::g, 0, 1},
    {AtomLevel::e, 0, 1},
    {AtomLevel::g, 1, 0},
}};

}  // namespace

BasisLabel label_of(Basis b) { return kLabels[idx(b)]; }

Basis basis_of(const BasisLabel& label) {
  if (label.photons_m1 < 0 || label.photons_m1 > 1 || label.photons_m2 < 0 || label.photons_m2 > 1) {
    throw std::invalid_argument("photon number outside the single-photon space");
  }
  auto it = std::find(kLabels.begin(), kLabels.end(), label);
  return static_cast<Basis>(it - kLabels.begin());
}

StateVector::StateVector(std::initializer_list<Complex> amps) {
  if (amps.size() != kDim) throw std::invalid_argument("StateVector needs exactly 8 amplitudes");
  std::copy(amps.begin(), amps.end(), amps_.begin());
}

StateVector StateVector::basis(Basis b) {
  StateVector s;
  s[b] = 1.0;
  return s;
}

double StateVector::norm_squared() const {
  double n = 0.0;
  for (const auto& c : amps_) n += std::norm(c);
  return n;
}

Propagator Propagator::identity() {
  Propagator u;
  for (std::size_t i = 0; i < kDim; ++i) u(i, i) = 1.0;
  return u;
}

Propagator Propagator::diagonal(const std::array<Complex, kDim>& diag) {
  Propagator u;
  for (std::size_t i = 0; i < kDim; ++i) u(i, i) = diag[i];
  return u;
}

Propagator Propagator::adjoint() const {
  Propagator r;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

Propagator& Propagator::operator+=(const Propagator& o) {
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

Propagator& Propagator::operator-=(const Propagator& o) {
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

Propagator& Propagator::operator*=(Complex s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

Propagator operator+(Propagator a, const Propagator& b) { return a += b; }
Propagator operator-(Propagator a, const Propagator& b) { return a -= b; }
Propagator operator*(Complex s, Propagator a) { return a *= s; }

StateVector apply(const Propagator& u, const StateVector& s) {
  StateVector r;
  for (std::size_t i = 0; i < kDim; ++i) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < kDim; ++j) acc += u(i, j) * s[j];
    r[i] = acc;
  }
  return r;
}

Propagator compose(const Propagator& u_later, const Propagator& u_earlier) {
  Propagator r;
  for (std::size_t i = 0; i < kDim; ++i) {
    for (std::size_t k = 0; k < kDim; ++k) {
      const Complex a = u_later(i, k);
      if (a == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < kDim; ++j) r(i, j) += a * u_earlier(k, j);
    }
  }
  return r;
}

Propagator compose_sequence(std::initializer_list<Propagator> earliest_first) {
  Propagator acc = Propagator::identity();
  for (const auto& u : earliest_first) acc = compose(u, acc);
  return acc;
}

double unitarity_defect(const Propagator& u) {
  const Propagator p = compose(u.adjoint(), u);
  double worst = 0.0;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j)
      worst = std::max(worst, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double max_abs_diff(const Propagator& a, const Propagator& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < kDim * kDim; ++k)
    worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
  return worst;
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < kDim; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

std::ostream& operator<<(std::ostream& os, const Propagator& u) {
  for (std::size_t i = 0; i < kDim; ++i) {
    for (std::size_t j = 0; j < kDim; ++j) os << (j ? " " : "") << u(i, j);
    os << '\n';
  }
  return os;
}

}  // namespace bimodal
