#include "ifgi/jones.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ifgi/errors.hpp"

namespace ifgi {

double PolarizedAmplitude::norm_sq() const { return std::norm(h) + std::norm(v); }

bool PolarizedAmplitude::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

PolarizedAmplitude PolarizedAmplitude::horizontal() { return {{1.0, 0.0}, {0.0, 0.0}}; }
PolarizedAmplitude PolarizedAmplitude::vertical() { return {{0.0, 0.0}, {1.0, 0.0}}; }

PolarizedAmplitude PolarizedAmplitude::diagonal() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {{inv_sqrt2, 0.0}, {inv_sqrt2, 0.0}};
}

PolarizedAmplitude PolarizedAmplitude::antidiagonal() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {{inv_sqrt2, 0.0}, {-inv_sqrt2, 0.0}};
}

PolarizedAmplitude ElementMatrix::apply(const PolarizedAmplitude& e) const {
  return {hh * e.h + hv * e.v, vh * e.h + vv * e.v};
}

double ElementMatrix::max_singular_value() const {
  // Largest eigenvalue of the Hermitian 2x2 J^dag J.
  const double a = std::norm(hh) + std::norm(vh);
  const double d = std::norm(hv) + std::norm(vv);
  const Complex b = std::conj(hh) * hv + std::conj(vh) * vv;
  const double tr = a + d;
  const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4.0 * std::norm(b)));
  return std::sqrt(std::max(0.0, 0.5 * (tr + disc)));
}

bool ElementMatrix::is_passive(double tol) const {
  return max_singular_value() <= 1.0 + tol;
}

ElementMatrix ElementMatrix::identity() { return {}; }

ElementMatrix ElementMatrix::opaque() { return {{0, 0}, {0, 0}, {0, 0}, {0, 0}}; }

ElementMatrix ElementMatrix::phase(double phi) {
  const Complex p = std::polar(1.0, phi);
  return {p, {0, 0}, {0, 0}, p};
}

ElementMatrix ElementMatrix::rotator(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{c, 0}, {-s, 0}, {s, 0}, {c, 0}};
}

ElementMatrix ElementMatrix::half_wave(double theta) {
  const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  return {{c, 0}, {s, 0}, {s, 0}, {-c, 0}};
}

ElementMatrix ElementMatrix::linear_polarizer(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{c * c, 0}, {c * s, 0}, {c * s, 0}, {s * s, 0}};
}

ElementMatrix standard_element(ElementKind kind, double angle) {
  switch (kind) {
    case ElementKind::identity: return ElementMatrix::identity();
    case ElementKind::opaque: return ElementMatrix::opaque();
    case ElementKind::phase: return ElementMatrix::phase(angle);
    case ElementKind::rotator: return ElementMatrix::rotator(angle);
    case ElementKind::half_wave: return ElementMatrix::half_wave(angle);
    case ElementKind::linear_polarizer: return ElementMatrix::linear_polarizer(angle);
  }
  throw ConfigError("unknown element kind");
}

ElementKind parse_element_kind(std::string_view name) {
  if (name == "identity") return ElementKind::identity;
  if (name == "opaque") return ElementKind::opaque;
  if (name == "phase") return ElementKind::phase;
  if (name == "rotator") return ElementKind::rotator;
  if (name == "half_wave") return ElementKind::half_wave;
  if (name == "linear_polarizer") return ElementKind::linear_polarizer;
  throw ConfigError("unknown element kind: " + std::string(name));
}

void InterferometerSpec::validate() const {
  if (!(r >= 0.0 && r <= 1.0 && t >= 0.0 && t <= 1.0))
    throw ConfigError("splitter ratios must lie in [0,1]");
  if (std::abs(r + t - 1.0) > 1e-12)
    throw ConfigError("splitters are lossless: r + t must equal 1");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ConfigError("interference quality gamma must lie in [0,1]");
  if (!input_pol.is_normalized())
    throw ConfigError("input polarization must be normalized");
}

PortAmplitudes port_amplitudes(const ElementMatrix& obj, const InterferometerSpec& spec) {
  spec.validate();
  const Complex i{0.0, 1.0};
  const PolarizedAmplitude je = obj.apply(spec.input_pol);
  const PolarizedAmplitude& e = spec.input_pol;
  const double rt = std::sqrt(spec.r * spec.t);
  PortAmplitudes out;
  out.c = {i * (spec.r * e.h + spec.t * je.h), i * (spec.r * e.v + spec.t * je.v)};
  out.d = {rt * (je.h - e.h), rt * (je.v - e.v)};
  return out;
}

PortProbabilities port_probabilities(const ElementMatrix& obj, const InterferometerSpec& spec) {
  spec.validate();
  const PolarizedAmplitude& e = spec.input_pol;
  const PolarizedAmplitude je = obj.apply(e);
  const double s = std::norm(je.h) + std::norm(je.v);
  const double x = (std::conj(e.h) * je.h + std::conj(e.v) * je.v).real();
  const double r = spec.r, t = spec.t;

  const double cross = 2.0 * r * t * spec.gamma * x;
  PortProbabilities p;
  p.c = r * r + t * t * s + cross;
  p.d = r * t * (1.0 + s) - cross;
  p.absorbed = t * (1.0 - s);

  constexpr double band = 1e-12;
  for (double raw : {p.c, p.d, p.absorbed}) {
    if (raw < -band || raw > 1.0 + band)
      throw ContractError("port probability outside [0,1] beyond tolerance");
  }
  p.c = std::clamp(p.c, 0.0, 1.0);
  p.d = std::clamp(p.d, 0.0, 1.0);
  p.absorbed = std::clamp(p.absorbed, 0.0, 1.0);
  return p;
}

double interaction_probability(const InterferometerSpec& spec) {
  spec.validate();
  return spec.t;
}

double transmission(const ElementMatrix& obj, const PolarizedAmplitude& e) {
  const PolarizedAmplitude je = obj.apply(e);
  return std::norm(je.h) + std::norm(je.v);
}

} // namespace ifgi
