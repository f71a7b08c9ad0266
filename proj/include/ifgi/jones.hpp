#pragma once

#include <complex>
#include <string_view>

namespace ifgi {

using Complex = std::complex<double>;

/// Two-component complex field amplitude of one photon mode in the H/V basis.
struct PolarizedAmplitude {
  Complex h{1.0, 0.0};
  Complex v{0.0, 0.0};

  double norm_sq() const;
  /// Input states must satisfy |h|^2 + |v|^2 = 1 within 1e-12.
  bool is_normalized(double tol = 1e-12) const;

  static PolarizedAmplitude horizontal();
  static PolarizedAmplitude vertical();
  static PolarizedAmplitude diagonal();
  static PolarizedAmplitude antidiagonal();
};

/// 2x2 complex operator of one passive optical element (no gain: both
/// singular values <= 1). Row-major in the H/V basis.
struct ElementMatrix {
  Complex hh{1.0, 0.0}, hv{0.0, 0.0};
  Complex vh{0.0, 0.0}, vv{1.0, 0.0};

  PolarizedAmplitude apply(const PolarizedAmplitude& e) const;
  double max_singular_value() const;
  bool is_passive(double tol = 1e-12) const;

  bool operator==(const ElementMatrix&) const = default;

  static ElementMatrix identity();
  static ElementMatrix opaque();
  /// e^{i phi} * I, lossless.
  static ElementMatrix phase(double phi);
  /// Rotation of the polarization plane by theta (radians).
  static ElementMatrix rotator(double theta);
  /// Half-wave plate with fast axis at theta (radians).
  static ElementMatrix half_wave(double theta);
  /// Linear polarizer with transmission axis at theta (radians).
  static ElementMatrix linear_polarizer(double theta);
};

enum class ElementKind { identity, opaque, phase, rotator, half_wave, linear_polarizer };

/// Textbook Jones matrix for a named element. `angle` is the phase for
/// `phase` and the axis/rotation angle (radians) otherwise; ignored for
/// identity and opaque. Throws ConfigError on an unknown kind name.
ElementMatrix standard_element(ElementKind kind, double angle = 0.0);
ElementKind parse_element_kind(std::string_view name);

/// Two-path interferometer with input splitter (reflectivity r,
/// transmissivity t) and exit splitter with the swapped ratios
/// (reflectivity t, transmissivity r). The object sits in the
/// transmission arm. `gamma` scales the coherent cross term and models
/// mode overlap / alignment quality.
struct InterferometerSpec {
  double r = 0.5;
  double t = 0.5;
  double gamma = 1.0;
  PolarizedAmplitude input_pol = PolarizedAmplitude::horizontal();

  /// Throws ConfigError unless r,t in [0,1] with r + t = 1 within 1e-12,
  /// gamma in [0,1], and input_pol normalized.
  void validate() const;
};

/// Unnormalized exit-port amplitudes for one photon. Phase convention:
/// i on reflection, real on transmission.
struct PortAmplitudes {
  PolarizedAmplitude c; ///< constructive port, i*(r*I + t*J)*e_in
  PolarizedAmplitude d; ///< destructive port, sqrt(rt)*(J - I)*e_in
};

PortAmplitudes port_amplitudes(const ElementMatrix& obj, const InterferometerSpec& spec);

/// Per-photon outcome probabilities, exhaustive: c + d + absorbed = 1.
struct PortProbabilities {
  double c = 0.0;
  double d = 0.0;
  double absorbed = 0.0;
};

/// Coherent/incoherent blend. With s = |J e|^2 and x = Re(e^dag J e):
///   p_c = r^2 + t^2 s + 2 r t gamma x
///   p_d = r t (1 + s) - 2 r t gamma x
///   p_absorbed = t (1 - s)
/// Values are clamped to [0,1] after a tolerance check; a raw value
/// outside [-1e-12, 1+1e-12] throws ContractError.
PortProbabilities port_probabilities(const ElementMatrix& obj, const InterferometerSpec& spec);

/// Probability that the photon enters the object arm: t.
double interaction_probability(const InterferometerSpec& spec);

/// |J e|^2: direct-beam transmission of the element for a given input.
double transmission(const ElementMatrix& obj, const PolarizedAmplitude& e);

} // namespace ifgi
