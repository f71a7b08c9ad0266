#pragma once

#include "ifgi/jones.hpp"

namespace ifgi {

/// Closed-form expected counts for n probe photons through a given
/// interferometer and object. The delta_* fields are photon-number
/// changes relative to the empty (identity-object) interferometer, the
/// quantity the port-difference imaging scheme measures; delta_n_cgi is
/// the direct-beam change n(s - 1). For an opaque object with clean
/// ROIs the two conventions coincide per probe photon.
struct ExpectationRecord {
  double n = 0.0;
  double r = 0.5, t = 0.5, gamma = 1.0;
  double expected_c = 0.0;
  double expected_d = 0.0;
  double expected_absorbed = 0.0;
  double delta_c = 0.0;      ///< n * (p_c - p_c_empty)
  double delta_d = 0.0;      ///< n * (p_d - p_d_empty)
  double delta_n_ifgi = 0.0; ///< delta_c - delta_d
  double delta_n_cgi = 0.0;  ///< n * (|J e|^2 - 1)
};

ExpectationRecord expected_counts(double n, const InterferometerSpec& spec,
                                  const ElementMatrix& obj);

/// n (r^2 - r t - 1): photon-number change seen by the port-difference
/// scheme for a fully opaque object. Throws ConfigError unless r+t=1.
double delta_n_ifgi(double n, double r, double t);

struct SplitOptimum {
  double r = 0.0;    ///< input-splitter reflectivity maximizing the gain
  double gain = 0.0; ///< |delta_n_ifgi| / |delta_n_cgi| at that r
};

/// Argmax of |r^2 - r(1-r) - 1| over r in [0,1], computed in closed
/// form and cross-checked by grid refinement; the two routes must agree
/// to 1e-9 or a ContractError is thrown.
SplitOptimum optimal_splitting();

/// Expected destructive-port counts for a pure phase object:
/// 2 n r t (1 - cos phi). Throws ConfigError unless r+t=1.
double phase_signal(double n, double r, double t, double phi);

} // namespace ifgi
