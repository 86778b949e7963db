#pragma once

// Strong and weak forms of Q = Q+ - Q- for the concentrated kernel on a
// uniform velocity grid.
//
// Every node pair (v_i, v_j) has u = h d for an integer lattice vector d, so the
// cone angle, the scattering directions and the fractional interpolation
// offsets of v' and v_*' depend on (d, phi) only. The gain is therefore
// evaluated as a stencil: one set of trilinear weights per (d, phi), applied
// to every output node at once.

#include "geps/grid_state.hpp"
#include "geps/kernel.hpp"
#include "geps/test_function.hpp"

namespace geps {

enum class Interp { trilinear };

struct QuadratureSpec {
  int m_phi = 16;
  Interp interp = Interp::trilinear;

  /// Throws std::invalid_argument unless m_phi >= 8 and even.
  static QuadratureSpec make(int m_phi);
  void validate() const;
};

/// Q+(f, f) at every node.
Distribution q_gain(const Distribution& f, const KernelParams<double>& params, const QuadratureSpec& quad);

/// Bilinear gain Q+(f, h): f evaluated at v', h at v_*'.
Distribution q_gain(const Distribution& f, const Distribution& h, const KernelParams<double>& params,
                    const QuadratureSpec& quad);

/// (8/eps) mass(f) f.
Distribution q_loss(const Distribution& f, const KernelParams<double>& params);

GridField q_total(const Distribution& f, const KernelParams<double>& params, const QuadratureSpec& quad);

struct WeakForm {
  double value = 0.0;
  /// Same sum with every phi term replaced by its absolute value; the scale
  /// against which cancellation in `value` is judged.
  double magnitude = 0.0;
};

/// int Q(f, f) phi dv from the symmetrized pair sum, phi evaluated exactly at
/// v' and v_*' (no interpolation of f).
WeakForm weak_form_q(const Distribution& f, const TestFunction& phi, const KernelParams<double>& params,
                     const QuadratureSpec& quad);

}  // namespace geps
