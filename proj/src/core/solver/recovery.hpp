#pragma once

#include "solver/solve.hpp"

namespace lamlab::solver {

struct RecoveredDerivs {
  std::array<double, 2> grad{};
  std::array<double, 3> hess{};  // uxx, uxy, uyy
};

// Moving-least-squares quadratic fits over same-region nodal values.
// Stencils are gathered in an anisotropically scaled metric (units of
// local cells), so thin strips keep well-conditioned fits. Exact on
// globally quadratic fields.
class DerivativeRecovery {
 public:
  explicit DerivativeRecovery(const FieldSolution& sol);

  // radius in scaled cell units; auto-enlarged x2 up to 3 times before
  // an InsufficientStencil error (NumericError).
  RecoveredDerivs at(int region, int slab, Point2 p, double radius_cells = 2.5) const;

  // true if the vertex touches an element of the region
  bool vertex_in_region(int v, int region) const {
    return (vertex_mask_[static_cast<std::size_t>(v)] >> (region - 1)) & 1u;
  }

 private:
  const FieldSolution& sol_;
  std::vector<std::uint32_t> vertex_mask_;
};

struct FluxJumpRecord {
  int edge_index = 0;
  Point2 midpoint{};
  double lower = 0.0;  // n . (A grad u - f) from below
  double upper = 0.0;  //                    from above
  double jump = 0.0;   // upper - lower
};

struct FluxJumpReport {
  std::vector<FluxJumpRecord> edges;
  double sup_abs_jump = 0.0;
};

// Conormal flux n . (A grad u_h - f) evaluated from both neighbouring
// elements at every interface edge midpoint; n is the unit normal of the
// straight edge, oriented upward.
FluxJumpReport interface_flux_jump(const FieldSolution& sol, const CoefficientModel& coeff,
                                   const ForcingModel& forcing, double t, int slab = 0);

}  // namespace lamlab::solver
