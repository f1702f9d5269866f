#pragma once

#include <functional>

#include "robinfsi/assembly.hpp"
#include "robinfsi/fe_space.hpp"

namespace robinfsi {

/// L2 norm of a discrete field over a geometry snapshot (scalar or vector).
double l2_norm(const FEFunction& f, const Mesh& geom);

/// sqrt(a_S(η,η)) with a_S = 2μ∫D:D + λ∫div·div (spring term excluded).
double s_norm(const FEFunction& eta, double mu, double lambda);

/// L2 norms of f_h − f_exact by quadrature (degree-6 rules).
double l2_error(const FEFunction& f, const Mesh& geom, const VectorField& exact);
double l2_error_scalar(const FEFunction& f, const Mesh& geom, const ScalarField& exact);

/// S-norm of η_h − η_exact from the exact displacement gradient closure.
double s_error(const FEFunction& eta, double mu, double lambda,
               const TensorField& exact_grad);

/// Norms of closures alone (denominators of relative errors).
double l2_norm_closure(const Mesh& geom, const VectorField& f);
double s_norm_closure(const Mesh& geom, double mu, double lambda,
                      const TensorField& grad);

/// e / ref; ZERO_REFERENCE when the denominator vanishes.
double relative_error(double e, double ref);

/// L2 norm of a trace over the tagged boundary edges.
double interface_l2(const FEFunction& f, BoundaryTag tag, const Mesh& geom);

}  // namespace robinfsi
