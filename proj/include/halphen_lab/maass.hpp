#ifndef HALPHEN_LAB_MAASS_HPP
#define HALPHEN_LAB_MAASS_HPP

#include "halphen_lab/special.hpp"
#include "halphen_lab/types.hpp"

namespace hl {

/// Sum of Im(tau)^s / |m + n tau|^{2s} over the punctured lattice inside the
/// cutoff; est_error carries the integral tail and boundary allowance.
MaassValue eisenstein_lattice(double s, const ModularPoint& tau, const LatticeSumSpec& spec = {});

/// Same function from the Bessel-Fourier expansion, normalized to agree with
/// eisenstein_lattice. Valid for every s except the poles 0, 1/2, 1.
MaassValue eisenstein_fourier(double s, const ModularPoint& tau, int n_max);

/// n_max large enough that the dropped Fourier modes are below double precision.
int fourier_modes_for(double s, const ModularPoint& tau);

/// Relative residual of y^2 (d_xx + d_yy) E_s - s(s-1) E_s with fourth-order stencils.
double laplacian_eigencheck(double s, const ModularPoint& tau, double h);

} // namespace hl

#endif
