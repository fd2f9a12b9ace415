#pragma once

#include "dgnn/optics.hpp"

namespace dgnn {

// Angular-spectrum transfer function for one hop, laid out in FFT bin order
// for a padded grid of padded_n samples.
//   propagating band:  exp(i 2 pi d sqrt((n_eff/lambda)^2 - f^2))
//   evanescent band:   exp(-2 pi d sqrt(f^2 - (n_eff/lambda)^2))
Eigen::VectorXcd transfer_spectrum(int padded_n, double pitch, double distance,
                                   double wavelength, double effective_index);

// Scalar free-space propagation over `distance`. The field is zero-padded to
// pad_factor * n before the transform and cropped back afterwards, so energy
// that leaves the padded window is discarded rather than wrapped.
ComplexField1D propagate(const ComplexField1D& field, double distance, double wavelength,
                         double effective_index, int pad_factor = 2);

// Same sandwich with a caller-supplied spectrum (padded FFT bin order).
// `conjugated` applies the conjugate transfer, the adjoint of the forward hop.
Eigen::VectorXcd apply_transfer(const Eigen::VectorXcd& samples, const Eigen::VectorXcd& spectrum,
                                bool conjugated = false);

}  // namespace dgnn
