#pragma once

#include <vector>

#include "dgnn/optics.hpp"

namespace dgnn {

// Centers of `count` equal intervals across the aperture.
std::vector<double> port_centers(double aperture, int count);

// Unit-power Gaussian mode (amplitude 1/e at |x - center| = halfwidth),
// normalized so that sum |g|^2 * pitch = 1 on this grid.
Eigen::VectorXd port_mode(const DpuGeometry& geometry, double center, double halfwidth);

// Sum of input modes weighted by the port amplitudes.
ComplexField1D inject_ports(const Eigen::VectorXcd& values, const DpuGeometry& geometry,
                            double mode_halfwidth);

// Overlap of the field with each output mode: out_j = <g_j, field> * pitch.
Eigen::VectorXcd couple_ports(const ComplexField1D& field, const DpuGeometry& geometry,
                              double mode_halfwidth);

// Per-group complex transmission of one metaline layer, LUT plus any
// coefficient-space offsets carried by the params.
Eigen::VectorXcd group_coefficients(const DpuParams& params, const MetaAtomLut& lut, int layer);

// d(group coefficient)/d(width) for one layer. Zero amplitude slope while an
// amplitude offset is clamped at the rail.
Eigen::VectorXcd group_coefficient_derivatives(const DpuParams& params, const MetaAtomLut& lut,
                                               int layer);

// Repeat per-group values across the group_size * oversample samples each
// group covers.
Eigen::VectorXcd expand_groups(const Eigen::VectorXcd& per_group, const DpuGeometry& geometry);

// Multiply the field by the metaline transmission for one width row.
ComplexField1D apply_metaline(const ComplexField1D& field, const Eigen::VectorXd& layer_widths,
                              const MetaAtomLut& lut, const DpuGeometry& geometry);

// Full DPU map: inject -> [propagate -> metaline] x L -> propagate -> couple.
Eigen::VectorXcd dpu_forward(const Eigen::VectorXcd& inputs, const DpuParams& params,
                             const MetaAtomLut& lut);

// Fields entering each metaline for every unit-input probe; enough state to
// run the adjoint pass without recomputing the forward.
struct DpuProbeCache {
  Eigen::MatrixXcd transfer;  // n_out x n_in
  // pre_metaline[probe][layer]: field just before the layer's multiply
  std::vector<std::vector<Eigen::VectorXcd>> pre_metaline;
};

// Reusable engine for one geometry: caches the hop spectrum and port modes.
class DpuEngine {
 public:
  explicit DpuEngine(const DpuGeometry& geometry);

  const DpuGeometry& geometry() const { return geometry_; }

  Eigen::VectorXcd forward(const Eigen::VectorXcd& inputs, const DpuParams& params,
                           const MetaAtomLut& lut) const;

  // n_out x n_in transfer matrix by probing unit inputs.
  Eigen::MatrixXcd transfer_matrix(const DpuParams& params, const MetaAtomLut& lut) const;

  // Same, keeping the per-layer fields needed by transfer_backward.
  DpuProbeCache probe(const DpuParams& params, const MetaAtomLut& lut) const;

  // Reverse-mode pass. `transfer_grad` holds dL/dRe + i dL/dIm per transfer
  // entry; the return value is dL/d(width) per layer and group.
  Eigen::MatrixXd transfer_backward(const DpuParams& params, const MetaAtomLut& lut,
                                    const DpuProbeCache& cache,
                                    const Eigen::MatrixXcd& transfer_grad) const;

 private:
  DpuGeometry geometry_;
  Eigen::VectorXcd hop_spectrum_;      // one layer_distance at padded length
  Eigen::MatrixXd input_modes_;        // n_samples x n_in
  Eigen::MatrixXd output_modes_;       // n_samples x n_out

  Eigen::VectorXcd run_stack(const Eigen::VectorXcd& start, const DpuParams& params,
                             const MetaAtomLut& lut,
                             std::vector<Eigen::VectorXcd>* pre_metaline) const;
};

}  // namespace dgnn
