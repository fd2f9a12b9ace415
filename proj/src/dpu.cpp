#include "dgnn/dpu.hpp"

#include <cmath>
#include <stdexcept>

#include "dgnn/propagation.hpp"

namespace dgnn {

std::vector<double> port_centers(double aperture, int count) {
  std::vector<double> centers(count);
  const double interval = aperture / count;
  for (int j = 0; j < count; ++j) centers[j] = (j + 0.5) * interval;
  return centers;
}

Eigen::VectorXd port_mode(const DpuGeometry& geometry, double center, double halfwidth) {
  const int n = geometry.num_samples();
  const double pitch = geometry.sample_pitch();
  Eigen::VectorXd mode(n);
  for (int s = 0; s < n; ++s) {
    const double x = (s + 0.5) * pitch - center;
    mode(s) = std::exp(-(x * x) / (halfwidth * halfwidth));
  }
  const double power = mode.squaredNorm() * pitch;
  mode /= std::sqrt(power);
  return mode;
}

ComplexField1D inject_ports(const Eigen::VectorXcd& values, const DpuGeometry& geometry,
                            double mode_halfwidth) {
  if (values.size() != geometry.n_in) {
    throw std::invalid_argument("inject_ports: expected " + std::to_string(geometry.n_in) +
                                " port values, got " + std::to_string(values.size()));
  }
  ComplexField1D field;
  field.pitch = geometry.sample_pitch();
  field.origin = 0.0;
  field.samples = Eigen::VectorXcd::Zero(geometry.num_samples());
  const auto centers = port_centers(geometry.aperture(), geometry.n_in);
  for (int j = 0; j < geometry.n_in; ++j) {
    field.samples += values(j) * port_mode(geometry, centers[j], mode_halfwidth).cast<Complex>();
  }
  return field;
}

Eigen::VectorXcd couple_ports(const ComplexField1D& field, const DpuGeometry& geometry,
                              double mode_halfwidth) {
  if (field.samples.size() != geometry.num_samples()) {
    throw std::invalid_argument("couple_ports: field sample count does not match geometry");
  }
  const auto centers = port_centers(geometry.aperture(), geometry.n_out);
  Eigen::VectorXcd out(geometry.n_out);
  for (int j = 0; j < geometry.n_out; ++j) {
    const Eigen::VectorXd mode = port_mode(geometry, centers[j], mode_halfwidth);
    out(j) = (mode.cast<Complex>().conjugate().cwiseProduct(field.samples)).sum() * field.pitch;
  }
  return out;
}

Eigen::VectorXcd group_coefficients(const DpuParams& params, const MetaAtomLut& lut, int layer) {
  const int groups = params.geometry.num_groups();
  const double amp_rail = lut.max_amplitude();
  Eigen::VectorXcd coeffs(groups);
  for (int g = 0; g < groups; ++g) {
    const double w = params.widths(layer, g);
    double amp = lut.amplitude(w);
    double phase = lut.phase(w);
    if (params.has_offsets()) {
      amp = std::clamp(amp + params.amplitude_offset(layer, g), 0.0, amp_rail);
      phase += params.phase_offset(layer, g);
    }
    coeffs(g) = amp * std::polar(1.0, phase);
  }
  return coeffs;
}

Eigen::VectorXcd group_coefficient_derivatives(const DpuParams& params, const MetaAtomLut& lut,
                                               int layer) {
  const int groups = params.geometry.num_groups();
  const double amp_rail = lut.max_amplitude();
  Eigen::VectorXcd derivs(groups);
  for (int g = 0; g < groups; ++g) {
    const double w = params.widths(layer, g);
    if (!params.has_offsets()) {
      derivs(g) = lut.coefficient_derivative(w);
      continue;
    }
    const double raw_amp = lut.amplitude(w) + params.amplitude_offset(layer, g);
    const bool clamped = raw_amp <= 0.0 || raw_amp >= amp_rail;
    const double amp = std::clamp(raw_amp, 0.0, amp_rail);
    const double phase = lut.phase(w) + params.phase_offset(layer, g);
    derivs(g) = ((clamped ? 0.0 : lut.amplitude_slope(w)) +
                 Complex(0.0, 1.0) * amp * lut.phase_slope(w)) *
                std::polar(1.0, phase);
  }
  return derivs;
}

Eigen::VectorXcd expand_groups(const Eigen::VectorXcd& per_group, const DpuGeometry& geometry) {
  if (per_group.size() != geometry.num_groups()) {
    throw std::invalid_argument("expand_groups: expected one value per atom group");
  }
  const int repeat = geometry.group_size * geometry.oversample;
  Eigen::VectorXcd out(geometry.num_samples());
  for (int g = 0; g < per_group.size(); ++g) {
    out.segment(g * repeat, repeat).setConstant(per_group(g));
  }
  return out;
}

ComplexField1D apply_metaline(const ComplexField1D& field, const Eigen::VectorXd& layer_widths,
                              const MetaAtomLut& lut, const DpuGeometry& geometry) {
  if (field.samples.size() != geometry.num_samples()) {
    throw std::invalid_argument("apply_metaline: field sample count does not match geometry");
  }
  if (layer_widths.size() != geometry.num_groups()) {
    throw std::invalid_argument("apply_metaline: expected one width per atom group");
  }
  Eigen::VectorXcd per_group(layer_widths.size());
  for (int g = 0; g < layer_widths.size(); ++g) per_group(g) = lut.coefficient(layer_widths(g));
  ComplexField1D out = field;
  out.samples = field.samples.cwiseProduct(expand_groups(per_group, geometry));
  return out;
}

Eigen::VectorXcd dpu_forward(const Eigen::VectorXcd& inputs, const DpuParams& params,
                             const MetaAtomLut& lut) {
  return DpuEngine(params.geometry).forward(inputs, params, lut);
}

DpuEngine::DpuEngine(const DpuGeometry& geometry) : geometry_(geometry) {
  geometry_.validate();
  const int padded = geometry_.num_samples() * geometry_.pad_factor;
  hop_spectrum_ = transfer_spectrum(padded, geometry_.sample_pitch(), geometry_.layer_distance,
                                    geometry_.wavelength, geometry_.effective_index);
  const auto in_centers = port_centers(geometry_.aperture(), geometry_.n_in);
  const auto out_centers = port_centers(geometry_.aperture(), geometry_.n_out);
  input_modes_.resize(geometry_.num_samples(), geometry_.n_in);
  for (int j = 0; j < geometry_.n_in; ++j) {
    input_modes_.col(j) = port_mode(geometry_, in_centers[j], geometry_.mode_halfwidth);
  }
  output_modes_.resize(geometry_.num_samples(), geometry_.n_out);
  for (int j = 0; j < geometry_.n_out; ++j) {
    output_modes_.col(j) = port_mode(geometry_, out_centers[j], geometry_.mode_halfwidth);
  }
}

Eigen::VectorXcd DpuEngine::run_stack(const Eigen::VectorXcd& start, const DpuParams& params,
                                      const MetaAtomLut& lut,
                                      std::vector<Eigen::VectorXcd>* pre_metaline) const {
  Eigen::VectorXcd field = start;
  for (int layer = 0; layer < geometry_.num_layers; ++layer) {
    field = apply_transfer(field, hop_spectrum_);
    if (pre_metaline) pre_metaline->push_back(field);
    field = field.cwiseProduct(expand_groups(group_coefficients(params, lut, layer), geometry_));
  }
  return apply_transfer(field, hop_spectrum_);
}

Eigen::VectorXcd DpuEngine::forward(const Eigen::VectorXcd& inputs, const DpuParams& params,
                                    const MetaAtomLut& lut) const {
  if (inputs.size() != geometry_.n_in) {
    throw std::invalid_argument("dpu_forward: expected " + std::to_string(geometry_.n_in) +
                                " inputs, got " + std::to_string(inputs.size()));
  }
  if (params.widths.rows() != geometry_.num_layers || params.widths.cols() != geometry_.num_groups()) {
    throw std::invalid_argument("dpu_forward: width matrix shape does not match geometry");
  }
  const Eigen::VectorXcd start = input_modes_.cast<Complex>() * inputs;
  const Eigen::VectorXcd end = run_stack(start, params, lut, nullptr);
  return output_modes_.cast<Complex>().adjoint() * end * geometry_.sample_pitch();
}

Eigen::MatrixXcd DpuEngine::transfer_matrix(const DpuParams& params, const MetaAtomLut& lut) const {
  Eigen::MatrixXcd transfer(geometry_.n_out, geometry_.n_in);
  for (int j = 0; j < geometry_.n_in; ++j) {
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(geometry_.n_in);
    unit(j) = 1.0;
    transfer.col(j) = forward(unit, params, lut);
  }
  return transfer;
}

DpuProbeCache DpuEngine::probe(const DpuParams& params, const MetaAtomLut& lut) const {
  DpuProbeCache cache;
  cache.transfer.resize(geometry_.n_out, geometry_.n_in);
  cache.pre_metaline.resize(geometry_.n_in);
  for (int j = 0; j < geometry_.n_in; ++j) {
    const Eigen::VectorXcd start = input_modes_.col(j).cast<Complex>();
    cache.pre_metaline[j].reserve(geometry_.num_layers);
    const Eigen::VectorXcd end = run_stack(start, params, lut, &cache.pre_metaline[j]);
    cache.transfer.col(j) = output_modes_.cast<Complex>().adjoint() * end * geometry_.sample_pitch();
  }
  return cache;
}

Eigen::MatrixXd DpuEngine::transfer_backward(const DpuParams& params, const MetaAtomLut& lut,
                                             const DpuProbeCache& cache,
                                             const Eigen::MatrixXcd& transfer_grad) const {
  const int layers = geometry_.num_layers;
  const int groups = geometry_.num_groups();
  const int repeat = geometry_.group_size * geometry_.oversample;

  std::vector<Eigen::VectorXcd> coeffs(layers), dcoeffs(layers);
  for (int l = 0; l < layers; ++l) {
    coeffs[l] = expand_groups(group_coefficients(params, lut, l), geometry_);
    dcoeffs[l] = group_coefficient_derivatives(params, lut, l);
  }

  Eigen::MatrixXd d_widths = Eigen::MatrixXd::Zero(layers, groups);
  for (int j = 0; j < geometry_.n_in; ++j) {
    // Adjoint of couple: scatter port gradients back onto the grid.
    Eigen::VectorXcd grad =
        output_modes_.cast<Complex>() * transfer_grad.col(j) * geometry_.sample_pitch();
    for (int l = layers - 1; l >= 0; --l) {
      grad = apply_transfer(grad, hop_spectrum_, /*conjugated=*/true);
      const Eigen::VectorXcd& pre = cache.pre_metaline[j][l];
      // Per-sample coefficient gradient conj(pre) .* grad, reduced per group.
      for (int g = 0; g < groups; ++g) {
        Complex acc(0.0, 0.0);
        const int base = g * repeat;
        for (int s = 0; s < repeat; ++s) {
          acc += std::conj(pre(base + s)) * grad(base + s);
        }
        d_widths(l, g) += (std::conj(acc) * dcoeffs[l](g)).real();
      }
      grad = grad.cwiseProduct(coeffs[l].conjugate());
    }
  }
  return d_widths;
}

}  // namespace dgnn
