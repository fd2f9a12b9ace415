#pragma once

#include <Eigen/Dense>
#include <complex>
#include <filesystem>
#include <string>

namespace dgnn {

using Complex = std::complex<double>;

// Sampled complex optical amplitude along the transverse axis of a slab.
// Samples are cell-centered: sample s sits at origin + (s + 0.5) * pitch.
struct ComplexField1D {
  Eigen::VectorXcd samples;
  double pitch = 0.0;   // meters per sample
  double origin = 0.0;  // left edge of the sampled window, meters

  double power() const;  // sum |s|^2 * pitch
  double coordinate(int sample) const { return origin + (sample + 0.5) * pitch; }
};

// Meta-atom transmission: slot width [nm] -> amplitude and phase, linearly
// interpolated between grid points. The default table spans phase 0..1.55 rad
// with unit amplitude; a measured curve can be loaded from file.
class MetaAtomLut {
 public:
  MetaAtomLut() = default;
  MetaAtomLut(Eigen::VectorXd widths, Eigen::VectorXd phases, Eigen::VectorXd amplitudes);

  static MetaAtomLut linear_default();
  static MetaAtomLut load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  double phase(double width_nm) const;
  double amplitude(double width_nm) const;
  double phase_slope(double width_nm) const;
  double amplitude_slope(double width_nm) const;
  Complex coefficient(double width_nm) const;
  // d(coefficient)/d(width); the slopes are piecewise constant between grid points.
  Complex coefficient_derivative(double width_nm) const;

  double min_width() const { return widths_(0); }
  double max_width() const { return widths_(widths_.size() - 1); }
  double max_amplitude() const { return amplitudes_.maxCoeff(); }

  const Eigen::VectorXd& width_grid() const { return widths_; }
  const Eigen::VectorXd& phase_grid() const { return phases_; }
  const Eigen::VectorXd& amplitude_grid() const { return amplitudes_; }

 private:
  Eigen::VectorXd widths_;
  Eigen::VectorXd phases_;
  Eigen::VectorXd amplitudes_;

  int segment(double width_nm) const;  // throws std::domain_error outside grid
};

// Static description of one DPU: metaline stack, sampling and port layout.
struct DpuGeometry {
  int num_layers = 3;
  int atoms_per_line = 90;
  double atom_pitch = 300e-9;
  double layer_distance = 20e-6;
  double wavelength = 1.55e-6;     // vacuum wavelength
  double effective_index = 2.85;   // slab mode index
  int n_in = 3;
  int n_out = 2;
  int group_size = 3;              // consecutive atoms sharing one width
  int oversample = 4;              // field samples per atom pitch
  int pad_factor = 2;              // zero-padding multiple before the FFT
  double mode_halfwidth = 0.5e-6;  // 1/e half-width of the waveguide mode

  int num_groups() const { return atoms_per_line / group_size; }
  int num_samples() const { return atoms_per_line * oversample; }
  double aperture() const { return atoms_per_line * atom_pitch; }
  double sample_pitch() const { return atom_pitch / oversample; }

  void validate() const;  // throws std::invalid_argument
  bool operator==(const DpuGeometry&) const = default;
};

// Trainable state of one DPU: one slot width per atom group per layer.
// Optional coefficient-space offsets model fabrication/system error; they
// shift the LUT output, not the widths.
struct DpuParams {
  DpuGeometry geometry;
  Eigen::MatrixXd widths;  // num_layers x num_groups, nm
  bool binary = false;
  Eigen::MatrixXd phase_offset;      // empty or same shape as widths
  Eigen::MatrixXd amplitude_offset;  // empty or same shape as widths

  bool has_offsets() const { return phase_offset.size() > 0; }
  void validate() const;

  static DpuParams zeros(const DpuGeometry& g);
  static DpuParams random(const DpuGeometry& g, class Rng& rng);
};

// 50:50 Y-coupler, lossless symmetric convention.
inline Complex y_couple(Complex a, Complex b) { return (a + b) / std::sqrt(2.0); }

// Pairwise Y-coupler tree over the rows of message_set (k x m), zero-padded
// to the next power of two. Equals column sums / 2^(d/2), d = ceil(log2 k).
Eigen::VectorXcd aggregate_tree(const Eigen::MatrixXcd& message_set);

// Depth of the balanced coupler tree for k inputs.
int tree_depth(int k);
// 2^(-tree_depth(k)/2): the net amplitude scale the tree applies to a sum.
double tree_scale(int k);

}  // namespace dgnn
