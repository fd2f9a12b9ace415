#include "dgnn/optics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dgnn/rng.hpp"

namespace dgnn {

double ComplexField1D::power() const {
  return samples.squaredNorm() * pitch;
}

MetaAtomLut::MetaAtomLut(Eigen::VectorXd widths, Eigen::VectorXd phases,
                         Eigen::VectorXd amplitudes)
    : widths_(std::move(widths)), phases_(std::move(phases)), amplitudes_(std::move(amplitudes)) {
  if (widths_.size() < 2 || widths_.size() != phases_.size() || widths_.size() != amplitudes_.size()) {
    throw std::invalid_argument("meta-atom LUT: need >=2 rows of equal length");
  }
  for (int i = 1; i < widths_.size(); ++i) {
    if (widths_(i) <= widths_(i - 1)) {
      throw std::invalid_argument("meta-atom LUT: width grid must be strictly increasing");
    }
  }
  for (int i = 0; i < amplitudes_.size(); ++i) {
    if (amplitudes_(i) < 0.0 || amplitudes_(i) > 1.0) {
      throw std::invalid_argument("meta-atom LUT: amplitudes must lie in [0, 1]");
    }
  }
}

MetaAtomLut MetaAtomLut::linear_default() {
  Eigen::VectorXd w(2), p(2), a(2);
  w << 0.0, 100.0;
  p << 0.0, 1.55;
  a << 1.0, 1.0;
  return MetaAtomLut(w, p, a);
}

MetaAtomLut MetaAtomLut::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open LUT file: " + file.string());
  std::string header;
  std::getline(in, header);
  if (header.rfind("# metaatom-lut v1", 0) != 0) {
    throw std::runtime_error("LUT file missing '# metaatom-lut v1' header: " + file.string());
  }
  std::vector<double> w, p, a;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double wi, pi, ai = 1.0;
    if (!(ls >> wi >> pi)) {
      throw std::runtime_error("malformed LUT line: " + line);
    }
    ls >> ai;  // optional amplitude column
    w.push_back(wi);
    p.push_back(pi);
    a.push_back(ai);
  }
  const auto n = static_cast<Eigen::Index>(w.size());
  return MetaAtomLut(Eigen::Map<Eigen::VectorXd>(w.data(), n),
                     Eigen::Map<Eigen::VectorXd>(p.data(), n),
                     Eigen::Map<Eigen::VectorXd>(a.data(), n));
}

void MetaAtomLut::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  out << "# metaatom-lut v1\n";
  out.precision(17);
  for (int i = 0; i < widths_.size(); ++i) {
    out << widths_(i) << " " << phases_(i) << " " << amplitudes_(i) << "\n";
  }
}

int MetaAtomLut::segment(double width_nm) const {
  if (!(width_nm >= widths_(0) && width_nm <= widths_(widths_.size() - 1))) {
    throw std::domain_error("slot width " + std::to_string(width_nm) + " nm outside LUT range");
  }
  int lo = 0;
  int hi = static_cast<int>(widths_.size()) - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (widths_(mid) <= width_nm) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // width == last grid point lands in the final segment
  if (lo == static_cast<int>(widths_.size()) - 1) --lo;
  return lo;
}

double MetaAtomLut::phase(double width_nm) const {
  const int s = segment(width_nm);
  const double t = (width_nm - widths_(s)) / (widths_(s + 1) - widths_(s));
  return phases_(s) + t * (phases_(s + 1) - phases_(s));
}

double MetaAtomLut::amplitude(double width_nm) const {
  const int s = segment(width_nm);
  const double t = (width_nm - widths_(s)) / (widths_(s + 1) - widths_(s));
  return amplitudes_(s) + t * (amplitudes_(s + 1) - amplitudes_(s));
}

double MetaAtomLut::phase_slope(double width_nm) const {
  const int s = segment(width_nm);
  return (phases_(s + 1) - phases_(s)) / (widths_(s + 1) - widths_(s));
}

double MetaAtomLut::amplitude_slope(double width_nm) const {
  const int s = segment(width_nm);
  return (amplitudes_(s + 1) - amplitudes_(s)) / (widths_(s + 1) - widths_(s));
}

Complex MetaAtomLut::coefficient(double width_nm) const {
  return amplitude(width_nm) * std::polar(1.0, phase(width_nm));
}

Complex MetaAtomLut::coefficient_derivative(double width_nm) const {
  // d/dw [a(w) e^{i phi(w)}] = (a' + i a phi') e^{i phi}
  return (amplitude_slope(width_nm) +
          Complex(0.0, 1.0) * amplitude(width_nm) * phase_slope(width_nm)) *
         std::polar(1.0, phase(width_nm));
}

void DpuGeometry::validate() const {
  if (num_layers < 1) throw std::invalid_argument("geometry: num_layers must be >= 1");
  if (atoms_per_line < 1) throw std::invalid_argument("geometry: atoms_per_line must be >= 1");
  if (group_size < 1 || atoms_per_line % group_size != 0) {
    throw std::invalid_argument("geometry: atoms_per_line must be divisible by group_size");
  }
  if (atom_pitch <= 0 || layer_distance < 0 || wavelength <= 0 || effective_index <= 0) {
    throw std::invalid_argument("geometry: lengths and index must be positive");
  }
  if (n_in < 1 || n_out < 1 || n_in > atoms_per_line || n_out > atoms_per_line) {
    throw std::invalid_argument("geometry: port counts must lie in [1, atoms_per_line]");
  }
  if (oversample < 1 || pad_factor < 1) {
    throw std::invalid_argument("geometry: oversample and pad_factor must be >= 1");
  }
  if (mode_halfwidth <= 0) throw std::invalid_argument("geometry: mode_halfwidth must be positive");
}

void DpuParams::validate() const {
  geometry.validate();
  if (widths.rows() != geometry.num_layers || widths.cols() != geometry.num_groups()) {
    throw std::invalid_argument("params: width matrix shape does not match geometry");
  }
  for (int l = 0; l < widths.rows(); ++l) {
    for (int g = 0; g < widths.cols(); ++g) {
      const double w = widths(l, g);
      if (binary) {
        if (w != 0.0 && w != 100.0) {
          throw std::invalid_argument("params: binary widths must be 0 or 100 nm");
        }
      } else if (w < 0.0 || w > 100.0) {
        throw std::invalid_argument("params: widths must lie in [0, 100] nm");
      }
    }
  }
  if (has_offsets() && (phase_offset.rows() != widths.rows() || phase_offset.cols() != widths.cols() ||
                        amplitude_offset.rows() != widths.rows() ||
                        amplitude_offset.cols() != widths.cols())) {
    throw std::invalid_argument("params: offset matrices must match width shape");
  }
}

DpuParams DpuParams::zeros(const DpuGeometry& g) {
  g.validate();
  DpuParams p;
  p.geometry = g;
  p.widths = Eigen::MatrixXd::Zero(g.num_layers, g.num_groups());
  return p;
}

DpuParams DpuParams::random(const DpuGeometry& g, Rng& rng) {
  g.validate();
  DpuParams p;
  p.geometry = g;
  p.widths.resize(g.num_layers, g.num_groups());
  for (int l = 0; l < g.num_layers; ++l) {
    for (int j = 0; j < g.num_groups(); ++j) {
      p.widths(l, j) = rng.uniform(0.0, 100.0);
    }
  }
  return p;
}

int tree_depth(int k) {
  if (k < 1) throw std::domain_error("coupler tree needs at least one input");
  int d = 0;
  int span = 1;
  while (span < k) {
    span *= 2;
    ++d;
  }
  return d;
}

double tree_scale(int k) {
  return std::pow(2.0, -0.5 * tree_depth(k));
}

Eigen::VectorXcd aggregate_tree(const Eigen::MatrixXcd& message_set) {
  const int k = static_cast<int>(message_set.rows());
  if (k < 1) throw std::domain_error("aggregate_tree: empty message set");
  const int d = tree_depth(k);
  const int padded = 1 << d;
  Eigen::MatrixXcd level = Eigen::MatrixXcd::Zero(padded, message_set.cols());
  level.topRows(k) = message_set;
  while (level.rows() > 1) {
    Eigen::MatrixXcd next(level.rows() / 2, level.cols());
    for (int r = 0; r < next.rows(); ++r) {
      for (int c = 0; c < next.cols(); ++c) {
        next(r, c) = y_couple(level(2 * r, c), level(2 * r + 1, c));
      }
    }
    level = std::move(next);
  }
  return level.row(0).transpose();
}

}  // namespace dgnn
