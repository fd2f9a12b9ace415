#include "dgnn/propagation.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace dgnn {

namespace {

Eigen::FFT<double>& fft_engine() {
  // Eigen::FFT caches one plan per transform length internally.
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

Eigen::VectorXcd transfer_spectrum(int padded_n, double pitch, double distance,
                                   double wavelength, double effective_index) {
  const double cutoff = effective_index / wavelength;  // cycles per meter
  const double df = 1.0 / (padded_n * pitch);
  // Near-grazing components oscillate faster in f than the padded grid can
  // sample, so they would wrap around the window instead of leaving it.
  // Zero the transfer beyond the frequency where d(phase)/df hits Nyquist
  // (band-limited angular spectrum), with a raised-cosine rolloff over the
  // last 15% of the kept band to avoid ringing from a hard spectral edge.
  const double slope = 2.0 * distance * df;
  const double f_limit = cutoff / std::sqrt(1.0 + slope * slope);
  const double taper_start = 0.85 * f_limit;
  Eigen::VectorXcd spectrum(padded_n);
  for (int k = 0; k < padded_n; ++k) {
    const int signed_k = (k <= padded_n / 2) ? k : k - padded_n;
    const double f = signed_k * df;
    const double gap = cutoff * cutoff - f * f;
    if (gap >= 0.0) {
      const double af = std::abs(f);
      if (af > f_limit) {
        spectrum(k) = Complex(0.0, 0.0);
        continue;
      }
      Complex h = std::polar(1.0, 2.0 * M_PI * distance * std::sqrt(gap));
      if (af > taper_start) {
        const double t = (af - taper_start) / (f_limit - taper_start);
        h *= 0.5 * (1.0 + std::cos(M_PI * t));
      }
      spectrum(k) = h;
    } else {
      spectrum(k) = std::exp(-2.0 * M_PI * distance * std::sqrt(-gap));
    }
  }
  return spectrum;
}

Eigen::VectorXcd apply_transfer(const Eigen::VectorXcd& samples, const Eigen::VectorXcd& spectrum,
                                bool conjugated) {
  const int n = static_cast<int>(samples.size());
  const int padded_n = static_cast<int>(spectrum.size());
  if (padded_n < n) throw std::invalid_argument("transfer spectrum shorter than field");
  const int lead = (padded_n - n) / 2;

  std::vector<Complex> padded(padded_n, Complex(0.0, 0.0));
  for (int i = 0; i < n; ++i) padded[lead + i] = samples(i);

  std::vector<Complex> freq;
  fft_engine().fwd(freq, padded);
  for (int k = 0; k < padded_n; ++k) {
    freq[k] *= conjugated ? std::conj(spectrum(k)) : spectrum(k);
  }
  std::vector<Complex> back;
  fft_engine().inv(back, freq);

  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i) out(i) = back[lead + i];
  return out;
}

ComplexField1D propagate(const ComplexField1D& field, double distance, double wavelength,
                         double effective_index, int pad_factor) {
  if (distance < 0.0) throw std::domain_error("propagate: distance must be non-negative");
  if (field.pitch <= 0.0 || field.samples.size() < 1) {
    throw std::invalid_argument("propagate: field needs pitch > 0 and at least one sample");
  }
  if (pad_factor < 1) throw std::invalid_argument("propagate: pad_factor must be >= 1");
  if (distance == 0.0) return field;

  const int n = static_cast<int>(field.samples.size());
  const Eigen::VectorXcd spectrum =
      transfer_spectrum(n * pad_factor, field.pitch, distance, wavelength, effective_index);
  ComplexField1D out = field;
  out.samples = apply_transfer(field.samples, spectrum);
  return out;
}

}  // namespace dgnn
