#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "dgnn/dpu.hpp"
#include "dgnn/optics.hpp"
#include "dgnn/propagation.hpp"
#include "dgnn/rng.hpp"

using namespace dgnn;

namespace {

DpuGeometry synthetic_geometry() {
  DpuGeometry g;
  g.num_layers = 3;
  g.atoms_per_line = 90;
  g.layer_distance = 20e-6;
  g.n_in = 3;
  g.n_out = 2;
  return g;
}

ComplexField1D gaussian_field(const DpuGeometry& g, double center, double waist) {
  ComplexField1D f;
  f.pitch = g.sample_pitch();
  f.origin = 0.0;
  f.samples.resize(g.num_samples());
  for (int s = 0; s < g.num_samples(); ++s) {
    const double x = f.coordinate(s) - center;
    f.samples(s) = std::exp(-(x * x) / (waist * waist));
  }
  return f;
}

// Independent check: direct summation of the 2-D Rayleigh-Sommerfeld kernel
//   K(xi) = i k d / (2 r) * H1^(1)(k r),  r = sqrt(xi^2 + d^2)
// evaluated sample by sample, no transforms involved.
Eigen::VectorXcd rayleigh_sommerfeld_direct(const ComplexField1D& field, double distance,
                                            double wavelength, double effective_index) {
  const double k = 2.0 * M_PI * effective_index / wavelength;
  const int n = static_cast<int>(field.samples.size());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      if (field.samples(j) == Complex(0.0, 0.0)) continue;
      const double xi = (i - j) * field.pitch;
      const double r = std::sqrt(xi * xi + distance * distance);
      const Complex h1(std::cyl_bessel_j(1.0, k * r), std::cyl_neumann(1.0, k * r));
      const Complex kernel = Complex(0.0, 1.0) * k * distance / (2.0 * r) * h1;
      acc += field.samples(j) * kernel;
    }
    out(i) = acc * field.pitch;
  }
  return out;
}

}  // namespace

TEST_CASE("width to coefficient on the default LUT") {
  const auto lut = MetaAtomLut::linear_default();
  CHECK(lut.coefficient(0.0) == Complex(1.0, 0.0));
  CHECK(std::abs(lut.coefficient(100.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::arg(lut.coefficient(100.0)) == doctest::Approx(1.55).epsilon(1e-12));
  CHECK(std::arg(lut.coefficient(50.0)) == doctest::Approx(0.775).epsilon(1e-12));
  CHECK_THROWS_AS(lut.coefficient(-1.0), std::domain_error);
  CHECK_THROWS_AS(lut.coefficient(100.5), std::domain_error);
}

TEST_CASE("LUT coefficients never exceed the amplitude bound") {
  const auto lut = MetaAtomLut::linear_default();
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double w = rng.uniform(0.0, 100.0);
    CHECK(std::abs(lut.coefficient(w)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("LUT derivative matches finite differences") {
  Eigen::VectorXd w(3), p(3), a(3);
  w << 0.0, 40.0, 100.0;
  p << 0.0, 0.9, 1.55;
  a << 1.0, 0.8, 0.95;
  const MetaAtomLut lut(w, p, a);
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(1.0, 99.0);
    const double h = 1e-4;
    const Complex fd = (lut.coefficient(x + h) - lut.coefficient(x - h)) / (2.0 * h);
    const Complex an = lut.coefficient_derivative(x);
    CHECK(std::abs(fd - an) < 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("propagate over zero distance is the identity") {
  const auto g = synthetic_geometry();
  auto f = gaussian_field(g, 10e-6, 2e-6);
  f.samples(17) = Complex(0.25, -0.75);
  const auto out = propagate(f, 0.0, g.wavelength, g.effective_index, g.pad_factor);
  CHECK(out.samples == f.samples);
}

TEST_CASE("propagating an all-zero field stays zero") {
  const auto g = synthetic_geometry();
  ComplexField1D f;
  f.pitch = g.sample_pitch();
  f.samples = Eigen::VectorXcd::Zero(g.num_samples());
  const auto out = propagate(f, 20e-6, g.wavelength, g.effective_index, g.pad_factor);
  CHECK(out.samples.norm() == 0.0);
}

TEST_CASE("negative propagation distance is a domain error") {
  const auto g = synthetic_geometry();
  const auto f = gaussian_field(g, 10e-6, 2e-6);
  CHECK_THROWS_AS(propagate(f, -1e-6, g.wavelength, g.effective_index), std::domain_error);
}

TEST_CASE("angular spectrum matches direct Rayleigh-Sommerfeld summation") {
  const auto g = synthetic_geometry();
  ComplexField1D f;
  f.pitch = g.sample_pitch();
  f.samples = Eigen::VectorXcd::Zero(g.num_samples());
  f.samples(g.num_samples() / 2) = 1.0;  // point source mid-aperture

  const double d = 20e-6;
  const auto as = propagate(f, d, g.wavelength, g.effective_index, g.pad_factor);
  const auto rs = rayleigh_sommerfeld_direct(f, d, g.wavelength, g.effective_index);
  const double rel = (as.samples - rs).norm() / rs.norm();
  CHECK(rel < 0.02);
}

TEST_CASE("band-limited propagation conserves power") {
  const auto g = synthetic_geometry();
  const auto f = gaussian_field(g, 13.5e-6, 3e-6);
  const auto out = propagate(f, 5e-6, g.wavelength, g.effective_index, g.pad_factor);
  CHECK(std::abs(out.power() - f.power()) / f.power() < 1e-6);
}

TEST_CASE("two hops compose into one") {
  const auto g = synthetic_geometry();
  const auto f = gaussian_field(g, 13.5e-6, 3e-6);
  const auto two = propagate(propagate(f, 3e-6, g.wavelength, g.effective_index, g.pad_factor),
                             4e-6, g.wavelength, g.effective_index, g.pad_factor);
  const auto one = propagate(f, 7e-6, g.wavelength, g.effective_index, g.pad_factor);
  CHECK((two.samples - one.samples).norm() / one.samples.norm() < 1e-9);
}

TEST_CASE("metaline with zero widths is transparent") {
  const auto g = synthetic_geometry();
  const auto lut = MetaAtomLut::linear_default();
  const auto f = gaussian_field(g, 13.5e-6, 3e-6);
  const auto out = apply_metaline(f, Eigen::VectorXd::Zero(g.num_groups()), lut, g);
  CHECK((out.samples - f.samples).norm() == 0.0);
}

TEST_CASE("metaline with full-width slots applies the 1.55 rad phase") {
  const auto g = synthetic_geometry();
  const auto lut = MetaAtomLut::linear_default();
  const auto f = gaussian_field(g, 13.5e-6, 3e-6);
  const auto out =
      apply_metaline(f, Eigen::VectorXd::Constant(g.num_groups(), 100.0), lut, g);
  const Eigen::VectorXcd expect = f.samples * std::polar(1.0, 1.55);
  CHECK((out.samples - expect).norm() / expect.norm() < 1e-12);
}

TEST_CASE("group widths expand to group_size * oversample samples") {
  const auto g = synthetic_geometry();
  Eigen::VectorXcd per_group(g.num_groups());
  for (int i = 0; i < g.num_groups(); ++i) per_group(i) = Complex(i, -i);
  const auto expanded = expand_groups(per_group, g);
  REQUIRE(expanded.size() == g.num_samples());
  const int repeat = g.group_size * g.oversample;
  for (int s = 0; s < g.num_samples(); ++s) {
    CHECK(expanded(s) == per_group(s / repeat));
  }
}

TEST_CASE("metaline rejects a wrong-length width row") {
  const auto g = synthetic_geometry();
  const auto lut = MetaAtomLut::linear_default();
  const auto f = gaussian_field(g, 13.5e-6, 3e-6);
  CHECK_THROWS_AS(apply_metaline(f, Eigen::VectorXd::Zero(7), lut, g), std::invalid_argument);
}

TEST_CASE("port injection places the field at interval centers") {
  DpuGeometry g = synthetic_geometry();
  g.n_in = 2;
  Eigen::VectorXcd values(2);
  values << 1.0, 0.0;
  const auto f = inject_ports(values, g, g.mode_halfwidth);
  int peak = 0;
  f.samples.cwiseAbs().maxCoeff(&peak);
  CHECK(f.coordinate(peak) == doctest::Approx(g.aperture() / 4.0).epsilon(1e-3));

  const auto zero = inject_ports(Eigen::VectorXcd::Zero(2), g, g.mode_halfwidth);
  CHECK(zero.samples.norm() == 0.0);
}

TEST_CASE("inject then couple at zero distance recovers the amplitudes") {
  DpuGeometry g = synthetic_geometry();
  g.n_in = 2;
  g.n_out = 2;
  Eigen::VectorXcd values(2);
  values << 1.0, 1.0;
  const auto f = inject_ports(values, g, g.mode_halfwidth);
  const auto back = couple_ports(f, g, g.mode_halfwidth);
  CHECK(std::abs(back(0) - values(0)) < 1e-6);
  CHECK(std::abs(back(1) - values(1)) < 1e-6);
}

TEST_CASE("coupling against a mode is the normalized self-overlap") {
  DpuGeometry g = synthetic_geometry();
  g.n_out = 3;
  const auto centers = port_centers(g.aperture(), 3);
  ComplexField1D f;
  f.pitch = g.sample_pitch();
  f.samples = port_mode(g, centers[1], g.mode_halfwidth).cast<Complex>();
  const auto out = couple_ports(f, g, g.mode_halfwidth);
  CHECK(std::abs(out(1) - 1.0) < 1e-9);
  CHECK(std::abs(out(0)) < 1e-6);
  CHECK(std::abs(out(2)) < 1e-6);

  ComplexField1D zero = f;
  zero.samples.setZero();
  CHECK(couple_ports(zero, g, g.mode_halfwidth).norm() == 0.0);
}

TEST_CASE("couple_ports is linear in the field") {
  DpuGeometry g = synthetic_geometry();
  Rng rng(3);
  ComplexField1D f1 = gaussian_field(g, 9e-6, 2e-6);
  ComplexField1D f2 = gaussian_field(g, 18e-6, 1.5e-6);
  for (int s = 0; s < g.num_samples(); ++s) {
    f1.samples(s) *= Complex(rng.normal(), rng.normal());
    f2.samples(s) *= Complex(rng.normal(), rng.normal());
  }
  const Complex a(0.7, -0.2), b(-1.1, 0.4);
  ComplexField1D mix = f1;
  mix.samples = a * f1.samples + b * f2.samples;
  const Eigen::VectorXcd lhs = couple_ports(mix, g, g.mode_halfwidth);
  const Eigen::VectorXcd rhs =
      a * couple_ports(f1, g, g.mode_halfwidth) + b * couple_ports(f2, g, g.mode_halfwidth);
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm() + 1e-15);
}

TEST_CASE("dpu_forward is linear and matches its probed matrix") {
  const auto g = synthetic_geometry();
  const auto lut = MetaAtomLut::linear_default();
  Rng rng(21);
  const auto params = DpuParams::random(g, rng);
  const DpuEngine engine(g);

  CHECK(engine.forward(Eigen::VectorXcd::Zero(3), params, lut).norm() == 0.0);

  Eigen::VectorXcd a(3), b(3);
  for (int i = 0; i < 3; ++i) {
    a(i) = Complex(rng.normal(), rng.normal());
    b(i) = Complex(rng.normal(), rng.normal());
  }
  const Eigen::VectorXcd sum = engine.forward(a + b, params, lut);
  const Eigen::VectorXcd parts = engine.forward(a, params, lut) + engine.forward(b, params, lut);
  CHECK((sum - parts).norm() / parts.norm() < 1e-12);

  const Eigen::MatrixXcd m = engine.transfer_matrix(params, lut);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  const Eigen::VectorXcd via_matrix = m * a;
  const Eigen::VectorXcd direct = engine.forward(a, params, lut);
  CHECK((via_matrix - direct).norm() / direct.norm() < 1e-12);
}

TEST_CASE("y coupler algebra") {
  CHECK(y_couple({0, 0}, {0, 0}) == Complex(0, 0));
  CHECK(std::abs(y_couple({1, 0}, {0, 0}) - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(y_couple({1, 0}, {-1, 0})) < 1e-15);
}

TEST_CASE("aggregate_tree equals the closed-form scaled sum") {
  SUBCASE("single input is passed through") {
    Eigen::MatrixXcd m(1, 3);
    m << Complex(1, 2), Complex(-3, 0), Complex(0, 4);
    const auto out = aggregate_tree(m);
    CHECK((out - m.row(0).transpose()).norm() == 0.0);
  }
  SUBCASE("two equal inputs gain sqrt(2)") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(2, 1);
    CHECK(std::abs(aggregate_tree(m)(0) - std::sqrt(2.0)) < 1e-14);
  }
  SUBCASE("eight ones give 2 sqrt(2)") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(8, 1);
    CHECK(std::abs(aggregate_tree(m)(0) - 2.0 * std::sqrt(2.0)) < 1e-12);
  }
  SUBCASE("random sets match sum * tree_scale") {
    Rng rng(5);
    for (int k : {1, 2, 3, 5, 8, 13, 20}) {
      Eigen::MatrixXcd m(k, 2);
      for (int i = 0; i < k; ++i) {
        m(i, 0) = Complex(rng.normal(), rng.normal());
        m(i, 1) = Complex(rng.normal(), rng.normal());
      }
      const Eigen::VectorXcd expect = m.colwise().sum().transpose() * tree_scale(k);
      CHECK((aggregate_tree(m) - expect).norm() < 1e-12 * (1.0 + expect.norm()));
    }
  }
  SUBCASE("empty set is a domain error") {
    CHECK_THROWS_AS(aggregate_tree(Eigen::MatrixXcd(0, 2)), std::domain_error);
  }
}

TEST_CASE("LUT file round trip") {
  Eigen::VectorXd w(3), p(3), a(3);
  w << 0.0, 55.0, 100.0;
  p << 0.0, 1.0, 1.55;
  a << 1.0, 0.9, 0.85;
  const MetaAtomLut lut(w, p, a);
  const auto path = std::filesystem::temp_directory_path() / "lut_roundtrip.txt";
  lut.save(path);
  const auto loaded = MetaAtomLut::load(path);
  CHECK((loaded.width_grid() - lut.width_grid()).norm() == 0.0);
  CHECK((loaded.phase_grid() - lut.phase_grid()).norm() == 0.0);
  CHECK((loaded.amplitude_grid() - lut.amplitude_grid()).norm() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("geometry invariants are enforced") {
  DpuGeometry g = synthetic_geometry();
  g.group_size = 7;  // 90 not divisible by 7
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = synthetic_geometry();
  g.n_in = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = synthetic_geometry();
  g.oversample = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
