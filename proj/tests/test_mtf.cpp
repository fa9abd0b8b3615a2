#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "srlab/mtf.hpp"

using namespace srlab;

namespace {

constexpr double kPi = std::numbers::pi;

double sinc_oracle(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

TEST(Mtf, GeometryInvariants) {
  const GeometryConstants g;
  EXPECT_EQ(g.lr_pixel_pitch_um, 2.0 * g.hr_sample_pitch_um);
  EXPECT_EQ(g.lr_igfov_m, 2.0 * g.hr_gsd_m);
  EXPECT_EQ(g.f_nyq_lr, g.f_nyq_hr / 2.0);
  EXPECT_EQ(g.lr_to_hr(), 2.0);
}

TEST(Mtf, LpmmConversion) {
  EXPECT_DOUBLE_EQ(lpmm_to_cycles_per_hr_sample(125.0), 0.5);
  EXPECT_DOUBLE_EQ(lpmm_to_cycles_per_hr_sample(62.5), 0.25);
  EXPECT_EQ(lpmm_to_cycles_per_hr_sample(0.0), 0.0);
  EXPECT_THROW(lpmm_to_cycles_per_hr_sample(-1.0), std::invalid_argument);
}

TEST(Mtf, Diffraction) {
  EXPECT_DOUBLE_EQ(diffraction_mtf(0.0), 1.0);
  EXPECT_EQ(diffraction_mtf(1.0), 0.0);
  EXPECT_EQ(diffraction_mtf(1.7), 0.0);
  EXPECT_NEAR(diffraction_mtf(0.5), (2.0 / kPi) * (kPi / 3.0 - 0.5 * std::sqrt(0.75)), 1e-12);
  EXPECT_NEAR(diffraction_mtf(0.5), 0.39100, 1e-5);
  EXPECT_NEAR(diffraction_cutoff_lpmm(0.5, 10.0), 200.0, 1e-9);
  EXPECT_NEAR(diffraction_blur_diameter_um(0.5, 10.0), 12.2, 1e-12);
}

TEST(Mtf, Optics) {
  EXPECT_EQ(optics_mtf(0.0, 0.3), 1.0);
  EXPECT_NEAR(optics_mtf(0.5, 0.3), 0.3, 1e-15);
  EXPECT_NEAR(optics_mtf(0.25, 0.3), std::sqrt(0.3), 1e-12);
  EXPECT_NEAR(optics_mtf(0.25, 0.3), 0.5477, 1e-4);
  EXPECT_THROW(optics_mtf(0.1, 0.0), std::invalid_argument);
}

TEST(Mtf, FootprintAndSampling) {
  EXPECT_EQ(footprint_mtf(0.0, 2.0), 1.0);
  EXPECT_NEAR(footprint_mtf(0.5, 2.0), 0.0, 1e-15);
  EXPECT_NEAR(footprint_mtf(0.25, 2.0), 2.0 / kPi, 1e-12);
  EXPECT_NEAR(footprint_mtf(0.25, 2.0), 0.63662, 1e-5);
  EXPECT_EQ(sampling_mtf(0.0, 2.0), 1.0);
  EXPECT_NEAR(sampling_mtf(0.25, 2.0), 0.63662, 1e-5);
  EXPECT_NEAR(sampling_mtf(0.5, 1.0), 0.63662, 1e-5);
  // Magnitude past the first null.
  EXPECT_NEAR(footprint_mtf(0.75, 2.0), std::abs(sinc_oracle(1.5 * kPi)), 1e-12);
}

TEST(Mtf, Smear) {
  EXPECT_NEAR(smear_mtf(0.5, 0.5, 1), 0.63662, 0.01);
  EXPECT_NEAR(smear_mtf(0.25, 0.5, 1), 0.90032, 0.01);
  EXPECT_NEAR(smear_mtf(0.5, 0.5, 2), sinc_oracle(kPi / 4.0), 1e-12);
  EXPECT_NEAR(smear_mtf(0.5, 0.5, 2), 0.90032, 1e-4);
  for (double f : {0.0, 0.1, 0.37, 0.5}) EXPECT_NEAR(smear_mtf(f, 0.5, 1000000), 1.0, 1e-6);
}

TEST(Mtf, Jitter) {
  for (double f : {0.0, 0.2, 0.5}) EXPECT_EQ(jitter_mtf(f, 0.0), 1.0);
  EXPECT_NEAR(jitter_mtf(0.5, 0.1), 0.95185, 0.005);
  EXPECT_NEAR(jitter_mtf(0.5, 0.2), std::exp(-2.0 * kPi * kPi * 0.04 * 0.25), 1e-12);
  EXPECT_NEAR(jitter_mtf(0.5, 0.2), 0.82085, 1e-4);
}

TEST(Mtf, ComponentsAreUnitAtDcBoundedAndNonIncreasing) {
  const std::vector<std::pair<const char*, std::function<double(double)>>> parts = {
      {"optics", [](double f) { return optics_mtf(f, 0.3); }},
      {"footprint", [](double f) { return footprint_mtf(f, 2.0); }},
      {"sampling", [](double f) { return sampling_mtf(f, 2.0); }},
      {"smear", [](double f) { return smear_mtf(f, 0.5, 1); }},
      {"jitter", [](double f) { return jitter_mtf(f, 0.15); }},
      {"diffraction", [](double f) { return diffraction_mtf(f / 0.5); }},
  };
  for (const auto& [name, fn] : parts) {
    EXPECT_NEAR(fn(0.0), 1.0, 1e-15) << name;
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
      const double f = 0.5 * i / 100.0;
      const double v = fn(f);
      EXPECT_GE(v, 0.0) << name;
      EXPECT_LE(v, 1.0) << name;
      EXPECT_LE(v, prev + 1e-15) << name << " at f=" << f;
      prev = v;
    }
  }
}

TEST(Mtf, SystemOtfComposition) {
  const MtfChainParams p;
  EXPECT_NEAR(system_otf(p, 0.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(system_otf(p, 0.5, 0.0), 0.0, 1e-15);
  EXPECT_GE(system_otf(p, 0.3, 0.0), system_otf(p, 0.4, 0.0));
  // Full product oracle at an off-axis point.
  const double fx = 0.13;
  const double fy = -0.21;
  const double fr = std::hypot(fx, fy);
  const double expected = optics_mtf(fr, 0.3) * footprint_mtf(fx, 2.0) * footprint_mtf(std::abs(fy), 2.0) *
                          jitter_mtf(fr, 0.1) * smear_mtf(std::abs(fy), 0.5, 1);
  EXPECT_NEAR(system_otf(p, fx, fy), expected, 1e-14);
  // Smear is along-track (fy) only.
  MtfChainParams q = p;
  q.n_phi = 4;
  EXPECT_EQ(system_otf(p, 0.2, 0.0), system_otf(q, 0.2, 0.0));
  EXPECT_GT(system_otf(q, 0.0, 0.2), system_otf(p, 0.0, 0.2));
}

TEST(Mtf, SeparableWhenRadialFactorsAreNeutral) {
  MtfChainParams p;
  p.optics_mtf_at_hr_nyq = 1.0;
  p.jitter_sigma = 0.0;
  for (double fx : {0.05, 0.2, 0.31}) {
    for (double fy : {0.07, 0.25, 0.44}) {
      EXPECT_NEAR(system_otf(p, fx, 0.0) * system_otf(p, 0.0, fy) / system_otf(p, 0.0, 0.0),
                  system_otf(p, fx, fy), 1e-14);
    }
  }
}

TEST(Mtf, CurvesTable) {
  const MtfChainParams p;
  const auto rows = mtf_curves(p);
  ASSERT_EQ(rows.size(), 512u);
  EXPECT_EQ(rows.front().f, 0.0);
  EXPECT_DOUBLE_EQ(rows.back().f, 0.5);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.system, system_otf(p, 0.0, r.f), 1e-15);
    EXPECT_NEAR(r.sampling, sampling_mtf(r.f, 2.0), 1e-15);
  }
}

TEST(Mtf, ChainValidation) {
  MtfChainParams p;
  p.optics_mtf_at_hr_nyq = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.n_phi = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.jitter_sigma = -0.1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}
