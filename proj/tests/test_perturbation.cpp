#include <cmath>

#include "doctest.h"
#include "psz/acoustics.hpp"
#include "psz/perturbation.hpp"

using namespace psz;

namespace {

TransferMatrix nominal() { return transfer_matrix(default_paper_scene(), 1000.0); }

TransferMatrix single_entry(Complex v, double f = 1000.0) {
  TransferMatrix H{f, CMatrix(1, 1)};
  H.entries(0, 0) = v;
  return H;
}

}  // namespace

TEST_CASE("zero variance leaves H untouched") {
  const auto H = nominal();
  const UncertaintyModel zero{0.0, 0.0, 10, 42};
  CHECK(perturb(H, zero, "design").entries == H.entries);
  CHECK(averaged_perturbed(H, zero, "design").entries == H.entries);
}

TEST_CASE("draws are a pure function of the key") {
  const auto H = nominal();
  const UncertaintyModel m{1e-4, 1e-4, 10, 7};
  CHECK(perturb(H, m, "design").entries == perturb(H, m, "design").entries);
  CHECK(averaged_perturbed(H, m, "eval").entries == averaged_perturbed(H, m, "eval").entries);
  CHECK(perturb(H, m, "design").entries != perturb(H, m, "eval").entries);
  CHECK(perturb(H, m, "design", 0).entries != perturb(H, m, "design", 1).entries);

  UncertaintyModel other = m;
  other.seed = 8;
  CHECK(perturb(H, m, "design").entries != perturb(H, other, "design").entries);
}

TEST_CASE("single trial average equals one draw") {
  const auto H = nominal();
  const UncertaintyModel m{1e-4, 1e-4, 1, 3};
  CHECK(averaged_perturbed(H, m, "x").entries == perturb(H, m, "x", 0).entries);
}

TEST_CASE("amplitude and phase sample means match the nominal values") {
  const Complex h = std::polar(0.8, 1.1);
  const auto H = single_entry(h);
  const UncertaintyModel m{1e-4, 1e-4, 1, 11};
  const int n = 100000;
  double amp = 0, phase = 0;
  for (int t = 0; t < n; ++t) {
    const Complex v = perturb(H, m, "stat", t).entries(0, 0);
    amp += std::abs(v);
    phase += std::arg(v);
  }
  amp /= n;
  phase /= n;
  const double bound = 3.0 * 0.01 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(amp - 0.8) < bound);
  CHECK(std::abs(phase - 1.1) < bound);
}

TEST_CASE("keyed normals have unit variance and independent streams") {
  const int n = 50000;
  double s1 = 0, s2 = 0, cross = 0, stream_cross = 0;
  for (int t = 0; t < n; ++t) {
    const auto a = keyed_normal_pair(1, "a", 500.0, 0, 0, t);
    const auto b = keyed_normal_pair(1, "b", 500.0, 0, 0, t);
    s1 += a.first * a.first;
    s2 += a.second * a.second;
    cross += a.first * a.second;
    stream_cross += a.first * b.first;
  }
  CHECK(s1 / n == doctest::Approx(1.0).epsilon(0.03));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.03));
  // |corr| below 4 standard errors of a zero-correlation estimate.
  CHECK(std::abs(cross / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(stream_cross / n) < 4.0 / std::sqrt(n));
}

TEST_CASE("trial averaging shrinks the error like 1/sqrt(trials)") {
  // Monte-Carlo over 1000 repetitions: for small sigma the complex deviation
  // of one draw has variance ~ sigma_A^2 + |h|^2 sigma_phi^2.
  const Complex h = std::polar(1.0, 0.4);
  const double sigma_sq = 1e-4;
  const double per_draw_var = sigma_sq + std::norm(h) * sigma_sq;
  const int reps = 1000;
  double sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const UncertaintyModel m{sigma_sq, sigma_sq, 10, static_cast<std::uint64_t>(1000 + r)};
    sq += std::norm(averaged_perturbed(single_entry(h), m, "mc").entries(0, 0) - h);
  }
  const double rms = std::sqrt(sq / reps);
  const double expected = std::sqrt(per_draw_var / 10.0);
  CHECK(rms == doctest::Approx(expected).epsilon(0.1));

  // Convergence in probability as the trial count grows.
  double previous = INFINITY;
  for (int trials : {1, 10, 100, 1000}) {
    double err = 0.0;
    for (int r = 0; r < 20; ++r) {
      const UncertaintyModel m{sigma_sq, sigma_sq, trials, static_cast<std::uint64_t>(r)};
      err += std::abs(averaged_perturbed(single_entry(h), m, "conv").entries(0, 0) - h);
    }
    CAPTURE(trials);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("negative amplitude draws clamp to zero") {
  const auto H = single_entry(Complex(1e-6, 0.0));
  const UncertaintyModel m{1.0, 0.0, 1, 5};
  int zeros = 0;
  for (int t = 0; t < 200; ++t) {
    const double a = std::abs(perturb(H, m, "clamp", t).entries(0, 0));
    CHECK(a >= 0.0);
    zeros += a == 0.0;
  }
  CHECK(zeros > 50);
}
