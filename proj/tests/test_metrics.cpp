#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "psz/metrics.hpp"

using namespace psz;

namespace {

SystemMatrix sys(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  SystemMatrix M{1000.0, CMatrix(r, c)};
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (auto v : row) M.entries(i, j++) = v;
    ++i;
  }
  return M;
}

MetricValue plain(double f, double value) { return make_metric(f, {value, 1.0}, {value, 1.0}); }

}  // namespace

TEST_CASE("izi hand examples") {
  const auto v = izi(sys({{1.0}, {0.1}}), {0}, {1}, {0});
  CHECK(v.corr == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(v.uncorr == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(v.db == doctest::Approx(20.0).epsilon(1e-14));

  const auto flat = izi(sys({{0.5, Complex(0, 0.5)}, {-0.5, 0.5}}), {0}, {1}, {0, 1});
  CHECK(flat.uncorr == doctest::Approx(1.0));
  CHECK(flat.value == doctest::Approx(1.0));

  const auto two = izi(sys({{1.0, 1.0}, {0.0, 1.0}}), {0}, {1}, {0, 1});
  CHECK(two.corr == doctest::Approx(4.0));
  CHECK(two.uncorr == doctest::Approx(2.0));
  CHECK(two.value == doctest::Approx(2.0));
  CHECK(!two.infinite);
}

TEST_CASE("ipi hand examples") {
  const auto v = ipi(sys({{1.0, 0.1}}), {0}, {0}, {1});
  CHECK(v.value == doctest::Approx(100.0));
  CHECK(v.db == doctest::Approx(20.0));

  const auto same = ipi(sys({{0.3, 0.3}, {Complex(0, 1), Complex(0, 1)}}), {0, 1}, {0}, {1});
  CHECK(same.value == doctest::Approx(1.0));
  CHECK(same.db == doctest::Approx(0.0).epsilon(1e-12));

  const auto st = ipi(sys({{1.0, 1.0, 0.1, 0.3}}), {0}, {0, 1}, {2, 3});
  CHECK(st.corr == doctest::Approx(25.0));
  CHECK(st.uncorr == doctest::Approx(20.0));
  CHECK(st.value == doctest::Approx(20.0));
}

TEST_CASE("single-point ipi") {
  std::mt19937_64 rng(1);
  const SystemMatrix M{500.0, oracle::random_complex(4, 4, rng)};
  const auto a = single_point_ipi(M, 2, {0, 1}, {2, 3});
  const auto b = ipi(M, {2}, {0, 1}, {2, 3});
  CHECK(a.value == b.value);
  CHECK(a.frequency == 500.0);

  const auto zero = single_point_ipi(sys({{1.0, 0.0}, {1.0, 1.0}}), 0, {0}, {1});
  CHECK(zero.infinite);
  CHECK(std::isinf(zero.db));
  CHECK(zero.db > 0);
}

TEST_CASE("zero dark-zone energy is an infinite sentinel") {
  const auto v = izi(sys({{1.0}, {0.0}}), {0}, {1}, {0});
  CHECK(v.infinite);
  CHECK(std::isinf(v.value));
}

TEST_CASE("argument validation") {
  const auto M = sys({{1.0, 0.1}, {0.1, 1.0}});
  CHECK_THROWS_AS(izi(M, {}, {1}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(izi(M, {0}, {0}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(izi(M, {0}, {1}, {5}), std::invalid_argument);
  CHECK_THROWS_AS(ipi(M, {0}, {0}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(ipi(M, {0, 1}, {0}, {}), std::invalid_argument);
}

TEST_CASE("metric properties on random matrices") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const SystemMatrix M{1.0, oracle::random_complex(4, 4, rng)};

    const auto z = izi(M, {0, 1}, {2, 3}, {0, 1});
    const auto p = ipi(M, {0, 1}, {0, 1}, {2, 3});
    CHECK(z.value <= z.corr);
    CHECK(z.value <= z.uncorr);
    CHECK(p.value <= p.corr);
    CHECK(p.value <= p.uncorr);

    const auto zb = oracle::izi_brute(M.entries, {0, 1}, {2, 3}, {0, 1});
    const auto pb = oracle::ipi_brute(M.entries, {0, 1}, {0, 1}, {2, 3});
    CHECK(std::abs(z.corr - zb.corr) <= 1e-12 * zb.corr);
    CHECK(std::abs(z.uncorr - zb.uncorr) <= 1e-12 * zb.uncorr);
    CHECK(std::abs(p.corr - pb.corr) <= 1e-12 * pb.corr);
    CHECK(std::abs(p.uncorr - pb.uncorr) <= 1e-12 * pb.uncorr);

    // Permutation within sets.
    const auto zp = izi(M, {1, 0}, {3, 2}, {1, 0});
    const auto pp = ipi(M, {1, 0}, {1, 0}, {3, 2});
    CHECK(zp.value == doctest::Approx(z.value).epsilon(1e-13));
    CHECK(pp.value == doctest::Approx(p.value).epsilon(1e-13));

    // Complex scaling.
    const SystemMatrix S{1.0, Complex(-2.5, 0.7) * M.entries};
    CHECK(izi(S, {0, 1}, {2, 3}, {0, 1}).value == doctest::Approx(z.value).epsilon(1e-12));
    CHECK(ipi(S, {0, 1}, {0, 1}, {2, 3}).value == doctest::Approx(p.value).epsilon(1e-12));
  }
}

TEST_CASE("acoustic contrast") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const CMatrix HA = oracle::random_complex(2, 8, rng);
    const CMatrix HB = oracle::random_complex(2, 8, rng);
    const CVector q = oracle::random_complex(8, 1, rng);

    // Explicit pressures p = H q.
    double ea = 0, eb = 0;
    for (int k = 0; k < 2; ++k) {
      Complex pa = 0, pb = 0;
      for (int l = 0; l < 8; ++l) {
        pa += HA(k, l) * q(l);
        pb += HB(k, l) * q(l);
      }
      ea += std::norm(pa);
      eb += std::norm(pb);
    }
    const double ac = acoustic_contrast(HA, HB, q);
    CHECK(ac == doctest::Approx((ea / 2) / (eb / 2)).epsilon(1e-12));

    CMatrix H(4, 8);
    H << HA, HB;
    const SystemMatrix M{1.0, H * q};
    const auto z = izi(M, {0, 1}, {2, 3}, {0});
    CHECK(std::abs(z.corr - ac) <= 1e-12 * ac);
    CHECK(std::abs(z.uncorr - ac) <= 1e-12 * ac);

    CHECK(acoustic_contrast(HA, HA, q) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(std::isinf(acoustic_contrast(CMatrix::Ones(1, 2), CMatrix::Zero(1, 2), CVector::Ones(2))));
  CHECK_THROWS_AS(acoustic_contrast(CMatrix::Ones(1, 2), CMatrix::Ones(1, 3), CVector::Ones(2)),
                  std::invalid_argument);
}

TEST_CASE("third-octave smoothing") {
  std::vector<double> freqs;
  for (int i = 0; i <= 48 * 6; ++i) freqs.push_back(100.0 * std::exp2(i / 48.0));

  SUBCASE("constant spectrum is a fixed point") {
    MetricSpectrum s{"c", {}};
    for (double f : freqs) s.values.push_back(plain(f, 250.0));
    for (const auto& v : third_octave_smooth(s).values) CHECK(v.value == doctest::Approx(250.0).epsilon(1e-14));
  }
  SUBCASE("spike is spread and reduced") {
    MetricSpectrum s{"spike", {}};
    for (std::size_t i = 0; i < freqs.size(); ++i) s.values.push_back(plain(freqs[i], i == 100 ? 1000.0 : 1.0));
    const auto out = third_octave_smooth(s);
    CHECK(out.values[100].value < 1000.0);
    CHECK(out.values[100].value > 1.0);
    CHECK(out.values[95].value > 1.0);
    CHECK(out.values[80].value == doctest::Approx(1.0));
  }
  SUBCASE("ramp matches a brute-force window scan") {
    MetricSpectrum s{"ramp", {}};
    std::vector<double> v;
    for (double f : freqs) {
      v.push_back(1.0 + std::log2(f));
      s.values.push_back(plain(f, v.back()));
    }
    const auto expected = oracle::third_octave_window_mean(freqs, v);
    const auto out = third_octave_smooth(s);
    REQUIRE(out.values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(out.values[i].value == doctest::Approx(expected[i]).epsilon(1e-13));
      CHECK(out.values[i].db == doctest::Approx(10.0 * std::log10(expected[i])).epsilon(1e-13));
    }
    // 48 points/octave: interior windows hold 17 points, the first one 9.
    CHECK(out.values.front().value == doctest::Approx(oracle::third_octave_window_mean(freqs, v)[0]));
  }
  SUBCASE("powers are averaged separately") {
    MetricSpectrum s{"p", {}};
    s.values.push_back(make_metric(100.0, {1.0, 1.0}, {1.0, 1.0}));
    s.values.push_back(make_metric(101.0, {3.0, 0.5}, {2.0, 1.0}));
    const auto out = third_octave_smooth(s);
    CHECK(out.values[0].corr == doctest::Approx(2.0 / 0.75));
    CHECK(out.values[0].uncorr == doctest::Approx(1.5));
    CHECK(out.values[0].value == doctest::Approx(1.5));
  }
  SUBCASE("non-increasing frequencies are rejected") {
    MetricSpectrum s{"bad", {plain(200.0, 1.0), plain(100.0, 1.0)}};
    CHECK_THROWS_AS(third_octave_smooth(s), std::invalid_argument);
  }
}
