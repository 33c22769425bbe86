#pragma once

// Independent reference computations used only by tests. None of these call
// into the library's implementation paths.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace psz::oracle {

/// J1(x) by its power series, summed until terms stop contributing.
inline double bessel_j1_series(double x) {
  const double half = 0.5 * x;
  double term = half;  // m = 0
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -(half * half) / (static_cast<double>(m) * static_cast<double>(m + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// Literal nested-sum IZI for zone "bright" over "dark", program channels P.
struct Ratios {
  double corr;
  double uncorr;
  double value() const { return std::min(corr, uncorr); }
};

inline Ratios izi_brute(const Eigen::MatrixXcd& M, const std::vector<int>& bright, const std::vector<int>& dark,
                        const std::vector<int>& program) {
  double bc = 0, dc = 0, bu = 0, du = 0;
  for (int k : bright) {
    std::complex<double> s = 0;
    for (int i : program) {
      s += M(k, i);
      bu += std::pow(std::abs(M(k, i)), 2);
    }
    bc += std::pow(std::abs(s), 2);
  }
  for (int k : dark) {
    std::complex<double> s = 0;
    for (int i : program) {
      s += M(k, i);
      du += std::pow(std::abs(M(k, i)), 2);
    }
    dc += std::pow(std::abs(s), 2);
  }
  const double nb = static_cast<double>(bright.size());
  const double nd = static_cast<double>(dark.size());
  return {(bc / nb) / (dc / nd), (bu / nb) / (du / nd)};
}

inline Ratios ipi_brute(const Eigen::MatrixXcd& M, const std::vector<int>& zone, const std::vector<int>& target,
                        const std::vector<int>& interferer) {
  double tc = 0, ic = 0, tu = 0, iu = 0;
  for (int k : zone) {
    std::complex<double> st = 0, si = 0;
    for (int i : target) {
      st += M(k, i);
      tu += std::pow(std::abs(M(k, i)), 2);
    }
    for (int i : interferer) {
      si += M(k, i);
      iu += std::pow(std::abs(M(k, i)), 2);
    }
    tc += std::pow(std::abs(st), 2);
    ic += std::pow(std::abs(si), 2);
  }
  const double nt = static_cast<double>(target.size());
  const double ni = static_cast<double>(interferer.size());
  return {(tc / nt) / (ic / ni), (tu / nt) / (iu / ni)};
}

inline Eigen::MatrixXcd random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = {n(rng), n(rng)};
  return m;
}

/// Windowed mean by full scan: every sample whose frequency lies within the
/// 1/3-octave band around each centre.
inline std::vector<double> third_octave_window_mean(const std::vector<double>& f, const std::vector<double>& v) {
  std::vector<double> out;
  const double edge = std::pow(2.0, 1.0 / 6.0);
  for (double fc : f) {
    double sum = 0;
    int n = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f[j] >= fc / edge * (1 - 1e-9) && f[j] <= fc * edge * (1 + 1e-9)) {
        sum += v[j];
        ++n;
      }
    }
    out.push_back(sum / n);
  }
  return out;
}

/// Complex Hermitian cost written as explicit per-column sums.
inline double cost_per_column(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& C, const Eigen::MatrixXcd& T,
                              double beta) {
  double total = 0;
  for (int i = 0; i < C.cols(); ++i) {
    for (int k = 0; k < H.rows(); ++k) {
      std::complex<double> p = 0;
      for (int l = 0; l < H.cols(); ++l) p += H(k, l) * C(l, i);
      total += std::norm(p - T(k, i));
    }
    for (int l = 0; l < C.rows(); ++l) total += beta * std::norm(C(l, i));
  }
  return total;
}

}  // namespace psz::oracle
