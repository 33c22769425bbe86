#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace psz {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Ordered set of row (control point) or column (input channel) indices, 0-based.
using IndexSet = std::vector<Eigen::Index>;

enum class Zone { A, B };

inline const char* zone_name(Zone z) { return z == Zone::A ? "A" : "B"; }

/// A complex matrix tied to the single frequency it was computed at.
/// The tag keeps transfer, target, filter and system matrices from being mixed up.
template <class Tag>
struct FrequencyMatrix {
  double frequency = 0.0;
  CMatrix entries;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

struct TransferTag {};
struct TargetTag {};
struct FilterTag {};
struct SystemTag {};

/// K x L, control points by loudspeakers.
using TransferMatrix = FrequencyMatrix<TransferTag>;
/// K x I, control points by input channels.
using TargetMatrix = FrequencyMatrix<TargetTag>;
/// L x I, loudspeakers by input channels.
using FilterMatrix = FrequencyMatrix<FilterTag>;
/// K x I, M = H C.
using SystemMatrix = FrequencyMatrix<SystemTag>;

/// Source and receiver share a position, so the free-field response is undefined.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The regularized normal matrix could not be factorized.
class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(double frequency, const std::string& what)
      : std::runtime_error(what), frequency_(frequency) {}
  double frequency() const { return frequency_; }

 private:
  double frequency_;
};

}  // namespace psz
