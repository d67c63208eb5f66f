#pragma once

#include <span>
#include <vector>

#include "regionplan/grid.hpp"

namespace regionplan {

struct LossWeights {
  double lambda_conn = 1.0;
  double lambda_topo = 0.05;
  double tau = 0.1;
  double ce_clamp = 1e-12;

  /// Throws InvalidArgument if any field violates its range.
  void validate() const;
};

/// H x W x C tensor of per-class values, class index fastest.
class ClassTensor {
 public:
  ClassTensor() = default;
  ClassTensor(int height, int width, int classes, double fill = 0.0);
  ClassTensor(int height, int width, int classes, std::vector<double> values);

  /// Two-class tensor (free, obstacle) from a free-space probability field.
  static ClassTensor from_free_probability(const ScalarField& free_prob);
  /// One-hot two-class labels (free, obstacle) from a mask of free pixels.
  static ClassTensor from_free_mask(const RegionMask& free_mask);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int classes() const noexcept { return classes_; }

  double& operator()(int row, int col, int cls) noexcept { return values_[offset(row, col, cls)]; }
  double operator()(int row, int col, int cls) const noexcept {
    return values_[offset(row, col, cls)];
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool same_shape(const ClassTensor& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && classes_ == other.classes_;
  }

 private:
  std::size_t offset(int row, int col, int cls) const noexcept {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)) *
               static_cast<std::size_t>(classes_) +
           static_cast<std::size_t>(cls);
  }

  int height_ = 0;
  int width_ = 0;
  int classes_ = 0;
  std::vector<double> values_;
};

struct CrossEntropyOptions {
  double clamp = 1e-12;
  // Reject inputs whose per-pixel class probabilities do not sum to 1 (+-1e-5)
  // or whose labels are not one-hot.
  bool check_inputs = true;
};

struct CrossEntropyResult {
  double value = 0.0;
  ClassTensor gradient;  // d value / d pred
};

/// Mean pixel-wise cross-entropy with predictions clamped to [clamp, 1].
/// Throws ShapeMismatch, InvalidArgument (input checks), NonFiniteInput.
CrossEntropyResult ce_loss(const ClassTensor& pred, const ClassTensor& label,
                           const CrossEntropyOptions& options = {});

struct ConnectivityResult {
  double value = 0.0;
  ScalarField gradient;  // d value / d pred_free
};

/// Local-agreement reward over the free-space channel:
///   -(1/HW) sum p * sigmoid((1 - |p - m|) / tau)
/// where m is the mean of the in-bounds 3x3 window around the pixel, centre
/// included. Isolated high pixels disagree with their neighbourhood and earn
/// less reward than pixels inside coherent regions.
/// Throws NonFiniteInput, InvalidArgument (values outside [0, 1] or tau <= 0).
ConnectivityResult conn_loss(const ScalarField& pred_free, double tau = 0.1);

/// Hausdorff distance between the superlevel persistence diagrams of the
/// prediction and the binary label. No gradient.
double topo_loss(const ScalarField& pred_free, const RegionMask& label_free,
                 Adjacency adjacency = Adjacency::kEight);

struct TopoSample {
  const ScalarField* pred_free;
  const RegionMask* label_free;
};

/// Mean of topo_loss over a batch. Throws EmptyInput on an empty batch.
double topo_loss_batch(std::span<const TopoSample> batch,
                       Adjacency adjacency = Adjacency::kEight);

/// ce + lambda_conn * conn + lambda_topo * topo.
double total_loss(double ce, double conn, double topo, const LossWeights& weights = {});

}  // namespace regionplan
