#include "regionplan/losses.hpp"

#include <cmath>

#include "regionplan/topology.hpp"

namespace regionplan {

void LossWeights::validate() const {
  if (!(lambda_conn >= 0.0) || !std::isfinite(lambda_conn)) {
    throw Error(ErrorKind::kInvalidArgument, "lambda_conn must be a finite value >= 0");
  }
  if (!(lambda_topo >= 0.0) || !std::isfinite(lambda_topo)) {
    throw Error(ErrorKind::kInvalidArgument, "lambda_topo must be a finite value >= 0");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::kInvalidArgument, "tau must be a finite value > 0");
  }
  if (!(ce_clamp > 0.0 && ce_clamp < 1e-6)) {
    throw Error(ErrorKind::kInvalidArgument, "ce_clamp must lie in (0, 1e-6)");
  }
}

ClassTensor::ClassTensor(int height, int width, int classes, double fill)
    : ClassTensor(height, width, classes,
                  std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                          static_cast<std::size_t>(std::max(width, 0)) *
                                          static_cast<std::size_t>(std::max(classes, 0)),
                                      fill)) {}

ClassTensor::ClassTensor(int height, int width, int classes, std::vector<double> values)
    : height_(height), width_(width), classes_(classes), values_(std::move(values)) {
  if (height < 1 || width < 1 || classes < 1) {
    throw Error(ErrorKind::kInvalidArgument, "tensor dimensions must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
                               static_cast<std::size_t>(classes);
  if (values_.size() != expected) {
    throw Error(ErrorKind::kShapeMismatch, "tensor has " + std::to_string(values_.size()) +
                                               " values, expected " + std::to_string(expected));
  }
}

ClassTensor ClassTensor::from_free_probability(const ScalarField& free_prob) {
  ClassTensor t(free_prob.height(), free_prob.width(), 2);
  for (int r = 0; r < free_prob.height(); ++r) {
    for (int c = 0; c < free_prob.width(); ++c) {
      const double p = free_prob[{r, c}];
      t(r, c, 0) = p;
      t(r, c, 1) = 1.0 - p;
    }
  }
  return t;
}

ClassTensor ClassTensor::from_free_mask(const RegionMask& free_mask) {
  ClassTensor t(free_mask.height(), free_mask.width(), 2);
  for (int r = 0; r < free_mask.height(); ++r) {
    for (int c = 0; c < free_mask.width(); ++c) {
      const bool free = free_mask.contains({r, c});
      t(r, c, 0) = free ? 1.0 : 0.0;
      t(r, c, 1) = free ? 0.0 : 1.0;
    }
  }
  return t;
}

CrossEntropyResult ce_loss(const ClassTensor& pred, const ClassTensor& label,
                           const CrossEntropyOptions& options) {
  if (!pred.same_shape(label)) throw Error(ErrorKind::kShapeMismatch, "prediction vs label");
  if (!(options.clamp > 0.0 && options.clamp < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "clamp must lie in (0, 1)");
  }
  for (const double v : pred.values()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFiniteInput, "non-finite prediction");
  }
  for (const double v : label.values()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFiniteInput, "non-finite label");
  }
  const int h = pred.height();
  const int w = pred.width();
  const int k = pred.classes();
  if (options.check_inputs) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        double sum = 0.0;
        int ones = 0;
        for (int cls = 0; cls < k; ++cls) {
          sum += pred(r, c, cls);
          const double y = label(r, c, cls);
          if (y == 1.0) {
            ++ones;
          } else if (y != 0.0) {
            ones = -1;
            break;
          }
        }
        if (std::abs(sum - 1.0) > 1e-5) {
          throw Error(ErrorKind::kInvalidArgument,
                      "class probabilities at " + to_string(Cell{r, c}) + " do not sum to 1");
        }
        if (ones != 1) {
          throw Error(ErrorKind::kInvalidArgument,
                      "label at " + to_string(Cell{r, c}) + " is not one-hot");
        }
      }
    }
  }
  const double inv_n = 1.0 / (static_cast<double>(h) * static_cast<double>(w));
  CrossEntropyResult result;
  result.gradient = ClassTensor(h, w, k, 0.0);
  const auto p = pred.values();
  const auto y = label.values();
  auto g = result.gradient.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (y[i] == 0.0) continue;
    const double clamped = std::min(1.0, std::max(options.clamp, p[i]));
    sum += y[i] * std::log(clamped);
    if (p[i] > options.clamp && p[i] <= 1.0) g[i] = -y[i] * inv_n / p[i];
  }
  result.value = -sum * inv_n;
  return result;
}

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

ConnectivityResult conn_loss(const ScalarField& pred, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::kInvalidArgument, "tau must be > 0");
  for (const double v : pred.cells()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFiniteInput, "non-finite prediction");
    if (v < 0.0 || v > 1.0) throw Error(ErrorKind::kInvalidArgument, "prediction outside [0, 1]");
  }
  const int h = pred.height();
  const int w = pred.width();
  ScalarField mean(w, h, 0.0);
  Grid<int> window(w, h, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double s = 0.0;
      int n = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const Cell q{r + dr, c + dc};
          if (!pred.in_bounds(q)) continue;
          s += pred[q];
          ++n;
        }
      }
      mean[{r, c}] = s / n;
      window[{r, c}] = n;
    }
  }
  // g holds p * sigma'(z) * d|p - m|/dp / tau, the factor that flows back through |p - m|.
  ScalarField sig(w, h, 0.0);
  ScalarField g(w, h, 0.0);
  double sum = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double p = pred[{r, c}];
      const double diff = p - mean[{r, c}];
      const double s = sigmoid((1.0 - std::abs(diff)) / tau);
      const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      sig[{r, c}] = s;
      g[{r, c}] = p * s * (1.0 - s) * sign / tau;
      sum += p * s;
    }
  }
  const double inv_n = 1.0 / (static_cast<double>(h) * static_cast<double>(w));
  ConnectivityResult result;
  result.value = -sum * inv_n;
  result.gradient = ScalarField(w, h, 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double from_windows = 0.0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const Cell q{r + dr, c + dc};
          if (!pred.in_bounds(q)) continue;
          from_windows += g[q] / window[q];
        }
      }
      result.gradient[{r, c}] = -inv_n * (sig[{r, c}] - g[{r, c}] + from_windows);
    }
  }
  return result;
}

double topo_loss(const ScalarField& pred_free, const RegionMask& label_free, Adjacency adjacency) {
  require_same_shape(pred_free, label_free, ErrorKind::kShapeMismatch, "prediction vs label");
  return hausdorff_distance(persistence_diagram_0d(pred_free, adjacency),
                            persistence_diagram_0d(to_field(label_free), adjacency));
}

double topo_loss_batch(std::span<const TopoSample> batch, Adjacency adjacency) {
  if (batch.empty()) throw Error(ErrorKind::kEmptyInput, "empty batch");
  double sum = 0.0;
  for (const auto& s : batch) {
    if (s.pred_free == nullptr || s.label_free == nullptr) {
      throw Error(ErrorKind::kInvalidArgument, "batch entry is missing an input");
    }
    sum += topo_loss(*s.pred_free, *s.label_free, adjacency);
  }
  return sum / static_cast<double>(batch.size());
}

double total_loss(double ce, double conn, double topo, const LossWeights& weights) {
  if (!std::isfinite(ce) || !std::isfinite(conn) || !std::isfinite(topo)) {
    throw Error(ErrorKind::kNonFiniteInput, "loss components must be finite");
  }
  if (!std::isfinite(weights.lambda_conn) || !std::isfinite(weights.lambda_topo)) {
    throw Error(ErrorKind::kNonFiniteInput, "loss weights must be finite");
  }
  return ce + weights.lambda_conn * conn + weights.lambda_topo * topo;
}

}  // namespace regionplan
