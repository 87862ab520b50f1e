#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "trajeval/grid/grid.hpp"
#include "trajeval/mobility/types.hpp"
#include "trajeval/random.hpp"

namespace trajeval::generators {

/// Transforms real records at inference time: blur(Q) returns one record
/// per input record, in input order, with the same user.
class BlurringModel {
 public:
  virtual ~BlurringModel() = default;
  virtual std::string name() const = 0;
  virtual void fit(const mobility::Dataset& train) = 0;
  virtual mobility::Dataset blur(const mobility::Dataset& q, std::uint64_t seed) const = 0;
};

/// Samples datasets from noise after training.
class SyntheticModel {
 public:
  virtual ~SyntheticModel() = default;
  virtual std::string name() const = 0;
  virtual void fit(const mobility::Dataset& train) = 0;
  virtual mobility::Dataset sample(std::size_t n, std::uint64_t seed) const = 0;
};

/// Copies Q with fresh trajectory ids.
class IdentityBlurrer final : public BlurringModel {
 public:
  std::string name() const override { return "identity"; }
  void fit(const mobility::Dataset&) override {}
  mobility::Dataset blur(const mobility::Dataset& q, std::uint64_t seed) const override;
};

/// Adds N(0, sigma^2) noise to each coordinate and replaces a category by
/// a uniformly chosen other label with probability `flip_probability`.
class GaussianJitterBlurrer final : public BlurringModel {
 public:
  GaussianJitterBlurrer(double sigma_m, double flip_probability);
  std::string name() const override { return "gaussian_jitter"; }
  void fit(const mobility::Dataset&) override {}
  mobility::Dataset blur(const mobility::Dataset& q, std::uint64_t seed) const override;

 private:
  double sigma_m_;
  double flip_probability_;
};

/// Moves every point to the centroid of its grid cell.
class GridSnapBlurrer final : public BlurringModel {
 public:
  explicit GridSnapBlurrer(grid::GridSpec grid);
  std::string name() const override { return "grid_snap"; }
  void fit(const mobility::Dataset&) override {}
  mobility::Dataset blur(const mobility::Dataset& q, std::uint64_t seed) const override;

 private:
  grid::GridSpec grid_;
};

/// First-order cell model: lengths, start cells, a pooled transition kernel
/// with per-step marginals for sink states, per-cell category frequencies
/// and the timing of the training data. Points are drawn uniformly inside
/// the sampled cells.
class MarginalResampler final : public SyntheticModel {
 public:
  explicit MarginalResampler(grid::GridSpec grid = {});
  std::string name() const override { return "marginal_resampler"; }
  void fit(const mobility::Dataset& train) override;
  mobility::Dataset sample(std::size_t n, std::uint64_t seed) const override;

  bool fitted() const { return !lengths_.empty(); }
  std::string to_json() const;
  static MarginalResampler from_json(const std::string& text);

 private:
  using Counts = std::map<grid::CellId, double>;
  grid::CellId draw(const Counts& counts, Rng& rng) const;

  grid::GridSpec grid_;
  mobility::DatasetMetadata metadata_;
  std::vector<std::size_t> lengths_;
  std::vector<Counts> step_marginals_;  // index 0 is the start distribution
  Counts overall_;
  std::map<grid::CellId, Counts> kernel_;
  std::map<grid::CellId, std::map<mobility::CategoryId, double>> categories_;
  std::vector<double> start_times_;
  std::vector<double> intervals_;
};

/// Uses a synthetic model as a blurring model: record i of the output is a
/// fresh sample carrying the user of record i. Only |Q| and the user labels
/// of Q are read.
class ResamplingBlurrer final : public BlurringModel {
 public:
  explicit ResamplingBlurrer(grid::GridSpec grid = {});
  std::string name() const override { return "marginal_resampler"; }
  void fit(const mobility::Dataset& train) override;
  mobility::Dataset blur(const mobility::Dataset& q, std::uint64_t seed) const override;
  const MarginalResampler& model() const { return model_; }

 private:
  MarginalResampler model_;
};

struct GeneratorParams {
  std::string kind = "identity";  // identity | gaussian_jitter | grid_snap | marginal_resampler
  double sigma_m = 0.0;
  double flip_probability = 0.0;
  double cell_edge_m = 500.0;
  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

GeneratorParams generator_params_from_json(const std::string& text);
std::string generator_params_to_json(const GeneratorParams& params);

std::unique_ptr<BlurringModel> make_blurring_model(const GeneratorParams& params);

using BlurringFactory = std::function<std::unique_ptr<BlurringModel>()>;
BlurringFactory blurring_factory(const GeneratorParams& params);

}  // namespace trajeval::generators
