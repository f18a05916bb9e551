#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brownopt/dyadic.hpp"
#include "brownopt/path.hpp"
#include "brownopt/rng.hpp"

namespace brownopt {

/// Thrown when a query would exceed the oracle's budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError() : std::runtime_error("oracle budget exhausted") {}
};

/// Minimal interface an optimizer needs from an evaluation oracle.
struct Sampler {
  virtual ~Sampler() = default;
  virtual double query(const DyadicPoint& p) = 0;
  virtual std::int64_t budget() const = 0;
  virtual std::int64_t remaining() const = 0;
};

/// Budgeted noisy evaluation of a DyadicPath: each query observes
/// y = W_x + N(0, sigma2).  The noise stream is keyed by
/// (noise_seed, query index), independent of the path stream, so a run is
/// bit-reproducible given the (path seed, noise seed) pair.
class NoisyOracle final : public Sampler {
 public:
  NoisyOracle(DyadicPath& path, std::uint64_t noise_seed, double sigma2,
              std::int64_t budget)
      : path_(path), noise_seed_(noise_seed), sigma2_(sigma2), budget_(budget) {
    if (sigma2 < 0.0) throw std::invalid_argument("NoisyOracle: sigma2 must be >= 0");
    if (budget < 0) throw std::invalid_argument("NoisyOracle: budget must be >= 0");
    sigma_ = std::sqrt(sigma2);
  }

  double query(const DyadicPoint& p) override {
    if (spent_ >= budget_) throw BudgetError();
    const double w = path_.value(p);
    const double y =
        w + sigma_ * rng::normal(noise_seed_, rng::kStreamNoise,
                                 static_cast<std::uint64_t>(spent_));
    log_.emplace_back(p, y);
    ++spent_;
    return y;
  }

  std::int64_t budget() const override { return budget_; }
  std::int64_t remaining() const override { return budget_ - spent_; }
  std::int64_t spent() const { return spent_; }
  double sigma2() const { return sigma2_; }
  DyadicPath& path() { return path_; }
  const std::vector<std::pair<DyadicPoint, double>>& log() const { return log_; }

 private:
  DyadicPath& path_;
  std::uint64_t noise_seed_;
  double sigma2_;
  double sigma_;
  std::int64_t budget_;
  std::int64_t spent_ = 0;
  std::vector<std::pair<DyadicPoint, double>> log_;
};

}  // namespace brownopt
