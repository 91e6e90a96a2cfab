#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "scfo/problem.hpp"

namespace scfo {

/// Measurement history available to a target generator: one sample per
/// applied input, oldest first.
struct History {
  struct Sample {
    Vec u;
    double cost = 0.0;
    Vec g;
  };
  std::vector<Sample> samples;

  const Sample& latest() const { return samples.back(); }
  int iterations() const { return static_cast<int>(samples.size()) - 1; }
};

/// Counter-based 64-bit generator (SplitMix64): state advances by a fixed
/// odd constant and the output is a bijective mix of the state. Identical
/// sequences on every platform for a given seed.
struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// A target generator: maps the history (and the current exact measurements)
/// to the next requested input, always inside the box. Owns whatever mutable
/// state it needs; one instance per run.
class TargetGenerator {
 public:
  virtual ~TargetGenerator() = default;
  virtual Vec next(const History& history, const Evaluation& current,
                   const ProblemSpec& problem) = 0;
  virtual std::string id() const = 0;
};

/// Returns the same fixed target every iteration.
class FixedTarget : public TargetGenerator {
 public:
  explicit FixedTarget(Vec target) : target_(std::move(target)) {}
  Vec next(const History&, const Evaluation&, const ProblemSpec& problem) override;
  std::string id() const override { return "fixed"; }

 private:
  Vec target_;
};

/// Steepest-descent step with diminishing length 1/k, clipped to the box.
/// Iteration 0 uses a unit step.
class DiminishingGradient : public TargetGenerator {
 public:
  Vec next(const History& history, const Evaluation& current,
           const ProblemSpec& problem) override;
  std::string id() const override { return "graddim"; }
};

/// Fixed affine constraint model corrected by measured bias terms, then
/// optimized as a linear program over the box.
class ConstraintAdaptation : public TargetGenerator {
 public:
  Vec next(const History& history, const Evaluation& current,
           const ProblemSpec& problem) override;
  std::string id() const override { return "conadapt"; }
};

/// Parameter estimation (linear least squares over the full history) followed
/// by numerical optimization of the refitted model. Underdetermined blocks
/// keep their previous values; the parameter vector starts at all ones.
class TwoStep : public TargetGenerator {
 public:
  TwoStep() : theta_(5, 1.0) {}
  Vec next(const History& history, const Evaluation& current,
           const ProblemSpec& problem) override;
  std::string id() const override { return "twostep"; }

  const Vec& theta() const { return theta_; }

  /// Model optimum for a given parameter vector (exposed for testing).
  static Vec optimize_model(const Vec& theta, const ProblemSpec& problem);

 private:
  Vec theta_;
};

/// Componentwise uniform draw over the box, deterministic per seed.
class RandomStep : public TargetGenerator {
 public:
  explicit RandomStep(uint64_t seed) : rng_(seed) {}
  Vec next(const History&, const Evaluation&, const ProblemSpec& problem) override;
  std::string id() const override { return "random"; }

 private:
  SplitMix64 rng_;
};

/// Factory over the ids {"fixed", "graddim", "conadapt", "twostep", "random"}.
/// Throws std::invalid_argument on unknown id.
std::unique_ptr<TargetGenerator> make_algorithm(const std::string& id,
                                                const ProblemSpec& problem, uint64_t seed);

const std::vector<std::string>& algorithm_ids();

}  // namespace scfo
