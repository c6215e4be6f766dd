#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace cbf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Raised for malformed configs, schemas, or infeasible problem setups.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an optimizer produces a non-finite objective.
struct TrainingAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when certification cannot proceed (empty sublevel set,
// degenerate schedule, exhausted rejection budget, ...).
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded uniform generator. Substreams are derived from the base seed so
// independent phases (data sampling, init, lipschitz pairs, ...) never share
// a stream, and every sequence is reproducible bit-for-bit for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t raw() { return gen_(); }

  Rng substream(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

// Axis-aligned box [lower, upper], lower <= upper componentwise.
struct Box {
  Vec lower;
  Vec upper;

  Box() = default;
  Box(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) throw ConfigError("box: dimension mismatch");
    for (int i = 0; i < lower.size(); ++i) {
      if (!(lower[i] <= upper[i])) throw ConfigError("box: lower > upper");
    }
  }

  int dim() const { return static_cast<int>(lower.size()); }
  bool empty() const { return lower.size() == 0; }
  Vec widths() const { return upper - lower; }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
  }

  bool contains(const Vec& x) const {
    for (int i = 0; i < lower.size(); ++i) {
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
  }

  Vec clamp(const Vec& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }

  static Box cube(int n, double half_width) {
    return Box(Vec::Constant(n, -half_width), Vec::Constant(n, half_width));
  }
};

inline void sample_in(const Box& box, Rng& rng, Vec& out) {
  out.resize(box.lower.size());
  for (int i = 0; i < out.size(); ++i) out[i] = rng.uniform(box.lower[i], box.upper[i]);
}

inline Vec sample_in(const Box& box, Rng& rng) {
  Vec x;
  sample_in(box, rng, x);
  return x;
}

}  // namespace cbf
