#ifndef SLGH_CORE_HPP
#define SLGH_CORE_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace slgh {

/// A point in R^d. Entries are expected to be finite.
using Vector = Eigen::VectorXd;

/// Invalid argument to an operation (bad dimension, negative amplitude, t = 0 ...).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A run configuration that asks for a capability the objective lacks,
/// or whose parameters are inconsistent.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterate or its objective value stops being finite.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

private:
  int iteration_;
};

/// Reproducible source of standard-normal vectors.
///
/// A stream is identified by (seed, stream_id); the pair is expanded through
/// std::seed_seq so that neighbouring ids give unrelated engine states.
/// Streams are single-owner and not thread safe.
class GaussianStream {
public:
  GaussianStream(std::uint64_t seed, std::uint32_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t draws() const noexcept { return draws_; }

  double next_scalar() {
    ++draws_;
    return normal_(engine_);
  }

  Vector next(Eigen::Index dim) {
    Vector out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) out[i] = next_scalar();
    return out;
  }

private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), stream_id, 0x5a17u};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint32_t stream_id_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Stream ids used by the optimizers. Each random quantity gets its own stream,
// so enabling one (e.g. the t-derivative draws) never shifts another.
inline constexpr std::uint32_t kDirectionStream = 0;  // u_k
inline constexpr std::uint32_t kTDerivStream = 1;     // v_k
inline constexpr std::uint32_t kNoiseStream = 2;      // xi_k

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace slgh

#endif  // SLGH_CORE_HPP
