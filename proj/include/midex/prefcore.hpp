#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace midex {

// Arms are 0-based inside the library; external formats add one.
using Arm = int;

// Absolute tolerance on P(i,j) + P(j,i) = 1.
inline constexpr double kSkewTolerance = 1e-12;

// K x K pairwise preference matrix with P(i,j) + P(j,i) = 1 and P(i,i) = 1/2.
// Only constructible through validate(), so every instance satisfies the
// invariants. Immutable.
class PreferenceMatrix {
 public:
  int K() const { return K_; }
  double operator()(Arm i, Arm j) const {
    return entries_[static_cast<std::size_t>(i) * K_ + j];
  }
  std::span<const double> row(Arm i) const {
    return {entries_.data() + static_cast<std::size_t>(i) * K_,
            static_cast<std::size_t>(K_)};
  }
  const std::vector<double>& entries() const { return entries_; }

  friend bool operator==(const PreferenceMatrix&, const PreferenceMatrix&) = default;

 private:
  PreferenceMatrix(int K, std::vector<double> entries)
      : K_(K), entries_(std::move(entries)) {}

  friend PreferenceMatrix validate(int K, std::vector<double> row_major);

  int K_;
  std::vector<double> entries_;
};

// Checks a raw row-major K x K block. Never repairs: throws DimensionError,
// RangeError (entry outside [0,1]), DiagonalError or SkewError.
PreferenceMatrix validate(int K, std::vector<double> row_major);
PreferenceMatrix validate(const std::vector<std::vector<double>>& rows);

enum class ScoreKind { Borda, ShiftedBorda, EstimatedShifted };

struct ScoreVector {
  std::vector<double> values;
  ScoreKind kind;
};

// b(i) = (1/(K-1)) sum_{j != i} P(i,j)
ScoreVector borda_scores(const PreferenceMatrix& P);
// s(i) = (1/K) sum_j P(i,j), self-comparison included.
ScoreVector shifted_borda_scores(const PreferenceMatrix& P);

// Read-only random access over P_1..P_T. Rounds are 1-based here to match
// the protocol; the source is free to generate matrices lazily.
class PreferenceSequence {
 public:
  using Generator = std::function<PreferenceMatrix(long long t)>;

  PreferenceSequence(long long T, Generator gen) : T_(T), gen_(std::move(gen)) {}
  explicit PreferenceSequence(std::vector<PreferenceMatrix> materialized);

  long long size() const { return T_; }
  PreferenceMatrix at(long long t) const { return gen_(t); }

 private:
  long long T_;
  Generator gen_;
};

struct BenchmarkResult {
  Arm best_arm;
  std::vector<double> cumulative_borda;
  std::vector<Arm> ties;
};

// Hindsight Borda winner. Arms whose cumulative Borda score is within
// tie_tolerance(T) of the maximum are reported as ties; the lowest index
// among them is the best arm. Throws EmptySequence.
BenchmarkResult benchmark(const PreferenceSequence& sequence);
BenchmarkResult benchmark(const std::vector<PreferenceMatrix>& sequence);

// Same argmax rule applied to cumulative shifted Borda scores.
BenchmarkResult shifted_benchmark(const PreferenceSequence& sequence);

// Absolute slack used to declare cumulative-score ties over T rounds.
inline double tie_tolerance(long long T) {
  return 1e-12 * static_cast<double>(T < 1 ? 1 : T);
}

}  // namespace midex
