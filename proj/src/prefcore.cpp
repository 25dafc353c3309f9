#include "midex/prefcore.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "midex/errors.hpp"

namespace midex {
namespace {

std::string cell(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

BenchmarkResult argmax_with_ties(std::vector<double> cumulative, long long T) {
  const double best = *std::max_element(cumulative.begin(), cumulative.end());
  const double slack = tie_tolerance(T);
  BenchmarkResult result{-1, std::move(cumulative), {}};
  for (int i = 0; i < static_cast<int>(result.cumulative_borda.size()); ++i) {
    if (best - result.cumulative_borda[i] <= slack) result.ties.push_back(i);
  }
  result.best_arm = result.ties.front();
  return result;
}

template <typename ScoreFn>
BenchmarkResult cumulative_argmax(const PreferenceSequence& sequence, ScoreFn score) {
  if (sequence.size() < 1) throw EmptySequence("benchmark: empty preference sequence");
  std::vector<double> cumulative;
  for (long long t = 1; t <= sequence.size(); ++t) {
    const PreferenceMatrix P = sequence.at(t);
    if (cumulative.empty()) {
      cumulative.assign(P.K(), 0.0);
    } else if (static_cast<int>(cumulative.size()) != P.K()) {
      throw DimensionError("benchmark: round " + std::to_string(t) +
                           " has a different number of arms");
    }
    const ScoreVector s = score(P);
    for (int i = 0; i < P.K(); ++i) cumulative[i] += s.values[i];
  }
  return argmax_with_ties(std::move(cumulative), sequence.size());
}

}  // namespace

PreferenceMatrix validate(int K, std::vector<double> row_major) {
  if (K < 2) throw DimensionError("preference matrix needs K >= 2, got " + std::to_string(K));
  if (row_major.size() != static_cast<std::size_t>(K) * K) {
    throw DimensionError("preference matrix is not " + std::to_string(K) + "x" +
                         std::to_string(K));
  }
  auto at = [&](int i, int j) { return row_major[static_cast<std::size_t>(i) * K + j]; };
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const double v = at(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw RangeError("entry " + cell(i, j) + " = " + std::to_string(v) +
                         " is not a probability");
      }
    }
  }
  for (int i = 0; i < K; ++i) {
    if (at(i, i) != 0.5) {
      throw DiagonalError("diagonal entry " + cell(i, i) + " must be 1/2");
    }
    for (int j = i + 1; j < K; ++j) {
      if (std::abs(at(i, j) + at(j, i) - 1.0) > kSkewTolerance) {
        throw SkewError("entries " + cell(i, j) + " and " + cell(j, i) +
                        " do not sum to 1");
      }
    }
  }
  return PreferenceMatrix(K, std::move(row_major));
}

PreferenceMatrix validate(const std::vector<std::vector<double>>& rows) {
  const int K = static_cast<int>(rows.size());
  std::vector<double> flat;
  flat.reserve(rows.size() * rows.size());
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw DimensionError("preference matrix is not square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return validate(K, std::move(flat));
}

ScoreVector borda_scores(const PreferenceMatrix& P) {
  const int K = P.K();
  ScoreVector out{std::vector<double>(K), ScoreKind::Borda};
  for (int i = 0; i < K; ++i) {
    double sum = 0.0;
    for (int j = 0; j < K; ++j) {
      if (j != i) sum += P(i, j);
    }
    out.values[i] = sum / (K - 1);
  }
  return out;
}

ScoreVector shifted_borda_scores(const PreferenceMatrix& P) {
  const int K = P.K();
  ScoreVector out{std::vector<double>(K), ScoreKind::ShiftedBorda};
  for (int i = 0; i < K; ++i) {
    double sum = 0.0;
    for (int j = 0; j < K; ++j) sum += P(i, j);
    out.values[i] = sum / K;
  }
  return out;
}

PreferenceSequence::PreferenceSequence(std::vector<PreferenceMatrix> materialized)
    : T_(static_cast<long long>(materialized.size())) {
  auto shared = std::make_shared<const std::vector<PreferenceMatrix>>(std::move(materialized));
  gen_ = [shared](long long t) { return (*shared)[static_cast<std::size_t>(t - 1)]; };
}

BenchmarkResult benchmark(const PreferenceSequence& sequence) {
  return cumulative_argmax(sequence, borda_scores);
}

BenchmarkResult benchmark(const std::vector<PreferenceMatrix>& sequence) {
  return benchmark(PreferenceSequence(sequence));
}

BenchmarkResult shifted_benchmark(const PreferenceSequence& sequence) {
  return cumulative_argmax(sequence, shifted_borda_scores);
}

}  // namespace midex
