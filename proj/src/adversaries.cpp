#include "midex/adversaries.hpp"

#include <cmath>
#include <numbers>

#include "midex/errors.hpp"
#include "midex/rng.hpp"

namespace midex {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Builds a matrix from its strict upper triangle (row-major i < j order).
PreferenceMatrix from_upper(int K, const std::vector<double>& upper) {
  std::vector<double> e(static_cast<std::size_t>(K) * K, 0.5);
  std::size_t k = 0;
  for (int i = 0; i < K; ++i) {
    for (int j = i + 1; j < K; ++j) {
      e[static_cast<std::size_t>(i) * K + j] = upper[k];
      e[static_cast<std::size_t>(j) * K + i] = 1.0 - upper[k];
      ++k;
    }
  }
  return validate(K, std::move(e));
}

std::vector<double> upper_of(const PreferenceMatrix& P) {
  std::vector<double> u;
  for (int i = 0; i < P.K(); ++i)
    for (int j = i + 1; j < P.K(); ++j) u.push_back(P(i, j));
  return u;
}

}  // namespace

std::string kind_name(const AdversarySpec& spec) {
  return std::visit(overloaded{
                        [](const ConstantSpec&) { return std::string("constant"); },
                        [](const AbruptSwitchSpec&) { return std::string("abrupt_switch"); },
                        [](const SinusoidalDriftSpec&) { return std::string("sinusoidal_drift"); },
                        [](const SeededRandomSpec&) { return std::string("seeded_random"); },
                        [](const CyclicNoCondorcetSpec&) {
                          return std::string("cyclic_no_condorcet");
                        },
                    },
                    spec);
}

int arm_count(const AdversarySpec& spec) {
  return std::visit(overloaded{
                        [](const ConstantSpec& s) { return s.matrix.K(); },
                        [](const AbruptSwitchSpec& s) {
                          return s.matrices.empty() ? 0 : s.matrices.front().K();
                        },
                        [](const SinusoidalDriftSpec& s) { return s.base.K(); },
                        [](const SeededRandomSpec& s) { return s.K; },
                        [](const CyclicNoCondorcetSpec& s) { return s.K; },
                    },
                    spec);
}

void check_spec(const AdversarySpec& spec) {
  std::visit(
      overloaded{
          [](const ConstantSpec&) {},
          [](const AbruptSwitchSpec& s) {
            if (s.matrices.size() != s.switch_times.size() + 1) {
              throw BadSpec("abrupt_switch needs one more matrix than switch times");
            }
            long long prev = 0;
            for (long long st : s.switch_times) {
              if (st <= prev) throw BadSpec("abrupt_switch times must be increasing and >= 1");
              prev = st;
            }
            for (const auto& M : s.matrices) {
              if (M.K() != s.matrices.front().K()) {
                throw BadSpec("abrupt_switch matrices disagree on K");
              }
            }
          },
          [](const SinusoidalDriftSpec& s) {
            if (!(s.period > 0.0) || !std::isfinite(s.period)) {
              throw BadSpec("sinusoidal_drift period must be > 0");
            }
            if (!(s.amplitude >= 0.0) || !std::isfinite(s.amplitude)) {
              throw BadSpec("sinusoidal_drift amplitude must be >= 0");
            }
            for (double u : upper_of(s.base)) {
              if (u - s.amplitude < 0.0 || u + s.amplitude > 1.0) {
                throw BadSpec("sinusoidal_drift amplitude pushes an entry outside [0,1]");
              }
            }
          },
          [](const SeededRandomSpec& s) {
            if (s.K < 2) throw BadSpec("seeded_random needs K >= 2");
            if (!(s.epsilon >= 0.0 && s.epsilon <= 0.5)) {
              throw BadSpec("seeded_random epsilon must lie in [0, 1/2]");
            }
            if (s.hold < 1) throw BadSpec("seeded_random hold must be >= 1");
          },
          [](const CyclicNoCondorcetSpec& s) {
            if (s.K < 3) throw BadSpec("cyclic_no_condorcet needs K >= 3");
            if (!(s.margin >= 0.0 && s.margin <= 0.5)) {
              throw BadSpec("cyclic_no_condorcet margin must lie in [0, 1/2]");
            }
          },
      },
      spec);
}

PreferenceMatrix preference_at(const AdversarySpec& spec, long long t) {
  if (t < 1) throw IndexOutOfRange("rounds start at 1, got " + std::to_string(t));
  return std::visit(
      overloaded{
          [](const ConstantSpec& s) { return s.matrix; },
          [t](const AbruptSwitchSpec& s) {
            std::size_t k = 0;
            while (k < s.switch_times.size() && t > s.switch_times[k]) ++k;
            return s.matrices[k];
          },
          [t](const SinusoidalDriftSpec& s) {
            const double shift =
                s.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / s.period);
            std::vector<double> upper = upper_of(s.base);
            for (double& u : upper) u += shift;
            return from_upper(s.base.K(), upper);
          },
          [t](const SeededRandomSpec& s) {
            const auto block = static_cast<std::uint64_t>((t - 1) / s.hold);
            Rng rng = Rng::stream(s.seed, block, StreamRole::Adversary);
            std::vector<double> upper(static_cast<std::size_t>(s.K) * (s.K - 1) / 2);
            for (double& u : upper) u = rng.uniform(s.epsilon, 1.0 - s.epsilon);
            return from_upper(s.K, upper);
          },
          [](const CyclicNoCondorcetSpec& s) {
            std::vector<double> e(static_cast<std::size_t>(s.K) * s.K, 0.5);
            for (int i = 0; i < s.K; ++i) {
              const int j = (i + 1) % s.K;
              e[static_cast<std::size_t>(i) * s.K + j] = 0.5 + s.margin;
              e[static_cast<std::size_t>(j) * s.K + i] = 0.5 - s.margin;
            }
            return validate(s.K, std::move(e));
          },
      },
      spec);
}

PreferenceSequence build_sequence(const AdversarySpec& spec, long long T) {
  if (T < 1) throw BadSpec("sequence length must be >= 1");
  check_spec(spec);
  if (const auto* c = std::get_if<ConstantSpec>(&spec)) {
    PreferenceMatrix P = c->matrix;
    return PreferenceSequence(T, [P](long long) { return P; });
  }
  return PreferenceSequence(T, [spec](long long t) { return preference_at(spec, t); });
}

PreferenceMatrix borda_gap_matrix(int K, double gap) {
  if (K < 2) throw BadSpec("borda gap matrix needs K >= 2");
  const double edge = gap * (K - 1) / K;
  if (!(edge >= 0.0 && edge <= 0.5)) {
    throw BadSpec("borda gap " + std::to_string(gap) + " is not reachable with K = " +
                  std::to_string(K));
  }
  std::vector<double> upper(static_cast<std::size_t>(K) * (K - 1) / 2, 0.5);
  for (int j = 1; j < K; ++j) upper[static_cast<std::size_t>(j - 1)] = 0.5 + edge;
  return from_upper(K, upper);
}

AdversarySpec resize_adversary(const AdversarySpec& spec, int K) {
  if (arm_count(spec) == K) return spec;
  if (const auto* c = std::get_if<ConstantSpec>(&spec); c && c->gap) {
    return ConstantSpec{borda_gap_matrix(K, *c->gap), c->gap};
  }
  if (const auto* r = std::get_if<SeededRandomSpec>(&spec)) {
    SeededRandomSpec out = *r;
    out.K = K;
    return out;
  }
  if (const auto* y = std::get_if<CyclicNoCondorcetSpec>(&spec)) {
    return CyclicNoCondorcetSpec{K, y->margin};
  }
  throw BadSpec(kind_name(spec) + " with explicit matrices cannot be resized to K = " +
                std::to_string(K));
}

}  // namespace midex
