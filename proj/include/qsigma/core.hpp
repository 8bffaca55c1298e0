#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qsigma {

/// Raised when a TD error or weight becomes non-finite.
class DivergedError : public std::runtime_error {
public:
    DivergedError(const std::string& what, long step)
        : std::runtime_error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Raised when an environment is stepped after reaching a terminal state.
class TerminalStateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Seeded random stream. Wraps mt19937_64 and defines its own uniform
/// mapping so trajectories are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 bits of resolution. One engine draw.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). One engine draw.
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n));
    }

    /// Uniform in [lo, hi). One engine draw.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

struct EpsilonGreedy {
    double epsilon = 0.1;
};
struct Equiprobable {};

using PolicyKind = std::variant<EpsilonGreedy, Equiprobable>;

/// Parses `egreedy:<eps>` or `equiprobable`.
PolicyKind parse_policy(const std::string& text);
std::string to_string(const PolicyKind& kind);

template <class Obs>
struct Transition {
    Obs next_observation{};
    double reward = 0.0;
    bool terminal = false;
};

/// Action probabilities at one state under the given policy. For
/// epsilon-greedy every action gets eps/|A| and the remaining mass is split
/// equally among all exact argmax ties.
std::vector<double> policy_distribution(std::span<const double> q, const PolicyKind& kind);

/// Sum over actions of pi(a) * q(a).
double expected_value(std::span<const double> dist, std::span<const double> q);

/// Inverse-CDF draw over cumulative sums; consumes exactly one uniform.
/// Ties go to the lower index. If rounding leaves u beyond the final
/// cumulative sum, the last action with positive probability is returned.
std::size_t sample_action(std::span<const double> dist, Rng& rng);

}  // namespace qsigma
