#include "qsigma/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsigma {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PolicyKind parse_policy(const std::string& text) {
    if (text == "equiprobable") return Equiprobable{};
    const std::string prefix = "egreedy:";
    if (text.rfind(prefix, 0) == 0) {
        double eps = 0.0;
        try {
            eps = std::stod(text.substr(prefix.size()));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad epsilon in policy '" + text + "'");
        }
        if (!(eps >= 0.0 && eps <= 1.0))
            throw std::invalid_argument("epsilon must lie in [0,1]");
        return EpsilonGreedy{eps};
    }
    throw std::invalid_argument("unknown policy '" + text + "'");
}

std::string to_string(const PolicyKind& kind) {
    if (std::holds_alternative<Equiprobable>(kind)) return "equiprobable";
    std::ostringstream os;
    os << "egreedy:" << std::get<EpsilonGreedy>(kind).epsilon;
    return os.str();
}

std::vector<double> policy_distribution(std::span<const double> q, const PolicyKind& kind) {
    if (q.empty()) throw std::invalid_argument("no actions");
    const auto n = static_cast<double>(q.size());
    std::vector<double> probs(q.size());

    if (std::holds_alternative<Equiprobable>(kind)) {
        std::fill(probs.begin(), probs.end(), 1.0 / n);
        return probs;
    }

    const double eps = std::get<EpsilonGreedy>(kind).epsilon;
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in [0,1]");

    const double best = *std::max_element(q.begin(), q.end());
    const auto ties = std::count(q.begin(), q.end(), best);
    const double base = eps / n;
    const double greedy = (1.0 - eps) / static_cast<double>(ties);
    for (std::size_t a = 0; a < q.size(); ++a)
        probs[a] = q[a] == best ? base + greedy : base;
    return probs;
}

double expected_value(std::span<const double> dist, std::span<const double> q) {
    if (dist.size() != q.size())
        throw std::invalid_argument("distribution and action values differ in length");
    double v = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) v += dist[a] * q[a];
    return v;
}

std::size_t sample_action(std::span<const double> dist, Rng& rng) {
    if (dist.empty()) throw std::invalid_argument("no actions");
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t a = 0; a < dist.size(); ++a) {
        if (dist[a] > 0.0) last_positive = a;
        cumulative += dist[a];
        if (u < cumulative) return a;
    }
    return last_positive;
}

}  // namespace qsigma
