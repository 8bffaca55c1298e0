#include "qsigma/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsigma {

namespace {

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
    return out;
}

long to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long out = 0;
    try {
        out = std::stol(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw std::invalid_argument("bad boolean for " + key + ": '" + v + "'");
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::known_keys() {
    static const std::vector<std::string> keys{
        "env",        "scheme",    "lambda",  "alpha",     "epsilon",      "gamma",
        "episodes",   "runs",      "seed",    "confidence", "smooth-window", "out",
        "metric",     "objective", "threads", "max-steps", "divide-alpha", "policy"};
    return keys;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const auto k = normalize_key(trim(key));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
        throw std::invalid_argument("unknown config key '" + key + "'");
    values_[k] = trim(value);
}

std::optional<std::string> ExperimentConfig::get(const std::string& key) const {
    if (auto it = values_.find(normalize_key(key)); it != values_.end()) return it->second;
    return std::nullopt;
}

void ExperimentConfig::parse_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + " has no '='");
        set(t.substr(0, eq), t.substr(eq + 1));
    }
}

void ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    parse_text(ss.str());
}

std::vector<std::string> ExperimentConfig::list(const std::string& key) const {
    std::vector<std::string> out;
    const auto v = get(key);
    if (!v) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw std::invalid_argument("empty list for " + key);
    return out;
}

EnvId ExperimentConfig::env() const { return parse_env(get("env").value_or("randomwalk19")); }

AgentConfig ExperimentConfig::agent_base() const {
    AgentConfig a = default_agent_config(env());
    if (auto v = get("policy")) a.policy = parse_policy(*v);
    if (auto v = get("epsilon")) a.policy = EpsilonGreedy{to_real("epsilon", *v)};
    if (auto v = get("gamma")) a.gamma = to_real("gamma", *v);
    if (auto v = get("max-steps")) a.max_steps_per_episode = to_int("max-steps", *v);
    if (auto v = get("divide-alpha")) a.divide_alpha_by_tilings = to_bool("divide-alpha", *v);
    return a;
}

RunSpec ExperimentConfig::run_spec() const {
    RunSpec spec;
    spec.env = env();
    spec.agent = agent_base();
    const auto single = [&](const std::string& key) -> std::optional<std::string> {
        const auto items = list(key);
        if (items.empty()) return std::nullopt;
        if (items.size() != 1) throw std::invalid_argument(key + " takes a single value here");
        return items.front();
    };
    if (auto v = single("scheme")) spec.agent.scheme = SigmaScheme::parse(*v);
    if (auto v = single("lambda")) spec.agent.lambda = to_real("lambda", *v);
    if (auto v = single("alpha")) spec.agent.alpha = to_real("alpha", *v);
    if (auto v = get("episodes")) spec.num_episodes = static_cast<int>(to_int("episodes", *v));
    if (auto v = get("seed")) spec.base_seed = static_cast<std::uint64_t>(to_int("seed", *v));
    spec.validate();
    return spec;
}

SweepSpec ExperimentConfig::sweep_spec() const {
    SweepSpec s;
    ExperimentConfig base = *this;
    base.values_.erase("scheme");
    base.values_.erase("lambda");
    base.values_.erase("alpha");
    s.base = base.run_spec();

    for (const auto& v : list("scheme")) s.schemes.push_back(SigmaScheme::parse(v));
    for (const auto& v : list("lambda")) s.lambdas.push_back(to_real("lambda", v));
    for (const auto& v : list("alpha")) s.alphas.push_back(to_real("alpha", v));
    if (s.schemes.empty()) s.schemes.push_back(s.base.agent.scheme);
    if (s.lambdas.empty()) s.lambdas.push_back(s.base.agent.lambda);
    if (s.alphas.empty()) s.alphas.push_back(s.base.agent.alpha);
    s.num_runs = runs();
    s.objective = objective();
    s.threads = threads();
    s.validate();
    return s;
}

int ExperimentConfig::runs() const {
    const long r = get("runs") ? to_int("runs", *get("runs")) : 100;
    if (r < 1) throw std::invalid_argument("runs must be >= 1");
    return static_cast<int>(r);
}

double ExperimentConfig::confidence() const {
    const double c = get("confidence") ? to_real("confidence", *get("confidence")) : 0.99;
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("confidence must lie in (0,1)");
    return c;
}

int ExperimentConfig::smooth_window() const {
    const long w = get("smooth-window") ? to_int("smooth-window", *get("smooth-window")) : 1;
    if (w < 1) throw std::invalid_argument("smooth-window must be >= 1");
    return static_cast<int>(w);
}

int ExperimentConfig::threads() const {
    const long t = get("threads") ? to_int("threads", *get("threads")) : 0;
    if (t < 0) throw std::invalid_argument("threads must be >= 0");
    return static_cast<int>(t);
}

Metric ExperimentConfig::metric() const {
    if (auto v = get("metric")) return parse_metric(*v);
    return env() == EnvId::RandomWalk19 ? Metric::Rms : Metric::Return;
}

Objective ExperimentConfig::objective() const {
    if (auto v = get("objective")) return parse_objective(*v);
    return env() == EnvId::RandomWalk19 ? Objective::AucRms : Objective::MeanReturn;
}

}  // namespace qsigma
