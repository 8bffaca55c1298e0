#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsigma/harness.hpp"

namespace qsigma {

/// Flat key=value experiment settings. Keys mirror the CLI flags without
/// the leading dashes (`env`, `scheme`, `lambda`, `alpha`, `epsilon`,
/// `gamma`, `episodes`, `runs`, `seed`, `confidence`, `smooth-window`,
/// `out`, plus `metric`, `objective`, `threads`, `max-steps`,
/// `divide-alpha`, `policy`). Underscores are accepted for dashes.
///
/// `scheme`, `lambda` and `alpha` take comma-separated lists for sweeps;
/// single-experiment use requires exactly one value each.
class ExperimentConfig {
public:
    static const std::vector<std::string>& known_keys();

    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    bool has(const std::string& key) const { return get(key).has_value(); }

    /// Lines of `key=value`; blank lines and lines starting with '#' skipped.
    void parse_text(const std::string& text);
    void load_file(const std::string& path);

    EnvId env() const;
    RunSpec run_spec() const;
    SweepSpec sweep_spec() const;
    int runs() const;
    double confidence() const;
    int smooth_window() const;
    int threads() const;
    Metric metric() const;
    Objective objective() const;

private:
    std::vector<std::string> list(const std::string& key) const;
    AgentConfig agent_base() const;

    std::map<std::string, std::string> values_;
};

}  // namespace qsigma
