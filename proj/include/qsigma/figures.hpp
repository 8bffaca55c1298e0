#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsigma/harness.hpp"

namespace qsigma {

/// One series of a curve figure: a scheme at its hyperparameters.
struct CurveSeries {
    std::string label;
    SigmaScheme scheme;
    double lambda = 0.0;
    double alpha = 0.0;
};

struct FigurePreset {
    std::string id;
    std::string description;
    EnvId env = EnvId::RandomWalk19;
    int runs = 100;
    int episodes = 50;
    double confidence = 0.99;
    Metric metric = Metric::Return;
    int smooth_window = 1;
    /// Non-empty for curve figures.
    std::vector<CurveSeries> series;
    /// Set for sweep figures.
    std::optional<SweepSpec> sweep;
};

const std::vector<FigurePreset>& figure_presets();
const FigurePreset& find_figure(const std::string& id);

struct FigureOptions {
    std::optional<int> runs;
    std::optional<int> episodes;
    std::optional<double> confidence;
    std::optional<int> smooth_window;
    std::uint64_t seed = 0;
    int threads = 0;
};

/// A CSV produced by a figure: suggested file name and its contents.
struct FigureFile {
    std::string name;
    std::string csv;
};

/// Runs a preset. Curve figures emit one `fig<id>_<label>.csv` per series
/// (per-run smoothing before aggregation); sweep figures emit
/// `fig<id>_sweep.csv`.
std::vector<FigureFile> run_figure(const std::string& id, const FigureOptions& options);

/// Aggregated metric curve over `runs` runs, each smoothed with a trailing
/// window before aggregation.
AggregateCurve run_curve(const RunSpec& spec, int runs, Metric metric, double confidence,
                         int smooth_window, int threads);

}  // namespace qsigma
