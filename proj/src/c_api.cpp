#include "qsigma/qsigma.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "qsigma/config.hpp"
#include "qsigma/figures.hpp"
#include "qsigma/harness.hpp"

struct qsigma_config {
    qsigma::ExperimentConfig config;
};

struct qsigma_curve {
    qsigma::AggregateCurve curve;
};

struct qsigma_sweep {
    qsigma::SweepTable table;
};

namespace {

thread_local std::string g_last_error;

qsigma_status fail(qsigma_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <class F>
qsigma_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return QSIGMA_OK;
    } catch (const qsigma::DivergedError& e) {
        return fail(QSIGMA_ERR_DIVERGED, e.what());
    } catch (const qsigma::TerminalStateError& e) {
        return fail(QSIGMA_ERR_STATE, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(QSIGMA_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(QSIGMA_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(QSIGMA_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QSIGMA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QSIGMA_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QSIGMA_ERR_INTERNAL, "unknown error");
    }
}

void write_text(const char* path, const std::string& text) {
    if (std::strcmp(path, "-") == 0) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure(std::string("cannot open '") + path + "' for writing");
    out << text;
    if (!out) throw std::ios_base::failure(std::string("write to '") + path + "' failed");
}

#define QSIGMA_REQUIRE(ptr)                                                                  \
    do {                                                                                     \
        if ((ptr) == nullptr) return fail(QSIGMA_ERR_INVALID_ARGUMENT, #ptr " is null");     \
    } while (0)

}  // namespace

extern "C" {

const char* qsigma_version(void) { return "1.0.0"; }

const char* qsigma_last_error(void) { return g_last_error.c_str(); }

qsigma_status qsigma_config_create(qsigma_config** out) {
    QSIGMA_REQUIRE(out);
    return guarded([&] { *out = new qsigma_config{}; });
}

void qsigma_config_destroy(qsigma_config* config) { delete config; }

qsigma_status qsigma_config_set(qsigma_config* config, const char* key, const char* value) {
    QSIGMA_REQUIRE(config);
    QSIGMA_REQUIRE(key);
    QSIGMA_REQUIRE(value);
    return guarded([&] { config->config.set(key, value); });
}

qsigma_status qsigma_config_load_file(qsigma_config* config, const char* path) {
    QSIGMA_REQUIRE(config);
    QSIGMA_REQUIRE(path);
    return guarded([&] { config->config.load_file(path); });
}

qsigma_status qsigma_run(const qsigma_config* config, qsigma_curve** out) {
    QSIGMA_REQUIRE(config);
    QSIGMA_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        const auto& c = config->config;
        auto curve = qsigma::run_curve(c.run_spec(), c.runs(), c.metric(), c.confidence(), c.smooth_window(),
                                       c.threads());
        *out = new qsigma_curve{std::move(curve)};
    });
}

size_t qsigma_curve_length(const qsigma_curve* curve) { return curve ? curve->curve.size() : 0; }

size_t qsigma_curve_runs(const qsigma_curve* curve) { return curve ? curve->curve.runs : 0; }

qsigma_status qsigma_curve_point(const qsigma_curve* curve, size_t episode_index, double* mean,
                                 double* std_error, double* half_width) {
    QSIGMA_REQUIRE(curve);
    if (episode_index >= curve->curve.size()) return fail(QSIGMA_ERR_INVALID_ARGUMENT, "episode index out of range");
    if (mean) *mean = curve->curve.mean[episode_index];
    if (std_error) *std_error = curve->curve.std_error[episode_index];
    if (half_width) *half_width = curve->curve.half_width[episode_index];
    return QSIGMA_OK;
}

qsigma_status qsigma_curve_write_csv(const qsigma_curve* curve, const char* path) {
    QSIGMA_REQUIRE(curve);
    QSIGMA_REQUIRE(path);
    return guarded([&] {
        std::ostringstream os;
        qsigma::write_curve_csv(os, curve->curve);
        write_text(path, os.str());
    });
}

void qsigma_curve_destroy(qsigma_curve* curve) { delete curve; }

qsigma_status qsigma_sweep_run(const qsigma_config* config, qsigma_sweep** out) {
    QSIGMA_REQUIRE(config);
    QSIGMA_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new qsigma_sweep{qsigma::run_sweep(config->config.sweep_spec())}; });
}

size_t qsigma_sweep_size(const qsigma_sweep* sweep) { return sweep ? sweep->table.cells.size() : 0; }

qsigma_status qsigma_sweep_cell(const qsigma_sweep* sweep, size_t index, const char** scheme, double* lambda,
                                double* alpha, double* objective, double* std_error) {
    QSIGMA_REQUIRE(sweep);
    if (index >= sweep->table.cells.size()) return fail(QSIGMA_ERR_INVALID_ARGUMENT, "cell index out of range");
    const auto& c = sweep->table.cells[index];
    if (scheme) *scheme = c.scheme.c_str();
    if (lambda) *lambda = c.lambda;
    if (alpha) *alpha = c.alpha;
    if (objective) *objective = c.objective;
    if (std_error) *std_error = c.std_error;
    return QSIGMA_OK;
}

qsigma_status qsigma_sweep_best(const qsigma_sweep* sweep, const char* scheme, size_t* index) {
    QSIGMA_REQUIRE(sweep);
    QSIGMA_REQUIRE(scheme);
    QSIGMA_REQUIRE(index);
    const auto& cells = sweep->table.cells;
    const bool lower = qsigma::lower_is_better(sweep->table.objective);
    bool found = false;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].scheme != scheme) continue;
        if (!found || (lower ? cells[i].objective < cells[*index].objective
                             : cells[i].objective > cells[*index].objective)) {
            *index = i;
            found = true;
        }
    }
    if (!found) return fail(QSIGMA_ERR_INVALID_ARGUMENT, std::string("no cells for scheme '") + scheme + "'");
    return QSIGMA_OK;
}

qsigma_status qsigma_sweep_write_csv(const qsigma_sweep* sweep, const char* path) {
    QSIGMA_REQUIRE(sweep);
    QSIGMA_REQUIRE(path);
    return guarded([&] {
        std::ostringstream os;
        qsigma::write_sweep_csv(os, sweep->table);
        write_text(path, os.str());
    });
}

void qsigma_sweep_destroy(qsigma_sweep* sweep) { delete sweep; }

size_t qsigma_figure_count(void) { return qsigma::figure_presets().size(); }

const char* qsigma_figure_id(size_t index) {
    const auto& p = qsigma::figure_presets();
    return index < p.size() ? p[index].id.c_str() : nullptr;
}

const char* qsigma_figure_description(size_t index) {
    const auto& p = qsigma::figure_presets();
    return index < p.size() ? p[index].description.c_str() : nullptr;
}

qsigma_status qsigma_figure_run(const char* id, const qsigma_config* overrides, const char* out_dir) {
    QSIGMA_REQUIRE(id);
    QSIGMA_REQUIRE(out_dir);
    return guarded([&] {
        qsigma::FigureOptions opts;
        if (overrides) {
            const auto& c = overrides->config;
            if (c.has("runs")) opts.runs = c.runs();
            if (c.has("episodes")) opts.episodes = c.run_spec().num_episodes;
            if (c.has("seed")) opts.seed = c.run_spec().base_seed;
            if (c.has("confidence")) opts.confidence = c.confidence();
            if (c.has("smooth-window")) opts.smooth_window = c.smooth_window();
            opts.threads = c.threads();
        }
        const auto files = qsigma::run_figure(id, opts);
        std::filesystem::create_directories(out_dir);
        for (const auto& f : files) {
            const auto path = (std::filesystem::path(out_dir) / f.name).string();
            write_text(path.c_str(), f.csv);
        }
    });
}

}  // extern "C"
