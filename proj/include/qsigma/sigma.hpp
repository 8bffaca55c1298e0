#pragma once

#include <string>
#include <vector>

namespace qsigma {

/// Stateful producer of the sampling degree sigma in [0, 1].
///
/// The agent reads current_sigma() before computing a step's TD error,
/// then reports that error through observe_td_error(); any change to sigma
/// therefore applies from the following step onwards. end_episode() is
/// called once per finished (terminal or capped) episode.
class SigmaScheme {
public:
    enum class Kind { Constant, DynamicDecay, TdErrorMax, TdErrorMean, Combined };

    static SigmaScheme constant(double sigma);
    static SigmaScheme dynamic_decay(double initial, double factor);
    static SigmaScheme td_error_max();
    static SigmaScheme td_error_mean();
    /// TD-error ratio (max reference) scaled by factor^episode_count.
    static SigmaScheme combined(double factor);

    /// Accepts `constant:<s>`, `decay:<s0>:<f>`, `tderror:max`,
    /// `tderror:mean`, `combined:<f>`.
    static SigmaScheme parse(const std::string& text);
    std::string to_string() const;

    Kind kind() const noexcept { return kind_; }
    double current_sigma() const noexcept { return sigma_; }
    long episode_count() const noexcept { return episode_count_; }
    double reference_td() const noexcept { return delta_ref_prev_; }
    const std::vector<double>& episode_td_magnitudes() const noexcept { return td_abs_; }

    /// Records |delta| and, for the TD-error driven variants past their
    /// first episode, recomputes sigma. Returns the new sigma.
    double observe_td_error(double delta);

    void end_episode();

    /// Restores the freshly-constructed state.
    void reset();

private:
    SigmaScheme(Kind kind, double sigma0, double factor);

    bool td_driven() const noexcept {
        return kind_ == Kind::TdErrorMax || kind_ == Kind::TdErrorMean || kind_ == Kind::Combined;
    }

    Kind kind_;
    double sigma0_;
    double factor_;
    double sigma_;
    long episode_count_ = 0;
    std::vector<double> td_abs_;
    double delta_ref_prev_ = 0.0;
};

}  // namespace qsigma
