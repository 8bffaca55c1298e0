#include "qsigma/sigma.hpp"

#include "qsigma/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qsigma {

namespace {

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

void check_factor(double f) {
    if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("decay factor must lie in (0,1]");
}

double parse_real(const std::string& s, const std::string& whole) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("bad number in scheme '" + whole + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

SigmaScheme::SigmaScheme(Kind kind, double sigma0, double factor)
    : kind_(kind), sigma0_(sigma0), factor_(factor), sigma_(sigma0) {}

SigmaScheme SigmaScheme::constant(double sigma) {
    check_unit(sigma, "sigma");
    return {Kind::Constant, sigma, 1.0};
}

SigmaScheme SigmaScheme::dynamic_decay(double initial, double factor) {
    check_unit(initial, "initial sigma");
    check_factor(factor);
    return {Kind::DynamicDecay, initial, factor};
}

SigmaScheme SigmaScheme::td_error_max() { return {Kind::TdErrorMax, 1.0, 1.0}; }
SigmaScheme SigmaScheme::td_error_mean() { return {Kind::TdErrorMean, 1.0, 1.0}; }

SigmaScheme SigmaScheme::combined(double factor) {
    check_factor(factor);
    return {Kind::Combined, 1.0, factor};
}

SigmaScheme SigmaScheme::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty()) throw std::invalid_argument("empty sigma scheme");
    const auto& name = parts[0];
    if (name == "constant" && parts.size() == 2) return constant(parse_real(parts[1], text));
    if (name == "decay" && parts.size() == 3)
        return dynamic_decay(parse_real(parts[1], text), parse_real(parts[2], text));
    if (name == "tderror" && parts.size() == 2) {
        if (parts[1] == "max") return td_error_max();
        if (parts[1] == "mean") return td_error_mean();
    }
    if (name == "combined" && parts.size() == 2) return combined(parse_real(parts[1], text));
    throw std::invalid_argument("unknown sigma scheme '" + text + "'");
}

std::string SigmaScheme::to_string() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Constant: os << "constant:" << sigma0_; break;
        case Kind::DynamicDecay: os << "decay:" << sigma0_ << ':' << factor_; break;
        case Kind::TdErrorMax: os << "tderror:max"; break;
        case Kind::TdErrorMean: os << "tderror:mean"; break;
        case Kind::Combined: os << "combined:" << factor_; break;
    }
    return os.str();
}

double SigmaScheme::observe_td_error(double delta) {
    if (!std::isfinite(delta)) throw DivergedError("diverged", -1);
    const double magnitude = std::abs(delta);
    td_abs_.push_back(magnitude);

    if (td_driven() && episode_count_ > 0) {
        // A reference of zero means last episode's estimates were exact.
        double ratio = delta_ref_prev_ > 0.0 ? magnitude / delta_ref_prev_ : 0.0;
        if (kind_ == Kind::Combined) ratio *= std::pow(factor_, static_cast<double>(episode_count_));
        sigma_ = std::clamp(ratio, 0.0, 1.0);
    }
    return sigma_;
}

void SigmaScheme::end_episode() {
    if (td_driven()) {
        if (td_abs_.empty()) throw std::logic_error("empty episode");
        if (kind_ == Kind::TdErrorMean)
            delta_ref_prev_ = std::accumulate(td_abs_.begin(), td_abs_.end(), 0.0) /
                              static_cast<double>(td_abs_.size());
        else
            delta_ref_prev_ = *std::max_element(td_abs_.begin(), td_abs_.end());
    }
    ++episode_count_;
    td_abs_.clear();
    // Computed from the count rather than by repeated multiplication so
    // the value after n episodes is exactly sigma0 * factor^n.
    if (kind_ == Kind::DynamicDecay)
        sigma_ = sigma0_ * std::pow(factor_, static_cast<double>(episode_count_));
}

void SigmaScheme::reset() {
    sigma_ = sigma0_;
    episode_count_ = 0;
    td_abs_.clear();
    delta_ref_prev_ = 0.0;
}

}  // namespace qsigma
