#include "qsigma/tilecoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qsigma {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

bool TileKey::operator==(const TileKey& o) const noexcept {
    return len == o.len && std::equal(v.begin(), v.begin() + len, o.v.begin());
}

std::size_t TileKeyHash::operator()(const TileKey& k) const noexcept {
    // FNV-1a over the 64-bit words.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < k.len; ++i) {
        auto x = static_cast<std::uint64_t>(k.v[i]);
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return static_cast<std::size_t>(h);
}

IndexHashTable::IndexHashTable(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0 || (capacity & (capacity - 1)) != 0)
        throw std::invalid_argument("tile table capacity must be a power of two");
    map_.reserve(capacity);
}

std::size_t IndexHashTable::index(const TileKey& key) {
    if (auto it = map_.find(key); it != map_.end()) return it->second;
    if (map_.size() >= capacity_) {
        ++overflow_;
        return TileKeyHash{}(key) % capacity_;
    }
    const std::size_t next = map_.size();
    map_.emplace(key, next);
    return next;
}

std::vector<TileKey> tile_coordinates(int num_tilings, std::span<const double> scaled_floats,
                                      std::span<const std::int64_t> ints) {
    if (num_tilings < 1) throw std::invalid_argument("num_tilings must be >= 1");
    if (1 + scaled_floats.size() + ints.size() > TileKey::kMaxLen)
        throw std::invalid_argument("too many tile coding inputs");

    std::vector<std::int64_t> quantized(scaled_floats.size());
    for (std::size_t i = 0; i < scaled_floats.size(); ++i) {
        if (!std::isfinite(scaled_floats[i])) throw std::invalid_argument("non-finite tile input");
        quantized[i] = static_cast<std::int64_t>(std::floor(scaled_floats[i] * num_tilings));
    }

    std::vector<TileKey> keys(static_cast<std::size_t>(num_tilings));
    for (int tiling = 0; tiling < num_tilings; ++tiling) {
        TileKey& key = keys[static_cast<std::size_t>(tiling)];
        key.v[key.len++] = tiling;
        std::int64_t offset = tiling;
        for (auto q : quantized) {
            key.v[key.len++] = floor_div(q + offset, num_tilings);
            offset += 2 * tiling;
        }
        for (auto i : ints) key.v[key.len++] = i;
    }
    return keys;
}

std::vector<std::size_t> tiles(IndexHashTable& iht, int num_tilings,
                               std::span<const double> scaled_floats,
                               std::span<const std::int64_t> ints) {
    const auto keys = tile_coordinates(num_tilings, scaled_floats, ints);
    std::vector<std::size_t> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(iht.index(k));
    return out;
}

void TileCoderConfig::validate() const {
    if (num_tilings < 1) throw std::invalid_argument("num_tilings must be >= 1");
    if (lower.size() != scale.size() || upper.size() != scale.size())
        throw std::invalid_argument("tile coder bounds and scales differ in length");
    for (std::size_t i = 0; i < scale.size(); ++i) {
        if (!(std::isfinite(scale[i]) && scale[i] > 0.0))
            throw std::invalid_argument("tile coder scales must be finite and positive");
        if (!(lower[i] <= upper[i])) throw std::invalid_argument("tile coder bounds inverted");
    }
}

std::vector<double> TileCoderConfig::scaled(std::span<const double> observation) const {
    if (observation.size() != scale.size())
        throw std::invalid_argument("observation dimension does not match tile coder");
    std::vector<double> out(observation.size());
    for (std::size_t i = 0; i < observation.size(); ++i)
        out[i] = std::clamp(observation[i], lower[i], upper[i]) * scale[i];
    return out;
}

TileCoderConfig TileCoderConfig::mountain_car() {
    TileCoderConfig c;
    c.num_tilings = 8;
    c.lower = {-1.2, -0.07};
    c.upper = {0.5, 0.07};
    c.scale = {8.0 / 1.7, 8.0 / 0.14};
    c.capacity = 4096;
    return c;
}

TileCoderConfig TileCoderConfig::cart_pole() {
    constexpr double max_angle = 12.0 * std::numbers::pi / 180.0;
    TileCoderConfig c;
    c.num_tilings = 8;
    c.lower = {-2.4, -3.0, -max_angle, -3.5};
    c.upper = {2.4, 3.0, max_angle, 3.5};
    c.scale = {8.0 / 4.8, 8.0 / 6.0, 8.0 / (2.0 * max_angle), 8.0 / 7.0};
    c.capacity = 8192;
    return c;
}

}  // namespace qsigma
