#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace qsigma {

/// Coordinate tuple of one tiling: (tiling, per-dimension tile coords..., ints...).
struct TileKey {
    static constexpr std::size_t kMaxLen = 12;
    std::array<std::int64_t, kMaxLen> v{};
    std::uint8_t len = 0;

    bool operator==(const TileKey& o) const noexcept;
    std::span<const std::int64_t> coords() const noexcept { return {v.data(), len}; }
};

struct TileKeyHash {
    std::size_t operator()(const TileKey& k) const noexcept;
};

/// Assigns dense indices 0, 1, 2, ... to coordinate tuples in first-touch
/// order. Once full, unseen tuples map to TileKeyHash(key) % capacity and
/// overflow_count() is incremented.
class IndexHashTable {
public:
    explicit IndexHashTable(std::size_t capacity);

    std::size_t index(const TileKey& key);
    std::size_t size() const noexcept { return map_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t overflow_count() const noexcept { return overflow_; }

private:
    std::size_t capacity_;
    std::size_t overflow_ = 0;
    std::unordered_map<TileKey, std::size_t, TileKeyHash> map_;
};

/// Per-tiling coordinate tuples for a query: tiling k displaces dimension i
/// by k*(2i+1) quantized units (consecutive odd integers) before flooring.
std::vector<TileKey> tile_coordinates(int num_tilings, std::span<const double> scaled_floats,
                                      std::span<const std::int64_t> ints);

/// Exactly num_tilings indices, one per tiling, for the given query.
std::vector<std::size_t> tiles(IndexHashTable& iht, int num_tilings,
                               std::span<const double> scaled_floats,
                               std::span<const std::int64_t> ints);

/// Tiling layout for a continuous observation: each raw component is
/// clipped to [lower, upper] and multiplied by its scale.
struct TileCoderConfig {
    int num_tilings = 8;
    std::vector<double> scale;
    std::vector<double> lower;
    std::vector<double> upper;
    std::size_t capacity = 4096;

    void validate() const;
    std::vector<double> scaled(std::span<const double> observation) const;

    static TileCoderConfig mountain_car();
    static TileCoderConfig cart_pole();
};

}  // namespace qsigma
