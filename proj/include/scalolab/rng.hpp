#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace scalolab {

// Philox4x32-10 counter-based generator. A (key, stream) pair selects an
// independent sequence; the low 64 counter bits walk through it.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t key, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    static Block block(Block counter, Key key);

private:
    Key key_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    Block buffer_{};
    int used_ = 4;
};

// Stream id for a named purpose and an index (e.g. "path", replicate).
std::uint64_t substream_id(std::string_view name, std::uint64_t index);

class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view name, std::uint64_t index)
        : bits_(seed, substream_id(name, index)) {}

    double gaussian() { return normal_(bits_); }
    double uniform() { return uniform_(bits_); }
    Philox4x32& engine() { return bits_; }

private:
    Philox4x32 bits_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

}  // namespace scalolab
