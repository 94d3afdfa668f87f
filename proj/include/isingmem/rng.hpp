/*
   Copyright 2026 The isingmem Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <limits>

namespace isingmem {

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Independent substreams of one trajectory.
enum class Stream : std::uint64_t { Dynamics = 0, Readout = 1, PilotDynamics = 2, PilotReadout = 3 };

/// Stream seed for trajectory `index` of an ensemble:
///   seed = mix(mix(mix(master) ^ index) ^ stream)
/// Depends only on (master, index, stream), never on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Stream stream = Stream::Dynamics)
{
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ index);
    return splitmix64(s ^ (static_cast<std::uint64_t>(stream) * 0xd1342543de82ef95ull));
}

/// xoshiro256** (Blackman & Vigna). State is filled from a SplitMix64
/// sequence started at the seed, so any 64-bit seed is valid.
class Xoshiro256
{
  public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed)
    {
        std::uint64_t x = seed;
        for (auto& word : s_)
        {
            word = splitmix64(x);
            x += 0x9e3779b97f4a7c15ull;
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

/// Uniform index in [0, n) from one 64-bit draw (multiply-high; bias < n / 2^64).
inline std::uint32_t draw_index(std::uint64_t draw, std::uint32_t n)
{
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(draw) * n) >> 64);
}

/// Integer acceptance threshold: for a draw x, `(x >> 11) < threshold`
/// holds exactly when the 53-bit uniform u = (x >> 11) * 2^-53 satisfies u < p.
std::uint64_t acceptance_threshold(double p);

inline double to_unit(std::uint64_t draw) { return static_cast<double>(draw >> 11) * 0x1.0p-53; }

}  // namespace isingmem
