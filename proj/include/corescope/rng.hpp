#ifndef CORESCOPE_RNG_HPP
#define CORESCOPE_RNG_HPP

#include <cstdint>

namespace corescope
{
    /// Deterministic 64-bit generator (splitmix64). Results are identical on
    /// every platform for a given seed, which the output-reproducibility
    /// guarantees rely on; std::mt19937 distributions are not portable.
    class SplitMix64
    {
    public:
        explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

        std::uint64_t next()
        {
            std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        /// Uniform integer in [0, bound), unbiased (rejection sampling).
        std::uint64_t next_below(std::uint64_t bound)
        {
            if (bound <= 1)
                return 0;
            const std::uint64_t threshold = -bound % bound;
            for (;;)
            {
                const std::uint64_t r = next();
                if (r >= threshold)
                    return r % bound;
            }
        }

        /// Uniform double in [0, 1), 53 bits of precision.
        double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

        bool bernoulli(double p) { return next_double() < p; }

        /// Independent stream derived from (seed, stream); used for per-trial
        /// and per-worker substreams so results do not depend on scheduling.
        static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream)
        {
            SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
            mixer.next();
            return SplitMix64(mixer.next());
        }

    private:
        std::uint64_t state_;
    };

} // namespace corescope

#endif // CORESCOPE_RNG_HPP
