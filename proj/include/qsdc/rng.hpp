#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsdc/bits.hpp"

namespace qsdc {

/// Deterministic splittable pseudo-random generator (SplitMix64).
///
/// The same seed always yields the same draw sequence, independent of
/// platform or standard-library version, which keeps experiment reports
/// byte-stable. Per-trial generators are derived as Rng(base_seed ^ trial).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Unbiased (Lemire rejection).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    int coin() { return static_cast<int>(below(2)); }

    /// Derive an independent child generator.
    Rng split() { return Rng(next_u64() ^ 0x6A09E667F3BCC909ull); }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Random permutation of {0..n-1}.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

private:
    std::uint64_t state_;
};

inline Bits random_bits(Rng& rng, std::size_t n) {
    Bits b(n);
    for (auto& bit : b) bit = static_cast<std::uint8_t>(rng.coin());
    return b;
}

/// Source of small discrete choices ("pick one of n alternatives").
///
/// Protocol encoders draw every "with equal probability" decision through
/// this interface so that known-answer replays can pin the exact draws.
class ChoiceSource {
public:
    virtual ~ChoiceSource() = default;
    virtual int pick(int n_alternatives) = 0;
};

class RngChoices final : public ChoiceSource {
public:
    explicit RngChoices(Rng& rng) : rng_(&rng) {}
    int pick(int n_alternatives) override {
        return static_cast<int>(rng_->below(static_cast<std::uint64_t>(n_alternatives)));
    }

private:
    Rng* rng_;
};

/// Replays a fixed list of choices; throws if the script is exhausted or
/// contains an out-of-range entry.
class ScriptedChoices final : public ChoiceSource {
public:
    explicit ScriptedChoices(std::vector<int> script) : script_(std::move(script)) {}

    int pick(int n_alternatives) override {
        if (next_ >= script_.size())
            throw std::out_of_range("ScriptedChoices: script exhausted");
        int c = script_[next_++];
        if (c < 0 || c >= n_alternatives)
            throw std::out_of_range("ScriptedChoices: choice out of range");
        return c;
    }

    std::size_t consumed() const { return next_; }

private:
    std::vector<int> script_;
    std::size_t next_ = 0;
};

}  // namespace qsdc
