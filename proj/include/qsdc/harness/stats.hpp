#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qsdc {

/// Two-sided 95% quantile of the standard normal.
inline constexpr double kZ95 = 1.959963985;

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for a binomial proportion. For n = 0 the interval
/// is the vacuous [0, 1]. The bounds are clamped to [0, 1]: at 0 or n hits
/// the algebra gives exactly 0 or 1, but only up to rounding.
inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n,
                                      double z = kZ95) {
    if (successes > n) throw std::invalid_argument("wilson_interval: successes > n");
    if (n == 0) return {};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = p + z2 / (2.0 * nn);
    const double margin = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    const double lo = successes == 0 ? 0.0 : std::max(0.0, (center - margin) / denom);
    const double hi = successes == n ? 1.0 : std::min(1.0, (center + margin) / denom);
    return {lo, hi};
}

/// Binomial tally: how many hits out of how many opportunities.
struct Counter {
    std::uint64_t hits = 0;
    std::uint64_t total = 0;

    void add(bool hit) {
        hits += hit ? 1 : 0;
        ++total;
    }

    void add_counts(std::uint64_t h, std::uint64_t t) {
        if (h > t) throw std::invalid_argument("Counter: hits exceed total");
        hits += h;
        total += t;
    }

    double mean() const { return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0; }

    WilsonInterval ci(double z = kZ95) const { return wilson_interval(hits, total, z); }

    Counter& operator+=(const Counter& other) {
        hits += other.hits;
        total += other.total;
        return *this;
    }
};

/// Every rate the harness reports. Trial-level counters count one
/// observation per trial; the pooled ones count one per decoy or per bit.
/// Merging aggregates from disjoint trial ranges is plain count addition,
/// so it is associative and order-independent.
struct Metrics {
    Counter detected;              // trial ended in any abort / rejection
    Counter abort_channel;         // trial aborted at the channel check
    Counter abort_auth;            // trial aborted at mutual authentication
    Counter completed;             // payload delivered and trusted
    Counter decoy_error;           // pooled over every checked decoy
    Counter z_decoy_error;         // pooled over Z-basis channel decoys
    Counter x_decoy_error;         // pooled over X-basis channel decoys
    Counter auth_bob_accepts_alice;
    Counter auth_alice_accepts_bob;
    Counter eve_exact_recovery;    // Eve reproduced the whole secret exactly
    Counter eve_bit_accuracy;      // pooled over message bits Eve guessed
    Counter bob_message_correct;   // Bob's reading matches the sent message
    Counter message_bit_error;     // pooled over delivered message bits
    Counter integrity_mismatch;    // completed trials whose payload was wrong

    Metrics& operator+=(const Metrics& other) {
        detected += other.detected;
        abort_channel += other.abort_channel;
        abort_auth += other.abort_auth;
        completed += other.completed;
        decoy_error += other.decoy_error;
        z_decoy_error += other.z_decoy_error;
        x_decoy_error += other.x_decoy_error;
        auth_bob_accepts_alice += other.auth_bob_accepts_alice;
        auth_alice_accepts_bob += other.auth_alice_accepts_bob;
        eve_exact_recovery += other.eve_exact_recovery;
        eve_bit_accuracy += other.eve_bit_accuracy;
        bob_message_correct += other.bob_message_correct;
        message_bit_error += other.message_bit_error;
        integrity_mismatch += other.integrity_mismatch;
        return *this;
    }
};

}  // namespace qsdc
