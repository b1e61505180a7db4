#pragma once

#include <cstddef>
#include <vector>

#include "qsdc/bits.hpp"
#include "qsdc/pool.hpp"
#include "qsdc/protocol/encoding.hpp"
#include "qsdc/protocol/modified.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

struct StreamEveRecord {
    std::vector<BasisName> bases;
    std::vector<StateLabel> outcomes;
};

/// Measure every transiting qubit in a random Z/X basis. The projective
/// collapse doubles as the resend: the qubit leaves Eve's bench in exactly
/// the eigenstate she observed. The permutation and the decoy placements
/// are still secret at this point, so the record gives her no way to pair
/// positions into message bits.
inline StreamEveRecord intercept_resend_stream(const std::vector<QubitId>& stream,
                                               RegisterPool& pool, Rng& rng) {
    StreamEveRecord rec;
    rec.bases.reserve(stream.size());
    rec.outcomes.reserve(stream.size());
    for (QubitId q : stream) {
        const BasisName bn = rng.coin() ? BasisName::X : BasisName::Z;
        rec.bases.push_back(bn);
        rec.outcomes.push_back(pool.measure_qubit(q, basis_by_name(bn), rng));
    }
    return rec;
}

/// Flip each transiting qubit with probability p (a jamming adversary who
/// wants the run to fail, not to learn anything).
inline std::size_t dos_flip_stream(const std::vector<QubitId>& stream, RegisterPool& pool,
                                   Rng& rng, double p) {
    std::size_t flipped = 0;
    const Mat2 x = pauli_x();
    for (QubitId q : stream) {
        if (rng.uniform01() < p) {
            pool.apply_1q(x, q);
            ++flipped;
        }
    }
    return flipped;
}

/// Discard every transiting qubit and substitute a fresh uniformly chosen
/// |0>/|1>/|+>/|-> state. Entangled partners that never crossed the channel
/// keep their (now separable) conditional state.
inline void mitm_replace_stream(const std::vector<QubitId>& stream, RegisterPool& pool, Rng& rng) {
    static constexpr StateLabel kFresh[4] = {StateLabel::Zero, StateLabel::One, StateLabel::Plus,
                                             StateLabel::Minus};
    for (QubitId q : stream) {
        pool.split_qubit(q, rng);
        pool.set_register_label(pool.register_of(q), kFresh[rng.below(4)]);
    }
}

struct ModifiedImpersonationResult {
    Bits learned_bits;                    // Alice's opened reference bits (on the reveal set)
    std::vector<std::size_t> reveal_set;  // what Eve asked to be opened
    Bits guesses;                         // Eve's announced bits on the complement
    int mismatches = 0;
    bool alice_accepts = false;
};

/// Eve answers the mutual-authentication challenge in Bob's place. She can
/// mimic the message flow (the set sizes are granted to her), and the
/// opened positions hand her floor(k/2) bits of the session's reference
/// string, but those never repeat and the complement she must announce
/// blind: without the identities she cannot locate the authentication
/// decoys, let alone pick their bases, so each announced bit is a coin and
/// Alice accepts with probability 2^-ceil(k/2).
inline ModifiedImpersonationResult impersonate_bob_modified(const Bits& alice_info, Rng& eve_rng,
                                                            int tolerance = 0,
                                                            Transcript* tr = nullptr) {
    const std::size_t k = alice_info.size();
    ModifiedImpersonationResult r;
    r.reveal_set = draw_reveal_set(k, eve_rng);
    if (tr) tr->record("eve", "auth-reveal-request", std::to_string(r.reveal_set.size()) + " positions");

    std::vector<bool> revealed(k, false);
    for (std::size_t i : r.reveal_set) {
        revealed[i] = true;
        r.learned_bits.push_back(alice_info[i]);
    }
    if (tr) tr->record("alice", "auth-alice-reveal", std::to_string(r.reveal_set.size()) + " bits");

    for (std::size_t i = 0; i < k; ++i) {
        if (revealed[i]) continue;
        const std::uint8_t guess = static_cast<std::uint8_t>(eve_rng.coin());
        r.guesses.push_back(guess);
        if (guess != alice_info[i]) ++r.mismatches;
    }
    if (tr) tr->record("eve", "auth-bob-reveal", std::to_string(r.guesses.size()) + " bits");
    r.alice_accepts = r.mismatches <= tolerance;
    if (tr) tr->record("alice", "auth-verdict", r.alice_accepts ? "accept" : "reject");
    return r;
}

}  // namespace qsdc
