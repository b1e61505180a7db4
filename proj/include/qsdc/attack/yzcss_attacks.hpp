#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsdc/bits.hpp"
#include "qsdc/pool.hpp"
#include "qsdc/protocol/encoding.hpp"
#include "qsdc/protocol/yzcss.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

/// The eavesdropper's bit table: any two-qubit outcome she can obtain maps
/// to the bit the pair encodes, in either measurement basis.
inline int eve_bit_from_outcome(StateLabel outcome) { return decode_pair_label(outcome); }

/// What Eve accumulates while handling the channel: per slot, her basis
/// choice, her outcome, the state she forwarded, and the decoded bit.
struct YzcssEveRecord {
    std::vector<BasisName> bases;
    std::vector<StateLabel> outcomes;
    std::vector<StateLabel> resent;
    Bits m;  // one bit per slot
};

/// Optional replay script: fixed basis choices and forced outcomes, plus
/// picks for the fresh-state coins in the resend rule (consumed only when a
/// resend is not verbatim).
struct YzcssInterceptScript {
    std::vector<BasisName> bases;
    std::vector<StateLabel> outcomes;
    std::vector<int> resend_picks;
};

/// Forward a measured pair so that the carried bit is preserved: outcomes
/// that are themselves legal encodings travel verbatim; |00>/|11> become a
/// fresh Phi pair, Psi outcomes a fresh |01>/|10>.
inline StateLabel resend_label_for(StateLabel outcome, ChoiceSource& choices) {
    switch (outcome) {
        case StateLabel::ZZ01:
        case StateLabel::ZZ10:
        case StateLabel::PhiPlus:
        case StateLabel::PhiMinus: return outcome;
        case StateLabel::ZZ00:
        case StateLabel::ZZ11:
            return choices.pick(2) == 0 ? StateLabel::PhiPlus : StateLabel::PhiMinus;
        case StateLabel::PsiPlus:
        case StateLabel::PsiMinus:
            return choices.pick(2) == 0 ? StateLabel::ZZ01 : StateLabel::ZZ10;
        default: throw std::invalid_argument("resend_label_for: not a two-qubit outcome");
    }
}

/// Measure every transiting pair in a random (or scripted) basis, record
/// the decoded bit, and forward a bit-preserving replacement.
inline YzcssEveRecord intercept_resend_yzcss(const std::vector<YzcssPair>& slots,
                                             RegisterPool& pool, Rng& rng,
                                             const YzcssInterceptScript* script = nullptr) {
    if (script && (script->bases.size() != slots.size() || script->outcomes.size() != slots.size()))
        throw std::invalid_argument("intercept_resend_yzcss: script does not cover every slot");
    YzcssEveRecord rec;
    ScriptedChoices scripted_picks(script ? script->resend_picks : std::vector<int>{});
    RngChoices random_picks(rng);
    ChoiceSource& picks =
        (script && !script->resend_picks.empty()) ? static_cast<ChoiceSource&>(scripted_picks)
                                                  : static_cast<ChoiceSource&>(random_picks);
    for (std::size_t j = 0; j < slots.size(); ++j) {
        const BasisName bn =
            script ? script->bases[j] : (rng.coin() ? BasisName::Bell : BasisName::ZZ);
        const Basis& basis = basis_by_name(bn);
        StateLabel out;
        if (script) {
            pool.force_register_outcome(slots[j].reg, basis, script->outcomes[j]);
            out = script->outcomes[j];
        } else {
            out = pool.measure_pair(slots[j].qubits[0], slots[j].qubits[1], basis, rng);
        }
        const StateLabel resend = resend_label_for(out, picks);
        pool.set_register_label(slots[j].reg, resend);
        rec.bases.push_back(bn);
        rec.outcomes.push_back(out);
        rec.resent.push_back(resend);
        rec.m.push_back(static_cast<std::uint8_t>(eve_bit_from_outcome(out)));
    }
    return rec;
}

/// Eve in Bob's chair: she measures every slot in a random (or scripted)
/// basis and keeps the bits. Nothing is forwarded -- she is the endpoint --
/// so a script's resend picks are ignored.
inline YzcssEveRecord impersonate_bob_yzcss(const std::vector<YzcssPair>& slots,
                                            RegisterPool& pool, Rng& rng,
                                            const YzcssInterceptScript* script = nullptr) {
    if (script && (script->bases.size() != slots.size() || script->outcomes.size() != slots.size()))
        throw std::invalid_argument("impersonate_bob_yzcss: script does not cover every slot");
    YzcssEveRecord rec;
    for (std::size_t j = 0; j < slots.size(); ++j) {
        const BasisName bn =
            script ? script->bases[j] : (rng.coin() ? BasisName::Bell : BasisName::ZZ);
        StateLabel out;
        if (script) {
            pool.force_register_outcome(slots[j].reg, basis_by_name(bn), script->outcomes[j]);
            out = script->outcomes[j];
        } else {
            out = pool.measure_pair(slots[j].qubits[0], slots[j].qubits[1], basis_by_name(bn), rng);
        }
        rec.bases.push_back(bn);
        rec.outcomes.push_back(out);
        rec.m.push_back(static_cast<std::uint8_t>(eve_bit_from_outcome(out)));
    }
    return rec;
}

struct YzcssRecovered {
    Bits message;
    Bits id_a;
};

/// Reconstruct both the message and the sender identity from Eve's slot
/// bits plus the publicly announced decoy states. Adjacent slot bits
/// (2i-1, 2i) hold the i-th message bit and the i-th identity bit in an
/// unknown order: when they agree the order is irrelevant, and when they
/// differ the announced decoy state says which value is the identity bit
/// (|01>/|10> encode 0, Phi states encode 1). The receiver identity that
/// fixed the order is never needed.
inline YzcssRecovered eve_recover(const Bits& m, const std::vector<StateLabel>& announced_decoys) {
    const std::size_t n = announced_decoys.size();
    if (m.size() != 2 * n)
        throw std::invalid_argument("eve_recover: need two slot bits per announced decoy");
    YzcssRecovered out;
    out.message.resize(n);
    out.id_a.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t first = m[2 * i];
        const std::uint8_t second = m[2 * i + 1];
        if (first == second) {
            out.message[i] = first;
            out.id_a[i] = first;
        } else {
            const int id_bit = decode_pair_label(announced_decoys[i]);
            out.id_a[i] = static_cast<std::uint8_t>(id_bit);
            out.message[i] = static_cast<std::uint8_t>(1 - id_bit);
        }
    }
    return out;
}

}  // namespace qsdc
