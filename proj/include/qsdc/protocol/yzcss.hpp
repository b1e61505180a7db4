#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsdc/bits.hpp"
#include "qsdc/pool.hpp"
#include "qsdc/protocol/encoding.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/transcript.hpp"

namespace qsdc {

/// Session inputs. Message and both identity strings share one length N.
struct YzcssInputs {
    Bits message;
    Bits id_a;
    Bits id_b;
};

inline void validate(const YzcssInputs& in) {
    const std::size_t n = in.message.size();
    if (n == 0) throw std::invalid_argument("yzcss: message must be non-empty");
    if (in.id_a.size() != n || in.id_b.size() != n)
        throw std::invalid_argument("yzcss: message and identities must share one length");
    require_bits(in.message, "yzcss message");
    require_bits(in.id_a, "yzcss id_a");
    require_bits(in.id_b, "yzcss id_b");
}

/// One channel slot: a two-qubit pair, addressed both ways.
struct YzcssPair {
    RegisterId reg;
    std::array<QubitId, 2> qubits;
};

/// Everything Alice holds after encoding. `slots` is the public channel
/// (what travels to Bob); the rest stays on Alice's desk until the protocol
/// step that announces it.
struct YzcssSession {
    std::size_t n_bits = 0;
    std::vector<YzcssPair> slots;             // channel order
    std::vector<StateLabel> sent_labels;      // per slot, Alice-private
    std::vector<std::size_t> decoy_slots;     // 1-based, entry i-1 = slot of the i-th decoy
    std::vector<std::size_t> message_slots;   // 1-based, entry i-1 = slot of the i-th message pair

    /// Decoy labels in index order, i.e. the list Alice announces during
    /// the security check.
    std::vector<StateLabel> decoy_labels() const {
        std::vector<StateLabel> out;
        out.reserve(decoy_slots.size());
        for (std::size_t slot : decoy_slots) out.push_back(sent_labels[slot - 1]);
        return out;
    }
};

/// Slot (1-based) of each decoy pair: the i-th decoy precedes the i-th
/// message pair when the i-th receiver-identity bit is 0, and follows it
/// when that bit is 1.
inline std::vector<std::size_t> yzcss_decoy_slots(const Bits& id_b) {
    std::vector<std::size_t> out(id_b.size());
    for (std::size_t i = 0; i < id_b.size(); ++i)
        out[i] = (id_b[i] == 0) ? (2 * i + 1) : (2 * i + 2);
    return out;
}

/// Encode message and sender-identity bits into pair states and interleave
/// them by the receiver identity. Message pairs consume choices first, then
/// decoy pairs; registers are created in channel order.
inline YzcssSession yzcss_alice_encode(const YzcssInputs& in, RegisterPool& pool,
                                       ChoiceSource& choices, Transcript* tr = nullptr) {
    validate(in);
    const std::size_t n = in.message.size();

    std::vector<StateLabel> msg_labels(n);
    for (std::size_t i = 0; i < n; ++i) msg_labels[i] = encode_pair_bit(in.message[i], choices);
    std::vector<StateLabel> decoy_labels(n);
    for (std::size_t i = 0; i < n; ++i) decoy_labels[i] = encode_pair_bit(in.id_a[i], choices);

    YzcssSession s;
    s.n_bits = n;
    s.decoy_slots = yzcss_decoy_slots(in.id_b);
    s.message_slots.resize(n);
    s.sent_labels.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        s.message_slots[i] = (in.id_b[i] == 0) ? (2 * i + 2) : (2 * i + 1);
        s.sent_labels[s.decoy_slots[i] - 1] = decoy_labels[i];
        s.sent_labels[s.message_slots[i] - 1] = msg_labels[i];
    }
    s.slots.reserve(2 * n);
    for (std::size_t slot = 0; slot < 2 * n; ++slot) {
        const std::vector<QubitId> q = pool.add_label(s.sent_labels[slot]);
        s.slots.push_back(YzcssPair{pool.register_of(q[0]), {q[0], q[1]}});
    }
    if (tr) tr->record("alice", "channel-send", std::to_string(2 * n) + " pairs");
    return s;
}

struct YzcssBobResult {
    std::vector<StateLabel> decoy_outcomes;    // per decoy index
    int decoy_errors = 0;
    int decoy_count = 0;
    double decoy_error_rate = 0.0;
    bool aborted = false;
    std::vector<StateLabel> message_outcomes;  // per message index
    Bits decoded_message;
};

/// Bob's whole receiving procedure. He measures the decoys in the bases the
/// sender identity dictates, compares against the labels Alice announced,
/// and publishes the verdict; then he measures the message pairs in randomly
/// chosen bases and decodes. The payload measurement happens either way --
/// all pairs are already in his lab -- so an aborted run still yields his
/// would-be reading; `aborted` records whether he trusts it.
inline YzcssBobResult yzcss_bob_run(const std::vector<YzcssPair>& slots, const Bits& id_a,
                                    const Bits& id_b,
                                    const std::vector<StateLabel>& revealed_decoys,
                                    RegisterPool& pool, Rng& rng, double threshold,
                                    Transcript* tr = nullptr) {
    const std::size_t n = id_a.size();
    if (id_b.size() != n || revealed_decoys.size() != n || slots.size() != 2 * n)
        throw std::invalid_argument("yzcss_bob_run: inconsistent sizes");

    const std::vector<std::size_t> decoys = yzcss_decoy_slots(id_b);
    YzcssBobResult r;
    r.decoy_count = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Basis& basis = (id_a[i] == 0) ? zz_basis() : bell_basis();
        const YzcssPair& pair = slots[decoys[i] - 1];
        const StateLabel out = pool.measure_pair(pair.qubits[0], pair.qubits[1], basis, rng);
        r.decoy_outcomes.push_back(out);
        if (out != revealed_decoys[i]) ++r.decoy_errors;
    }
    r.decoy_error_rate = static_cast<double>(r.decoy_errors) / static_cast<double>(n);
    r.aborted = r.decoy_error_rate > threshold;
    if (tr)
        tr->record("bob", "security-verdict",
                   (r.aborted ? "abort" : "continue") +
                       std::string(" rate=") + std::to_string(r.decoy_error_rate));

    r.decoded_message.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t slot = (id_b[i] == 0) ? (2 * i + 2) : (2 * i + 1);
        const Basis& basis = rng.coin() ? bell_basis() : zz_basis();
        const YzcssPair& pair = slots[slot - 1];
        const StateLabel out = pool.measure_pair(pair.qubits[0], pair.qubits[1], basis, rng);
        r.message_outcomes.push_back(out);
        r.decoded_message[i] = static_cast<std::uint8_t>(decode_pair_label(out));
    }
    return r;
}

}  // namespace qsdc
