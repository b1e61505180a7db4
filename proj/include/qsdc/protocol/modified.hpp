#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsdc/bits.hpp"
#include "qsdc/pool.hpp"
#include "qsdc/protocol/encoding.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/transcript.hpp"

namespace qsdc {

/// Session inputs for the hardened variant: an N-bit message and two k-bit
/// identity strings (k may be much smaller than N and is never announced).
struct ModifiedInputs {
    Bits message;
    Bits id_a;
    Bits id_b;
};

/// Spacing between consecutive authentication decoys: lambda = floor(2N/k).
inline std::size_t compute_lambda(std::size_t n_bits, std::size_t k_bits) {
    if (n_bits == 0) throw std::invalid_argument("compute_lambda: message must be non-empty");
    if (k_bits == 0) throw std::invalid_argument("compute_lambda: identity must be non-empty");
    const std::size_t lambda = (2 * n_bits) / k_bits;
    if (lambda == 0)
        throw std::invalid_argument("compute_lambda: identity longer than the qubit sequence");
    return lambda;
}

inline void validate(const ModifiedInputs& in) {
    if (in.id_a.size() != in.id_b.size())
        throw std::invalid_argument("modified: identity strings must share one length");
    compute_lambda(in.message.size(), in.id_a.size());
    require_bits(in.message, "modified message");
    require_bits(in.id_a, "modified id_a");
    require_bits(in.id_b, "modified id_b");
}

/// 1-based positions of the k authentication decoys inside the
/// (2N+k)-qubit sequence. Decoy i sits before data qubit lambda*(i-1)+1
/// when the i-th receiver-identity bit is 0 and after data qubit lambda*i
/// when it is 1; equal insertion gaps keep lower i first, which makes the
/// final position of decoy i exactly gap_i + i.
inline std::vector<std::size_t> auth_decoy_positions(const Bits& id_b, std::size_t n_bits) {
    require_bits(id_b, "id_b");
    const std::size_t k = id_b.size();
    const std::size_t lambda = compute_lambda(n_bits, k);
    std::vector<std::size_t> out(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t gap = (id_b[i - 1] == 0) ? lambda * (i - 1) : lambda * i;
        out[i - 1] = gap + i;
    }
    return out;
}

/// Reorder `seq` so that result[j] = seq[perm[j]] (perm lists, for every
/// target position, which source element lands there).
template <typename T>
std::vector<T> apply_permutation(const std::vector<T>& seq, const std::vector<std::size_t>& perm) {
    if (seq.size() != perm.size())
        throw std::invalid_argument("apply_permutation: size mismatch");
    std::vector<T> out(seq.size());
    std::vector<bool> used(seq.size(), false);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        if (perm[j] >= seq.size() || used[perm[j]])
            throw std::invalid_argument("apply_permutation: not a permutation");
        used[perm[j]] = true;
        out[j] = seq[perm[j]];
    }
    return out;
}

inline std::vector<std::size_t> invert_permutation(const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> inv(perm.size());
    std::vector<bool> used(perm.size(), false);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        if (perm[j] >= perm.size() || used[perm[j]])
            throw std::invalid_argument("invert_permutation: not a permutation");
        used[perm[j]] = true;
        inv[perm[j]] = j;
    }
    return inv;
}

/// Remove the listed 1-based positions from a sequence.
inline std::vector<QubitId> remove_positions(const std::vector<QubitId>& seq,
                                             const std::vector<std::size_t>& positions) {
    std::vector<bool> drop(seq.size(), false);
    for (std::size_t p : positions) {
        if (p == 0 || p > seq.size())
            throw std::out_of_range("remove_positions: position out of range");
        drop[p - 1] = true;
    }
    std::vector<QubitId> out;
    out.reserve(seq.size() - positions.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (!drop[i]) out.push_back(seq[i]);
    return out;
}

/// Alice's desk after encoding. `stream` is what the channel carries; the
/// remaining fields stay private until the protocol step that announces
/// them (channel-decoy data at the security check, the permutation after
/// mutual authentication; identity-derived placements are never announced).
struct ModifiedSession {
    std::size_t n_bits = 0;
    std::size_t k_bits = 0;
    std::vector<QubitId> stream;                       // as transmitted, 2N+k+c qubits
    std::vector<QubitId> data_qubits;                  // original pair order, 2N
    std::vector<std::size_t> perm;                     // 0-based source-per-target, size 2N
    std::vector<StateLabel> pair_labels;               // per message bit
    std::vector<StateLabel> auth_labels;               // per identity bit
    std::vector<std::size_t> auth_positions;           // 1-based in the 2N+k sequence
    std::vector<std::size_t> channel_decoy_positions;  // 1-based in `stream`
    std::vector<StateLabel> channel_decoy_labels;
};

inline std::size_t default_channel_decoys(std::size_t n_bits, std::size_t k_bits) {
    return (2 * n_bits + k_bits + 3) / 4;  // ceil((2N+k)/4)
}

/// Encode pairs, permute them, weave in the authentication decoys, then
/// sprinkle channel decoys at fresh random positions. Message bits consume
/// `choices` first (one pick each), then identity bits.
inline ModifiedSession modified_alice_encode(const ModifiedInputs& in,
                                             std::size_t channel_decoys, RegisterPool& pool,
                                             ChoiceSource& choices, Rng& rng,
                                             const std::vector<std::size_t>* forced_perm = nullptr,
                                             Transcript* tr = nullptr) {
    validate(in);
    const std::size_t n = in.message.size();
    const std::size_t k = in.id_a.size();

    ModifiedSession s;
    s.n_bits = n;
    s.k_bits = k;

    s.pair_labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.pair_labels[i] = encode_pair_bit(in.message[i], choices);
    s.auth_labels.resize(k);
    for (std::size_t i = 0; i < k; ++i) s.auth_labels[i] = encode_auth_bit(in.id_a[i], choices);

    s.data_qubits.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<QubitId> q = pool.add_label(s.pair_labels[i]);
        s.data_qubits.push_back(q[0]);
        s.data_qubits.push_back(q[1]);
    }
    std::vector<QubitId> auth_qubits(k);
    for (std::size_t i = 0; i < k; ++i) auth_qubits[i] = pool.add_label(s.auth_labels[i])[0];

    if (forced_perm) {
        if (forced_perm->size() != 2 * n)
            throw std::invalid_argument("modified_alice_encode: forced permutation has wrong size");
        s.perm = *forced_perm;
    } else {
        s.perm = rng.permutation(2 * n);
    }
    const std::vector<QubitId> permuted = apply_permutation(s.data_qubits, s.perm);

    s.auth_positions = auth_decoy_positions(in.id_b, n);
    std::vector<QubitId> with_auth;
    with_auth.reserve(2 * n + k);
    {
        std::size_t next_auth = 0;
        std::size_t next_data = 0;
        for (std::size_t pos = 1; pos <= 2 * n + k; ++pos) {
            if (next_auth < k && s.auth_positions[next_auth] == pos)
                with_auth.push_back(auth_qubits[next_auth++]);
            else
                with_auth.push_back(permuted[next_data++]);
        }
    }

    const std::size_t total = with_auth.size() + channel_decoys;
    s.channel_decoy_labels.resize(channel_decoys);
    static constexpr StateLabel kDecoyStates[4] = {StateLabel::Zero, StateLabel::One,
                                                   StateLabel::Plus, StateLabel::Minus};
    for (auto& label : s.channel_decoy_labels) label = kDecoyStates[rng.below(4)];
    if (channel_decoys > 0) {
        std::vector<std::size_t> all = rng.permutation(total);
        all.resize(channel_decoys);
        std::sort(all.begin(), all.end());
        s.channel_decoy_positions.assign(all.begin(), all.end());
        for (auto& p : s.channel_decoy_positions) ++p;  // to 1-based
    }

    s.stream.reserve(total);
    {
        std::size_t next_decoy = 0;
        std::size_t next_carrier = 0;
        for (std::size_t pos = 1; pos <= total; ++pos) {
            if (next_decoy < channel_decoys && s.channel_decoy_positions[next_decoy] == pos)
                s.stream.push_back(pool.add_label(s.channel_decoy_labels[next_decoy++])[0]);
            else
                s.stream.push_back(with_auth[next_carrier++]);
        }
    }
    if (tr) tr->record("alice", "channel-send", std::to_string(total) + " qubits");
    return s;
}

struct ChannelCheckStats {
    int errors = 0;
    int count = 0;
    int z_errors = 0;
    int z_count = 0;
    int x_errors = 0;
    int x_count = 0;
    double error_rate = 0.0;
    bool aborted = false;
    std::vector<StateLabel> outcomes;
};

/// Bob measures each announced channel decoy in its announced basis and
/// compares against the announced state. Abort when the error rate exceeds
/// the threshold.
inline ChannelCheckStats modified_channel_check(const std::vector<QubitId>& stream,
                                                const std::vector<std::size_t>& positions,
                                                const std::vector<StateLabel>& labels,
                                                RegisterPool& pool, Rng& rng, double threshold) {
    if (positions.size() != labels.size())
        throw std::invalid_argument("modified_channel_check: positions/labels size mismatch");
    ChannelCheckStats st;
    st.count = static_cast<int>(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        const StateLabel announced = labels[j];
        const Basis& basis = basis_by_name(basis_of_label(announced));
        const StateLabel out = pool.measure_qubit(stream.at(positions[j] - 1), basis, rng);
        st.outcomes.push_back(out);
        const bool err = (out != announced);
        st.errors += err;
        if (basis.name == BasisName::Z) {
            ++st.z_count;
            st.z_errors += err;
        } else {
            ++st.x_count;
            st.x_errors += err;
        }
    }
    st.error_rate = st.count ? static_cast<double>(st.errors) / st.count : 0.0;
    st.aborted = st.error_rate > threshold;
    return st;
}

/// Bob's random choice of which identity positions Alice must open.
inline std::vector<std::size_t> draw_reveal_set(std::size_t k_bits, Rng& rng) {
    std::vector<std::size_t> all = rng.permutation(k_bits);
    all.resize(k_bits / 2);
    std::sort(all.begin(), all.end());
    return all;
}

struct AuthResult {
    Bits bob_measured;                    // k info bits from the auth decoys
    std::vector<std::size_t> reveal_set;  // 0-based indices Alice must open
    int bob_mismatches = 0;               // on the reveal set
    int alice_mismatches = 0;             // on the complement
    bool bob_accepts_alice = false;
    bool alice_accepts_bob = false;
};

/// The two-way identity comparison over the shared reference string: the
/// info bits of the states Alice actually prepared, which Bob's basis-correct
/// measurements reproduce exactly. Bob checks Alice's opened bits against
/// his measurements on the reveal set; Alice checks Bob's announced bits on
/// the complement. `tolerance` is the number of mismatches either side
/// forgives (0 in the honest protocol).
inline AuthResult modified_mutual_auth(const Bits& bob_measured, const Bits& alice_info,
                                       Rng& bob_rng, int tolerance, Transcript* tr = nullptr) {
    const std::size_t k = alice_info.size();
    if (bob_measured.size() != k)
        throw std::invalid_argument("modified_mutual_auth: bit-count mismatch");
    AuthResult r;
    r.bob_measured = bob_measured;
    r.reveal_set = draw_reveal_set(k, bob_rng);
    if (tr) tr->record("bob", "auth-reveal-request", std::to_string(r.reveal_set.size()) + " positions");

    std::vector<bool> revealed(k, false);
    for (std::size_t i : r.reveal_set) {
        revealed[i] = true;
        if (alice_info[i] != bob_measured[i]) ++r.bob_mismatches;
    }
    if (tr) tr->record("alice", "auth-alice-reveal", std::to_string(r.reveal_set.size()) + " bits");
    r.bob_accepts_alice = r.bob_mismatches <= tolerance;

    for (std::size_t i = 0; i < k; ++i) {
        if (revealed[i]) continue;
        if (alice_info[i] != bob_measured[i]) ++r.alice_mismatches;
    }
    if (tr) tr->record("bob", "auth-bob-reveal", std::to_string(k - r.reveal_set.size()) + " bits");
    r.alice_accepts_bob = r.alice_mismatches <= tolerance;
    if (tr)
        tr->record("alice", "auth-verdict", r.alice_accepts_bob ? "accept" : "reject");
    return r;
}

/// The k-bit reference string for mutual authentication: bit i is the info
/// bit of the state the i-th authentication decoy was prepared in.
inline Bits auth_info_bits(const std::vector<StateLabel>& auth_labels) {
    Bits out(auth_labels.size());
    for (std::size_t i = 0; i < auth_labels.size(); ++i)
        out[i] = static_cast<std::uint8_t>(info_bit(auth_labels[i]));
    return out;
}

struct ModifiedBobResult {
    ChannelCheckStats channel;
    bool channel_aborted = false;
    AuthResult auth;
    bool auth_ran = false;
    bool auth_aborted = false;
    bool completed = false;
    std::vector<StateLabel> pair_outcomes;
    Bits decoded_message;
};

/// Bob's whole receiving procedure against a cooperating Alice: channel
/// security check, mutual authentication, then (only if both passed) the
/// permutation is announced and the payload decoded. Unlike the original
/// protocol there is no payload reading on abort -- without the permutation
/// Bob cannot even pair the qubits up.
inline ModifiedBobResult modified_bob_run(const ModifiedSession& session,
                                          const ModifiedInputs& secrets, RegisterPool& pool,
                                          Rng& rng, double threshold, int auth_tolerance = 0,
                                          Transcript* tr = nullptr) {
    validate(secrets);
    if (secrets.message.size() != session.n_bits || secrets.id_a.size() != session.k_bits)
        throw std::invalid_argument("modified_bob_run: secrets do not match the session");
    const std::size_t n = session.n_bits;
    const std::size_t k = session.k_bits;

    ModifiedBobResult r;
    if (tr)
        tr->record("alice", "channel-decoy-reveal",
                   std::to_string(session.channel_decoy_positions.size()) + " decoys");
    r.channel = modified_channel_check(session.stream, session.channel_decoy_positions,
                                       session.channel_decoy_labels, pool, rng, threshold);
    if (tr)
        tr->record("bob", "channel-verdict",
                   (r.channel.aborted ? "abort" : "continue") + std::string(" rate=") +
                       std::to_string(r.channel.error_rate));
    r.channel_aborted = r.channel.aborted;
    if (r.channel_aborted) return r;

    const std::vector<QubitId> carriers =
        remove_positions(session.stream, session.channel_decoy_positions);
    const std::vector<std::size_t> auth_pos = auth_decoy_positions(secrets.id_b, n);

    Bits bob_bits(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Basis& basis = (secrets.id_a[i] == 0) ? z_basis() : x_basis();
        const StateLabel out = pool.measure_qubit(carriers.at(auth_pos[i] - 1), basis, rng);
        bob_bits[i] = static_cast<std::uint8_t>(info_bit(out));
    }
    r.auth = modified_mutual_auth(bob_bits, auth_info_bits(session.auth_labels), rng,
                                  auth_tolerance, tr);
    r.auth_ran = true;
    r.auth_aborted = !(r.auth.bob_accepts_alice && r.auth.alice_accepts_bob);
    if (r.auth_aborted) return r;

    if (tr) tr->record("alice", "permutation", std::to_string(session.perm.size()) + " entries");
    const std::vector<QubitId> permuted = remove_positions(carriers, auth_pos);
    std::vector<QubitId> original(permuted.size());
    for (std::size_t j = 0; j < permuted.size(); ++j) original[session.perm[j]] = permuted[j];

    r.decoded_message.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Basis& basis = rng.coin() ? bell_basis() : zz_basis();
        const StateLabel out = pool.measure_pair(original[2 * i], original[2 * i + 1], basis, rng);
        r.pair_outcomes.push_back(out);
        r.decoded_message[i] = static_cast<std::uint8_t>(decode_pair_label(out));
    }
    r.completed = true;
    return r;
}

}  // namespace qsdc
