#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qsdc/attack/yzcss_attacks.hpp"
#include "qsdc/pool.hpp"
#include "qsdc/protocol/modified.hpp"
#include "qsdc/protocol/yzcss.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

/// Outcome of one known-answer replay: a typed re-run of a fully worked
/// protocol trace with every coin pinned, checked field by field.
struct ReplayResult {
    std::string name;
    bool ok = true;
    std::string detail;  // first mismatch, empty when ok

    void fail(const std::string& what) {
        if (!ok) return;  // keep the first mismatch
        ok = false;
        detail = what;
    }
};

namespace replay_detail {

inline std::vector<StateLabel> labels(std::initializer_list<const char*> names) {
    std::vector<StateLabel> out;
    for (const char* n : names) out.push_back(label_from_string(n));
    return out;
}

inline std::string show(const std::vector<StateLabel>& seq) {
    std::string s;
    for (StateLabel l : seq) {
        if (!s.empty()) s += ',';
        s += to_string(l);
    }
    return s;
}

template <typename T>
std::string show_sizes(const std::vector<T>& v) {
    std::string s;
    for (const T& x : v) {
        if (!s.empty()) s += ',';
        s += std::to_string(x);
    }
    return s;
}

/// The session both original-protocol examples start from:
/// M=10110, sender identity 01101, receiver identity 01001.
inline YzcssSession example_session(RegisterPool& pool, YzcssInputs& in) {
    in.message = bits_from_string("10110");
    in.id_a = bits_from_string("01101");
    in.id_b = bits_from_string("01001");
    ScriptedChoices choices({0, 0, 0, 1, 0, 1, 1, 1, 0, 0});
    return yzcss_alice_encode(in, pool, choices);
}

}  // namespace replay_detail

/// Encoding walk-through of the original protocol: the pinned coin choices
/// must reproduce the published carrier sequence and decoy placement.
inline ReplayResult replay_yzcss_encoding() {
    using namespace replay_detail;
    ReplayResult r{"yzcss-encoding", true, ""};
    RegisterPool pool;
    YzcssInputs in;
    const YzcssSession s = example_session(pool, in);

    const std::vector<StateLabel> expect_sent =
        labels({"10", "Phi+", "01", "Phi-", "Phi-", "Phi+", "01", "Phi-", "01", "Phi+"});
    if (s.sent_labels != expect_sent)
        r.fail("carrier sequence: expected " + show(expect_sent) + " got " + show(s.sent_labels));
    const std::vector<std::size_t> expect_decoys{1, 4, 5, 7, 10};
    if (s.decoy_slots != expect_decoys)
        r.fail("decoy slots: expected " + show_sizes(expect_decoys) + " got " +
               show_sizes(s.decoy_slots));
    const std::vector<std::size_t> expect_msg{2, 3, 6, 8, 9};
    if (s.message_slots != expect_msg)
        r.fail("message slots: expected " + show_sizes(expect_msg) + " got " +
               show_sizes(s.message_slots));
    const std::vector<StateLabel> expect_announced =
        labels({"10", "Phi-", "Phi-", "01", "Phi+"});
    if (s.decoy_labels() != expect_announced)
        r.fail("announced decoys: expected " + show(expect_announced) + " got " +
               show(s.decoy_labels()));
    return r;
}

/// Impersonation walk-through of the original protocol: Eve's pinned bases
/// and outcomes must give the published slot-bit string, and the recovery
/// rule must return the full message and sender identity.
inline ReplayResult replay_yzcss_impersonation() {
    using namespace replay_detail;
    ReplayResult r{"yzcss-impersonation", true, ""};
    RegisterPool pool;
    YzcssInputs in;
    const YzcssSession s = example_session(pool, in);

    YzcssInterceptScript script;
    script.bases = {BasisName::ZZ,   BasisName::ZZ,   BasisName::Bell, BasisName::ZZ,
                    BasisName::Bell, BasisName::Bell, BasisName::Bell, BasisName::ZZ,
                    BasisName::ZZ,   BasisName::Bell};
    script.outcomes =
        labels({"10", "00", "Psi-", "11", "Phi-", "Phi+", "Psi+", "11", "01", "Phi+"});

    Rng unused(0);
    const YzcssEveRecord rec = impersonate_bob_yzcss(s.slots, pool, unused, &script);
    if (bits_to_string(rec.m) != "0101110101")
        r.fail("slot bits: expected 0101110101 got " + bits_to_string(rec.m));

    const YzcssRecovered got = eve_recover(rec.m, s.decoy_labels());
    if (got.message != in.message)
        r.fail("recovered message: expected " + bits_to_string(in.message) + " got " +
               bits_to_string(got.message));
    if (got.id_a != in.id_a)
        r.fail("recovered identity: expected " + bits_to_string(in.id_a) + " got " +
               bits_to_string(got.id_a));
    return r;
}

/// Encoding walk-through of the modified protocol: pinned coins and the
/// published permutation must weave the authentication decoys into exactly
/// the published positions, and an honest receiver must then decode the
/// message without any alarm going off.
inline ReplayResult replay_modified_encoding() {
    using namespace replay_detail;
    ReplayResult r{"modified-encoding", true, ""};
    RegisterPool pool;
    ModifiedInputs in;
    in.message = bits_from_string("1011010");
    in.id_a = bits_from_string("011");
    in.id_b = bits_from_string("010");
    ScriptedChoices choices({0, 0, 0, 1, 0, 0, 1, 0, 1, 1});
    const std::vector<std::size_t> perm{10, 7, 3, 6, 5, 0, 2, 12, 1, 8, 11, 4, 9, 13};
    Rng alice_rng(0);  // untouched: permutation forced, no channel decoys
    const ModifiedSession s =
        modified_alice_encode(in, 0, pool, choices, alice_rng, &perm);

    if (compute_lambda(7, 3) != 4) r.fail("lambda: expected 4");
    const std::vector<StateLabel> expect_pairs =
        labels({"Phi+", "01", "Phi+", "Phi-", "01", "Phi+", "10"});
    if (s.pair_labels != expect_pairs)
        r.fail("pair states: expected " + show(expect_pairs) + " got " + show(s.pair_labels));
    const std::vector<StateLabel> expect_auth = labels({"0", "-", "-"});
    if (s.auth_labels != expect_auth)
        r.fail("auth decoys: expected " + show(expect_auth) + " got " + show(s.auth_labels));
    const std::vector<std::size_t> expect_pos{1, 10, 11};
    if (s.auth_positions != expect_pos)
        r.fail("auth positions: expected " + show_sizes(expect_pos) + " got " +
               show_sizes(s.auth_positions));
    for (std::size_t i = 0; i < s.auth_labels.size(); ++i)
        if (info_bit(s.auth_labels[i]) != in.id_a[i]) r.fail("auth info bits disagree with identity");

    // The transmitted order must match the published sequence: auth decoys
    // at their positions, data qubits permuted in between.
    if (s.stream.size() != 17) r.fail("stream length: expected 17");
    {
        const std::vector<QubitId> permuted = apply_permutation(s.data_qubits, perm);
        std::size_t next_data = 0;
        for (std::size_t pos = 1; pos <= 17 && r.ok; ++pos) {
            const bool is_auth = pos == 1 || pos == 10 || pos == 11;
            if (is_auth) continue;
            if (s.stream[pos - 1] != permuted[next_data++])
                r.fail("stream position " + std::to_string(pos) + " holds the wrong qubit");
        }
    }

    Rng bob_rng(7);
    const ModifiedBobResult bob = modified_bob_run(s, in, pool, bob_rng, 0.05);
    if (!bob.completed) r.fail("honest run did not complete");
    if (bob.channel.errors != 0) r.fail("honest run saw channel-decoy errors");
    if (!bob.auth.bob_accepts_alice || !bob.auth.alice_accepts_bob)
        r.fail("honest mutual authentication failed");
    if (bob.decoded_message != in.message)
        r.fail("decoded message: expected " + bits_to_string(in.message) + " got " +
               bits_to_string(bob.decoded_message));
    return r;
}

inline std::vector<ReplayResult> run_all_replays() {
    return {replay_yzcss_encoding(), replay_yzcss_impersonation(), replay_modified_encoding()};
}

}  // namespace qsdc
