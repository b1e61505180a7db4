#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>

#include "qsdc/attack/entangle_measure.hpp"
#include "qsdc/attack/modified_attacks.hpp"
#include "qsdc/attack/yzcss_attacks.hpp"
#include "qsdc/harness/stats.hpp"
#include "qsdc/pool.hpp"
#include "qsdc/protocol/modified.hpp"
#include "qsdc/protocol/yzcss.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

enum class Protocol { Yzcss, Modified };
enum class Attack { None, InterceptResend, Impersonation, EntangleMeasure, Dos, Mitm };

inline std::string to_string(Protocol p) {
    return p == Protocol::Yzcss ? "yzcss" : "modified";
}

inline Protocol protocol_from_string(const std::string& s) {
    if (s == "yzcss") return Protocol::Yzcss;
    if (s == "modified") return Protocol::Modified;
    throw std::invalid_argument("unknown protocol: " + s);
}

inline std::string to_string(Attack a) {
    switch (a) {
        case Attack::None: return "none";
        case Attack::InterceptResend: return "intercept-resend";
        case Attack::Impersonation: return "impersonation";
        case Attack::EntangleMeasure: return "entangle-measure";
        case Attack::Dos: return "dos";
        case Attack::Mitm: return "mitm";
    }
    throw std::invalid_argument("unknown attack");
}

inline Attack attack_from_string(const std::string& s) {
    if (s == "none") return Attack::None;
    if (s == "intercept-resend") return Attack::InterceptResend;
    if (s == "impersonation") return Attack::Impersonation;
    if (s == "entangle-measure") return Attack::EntangleMeasure;
    if (s == "dos") return Attack::Dos;
    if (s == "mitm") return Attack::Mitm;
    throw std::invalid_argument("unknown attack: " + s);
}

enum class ProbeFamily { Identity, Cnot, Rotation };

/// Which entangling probe the entangle-measure attack uses.
struct ProbeSpec {
    ProbeFamily family = ProbeFamily::Identity;
    double theta = 0.0;

    EntangleParams make() const {
        switch (family) {
            case ProbeFamily::Identity: return EntangleParams::identity();
            case ProbeFamily::Cnot: return EntangleParams::cnot_probe();
            case ProbeFamily::Rotation: return EntangleParams::rotation(theta);
        }
        throw std::invalid_argument("unknown probe family");
    }

    std::string to_string() const {
        switch (family) {
            case ProbeFamily::Identity: return "identity";
            case ProbeFamily::Cnot: return "cnot";
            case ProbeFamily::Rotation: {
                char buf[40];
                std::snprintf(buf, sizeof buf, "rot:%.6g", theta);
                return buf;
            }
        }
        throw std::invalid_argument("unknown probe family");
    }

    static ProbeSpec parse(const std::string& s) {
        if (s == "identity") return {};
        if (s == "cnot") return {ProbeFamily::Cnot, 0.0};
        if (s.rfind("rot:", 0) == 0) {
            std::size_t used = 0;
            double theta = 0.0;
            try {
                theta = std::stod(s.substr(4), &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad probe angle in: " + s);
            }
            if (used != s.size() - 4) throw std::invalid_argument("bad probe angle in: " + s);
            return {ProbeFamily::Rotation, theta};
        }
        throw std::invalid_argument("unknown probe: " + s + " (expected identity|cnot|rot:<theta>)");
    }
};

struct ScenarioConfig {
    Protocol protocol = Protocol::Yzcss;
    Attack attack = Attack::None;
    std::size_t message_bits = 16;
    std::size_t id_bits = 8;           // modified protocol only
    long channel_decoys = -1;          // modified protocol only; -1 = pick the default
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    double threshold = 0.05;
    int auth_tolerance = 0;            // mismatches forgiven at mutual authentication
    double dos_p = 0.1;
    ProbeSpec probe;

    std::size_t resolved_channel_decoys() const {
        if (channel_decoys >= 0) return static_cast<std::size_t>(channel_decoys);
        return default_channel_decoys(message_bits, id_bits);
    }

    void validate() const {
        if (message_bits == 0) throw std::invalid_argument("message-bits must be positive");
        if (trials == 0) throw std::invalid_argument("trials must be positive");
        if (threshold < 0.0 || threshold > 1.0)
            throw std::invalid_argument("threshold must lie in [0,1]");
        if (dos_p < 0.0 || dos_p > 1.0) throw std::invalid_argument("dos-p must lie in [0,1]");
        if (auth_tolerance < 0) throw std::invalid_argument("auth tolerance must be >= 0");
        if (protocol == Protocol::Yzcss) {
            if (attack != Attack::None && attack != Attack::InterceptResend &&
                attack != Attack::Impersonation)
                throw std::invalid_argument("attack '" + qsdc::to_string(attack) +
                                            "' is not defined for the yzcss protocol");
        } else {
            compute_lambda(message_bits, id_bits);  // throws when k is unusable
        }
    }
};

enum class AbortStage { None, Channel, Auth };

/// Raw observations from one protocol run. Optionals stay empty when the
/// scenario never put the quantity in play.
struct TrialReport {
    bool detected = false;
    AbortStage abort_stage = AbortStage::None;
    bool completed = false;
    int decoy_errors = 0;
    int decoy_count = 0;
    int z_decoy_errors = 0;
    int z_decoy_count = 0;
    int x_decoy_errors = 0;
    int x_decoy_count = 0;
    double channel_error_rate = 0.0;
    std::optional<bool> bob_accepts_alice;
    std::optional<bool> alice_accepts_bob;
    std::optional<bool> eve_exact;
    int eve_bit_hits = 0;
    int eve_bit_count = 0;
    std::optional<bool> bob_correct;
    int msg_bit_errors = 0;
    int msg_bit_count = 0;
    std::optional<bool> integrity_mismatch;
};

inline void fold(Metrics& m, const TrialReport& r) {
    m.detected.add(r.detected);
    m.abort_channel.add(r.abort_stage == AbortStage::Channel);
    m.abort_auth.add(r.abort_stage == AbortStage::Auth);
    m.completed.add(r.completed);
    m.decoy_error.add_counts(static_cast<std::uint64_t>(r.decoy_errors),
                             static_cast<std::uint64_t>(r.decoy_count));
    m.z_decoy_error.add_counts(static_cast<std::uint64_t>(r.z_decoy_errors),
                               static_cast<std::uint64_t>(r.z_decoy_count));
    m.x_decoy_error.add_counts(static_cast<std::uint64_t>(r.x_decoy_errors),
                               static_cast<std::uint64_t>(r.x_decoy_count));
    if (r.bob_accepts_alice) m.auth_bob_accepts_alice.add(*r.bob_accepts_alice);
    if (r.alice_accepts_bob) m.auth_alice_accepts_bob.add(*r.alice_accepts_bob);
    if (r.eve_exact) m.eve_exact_recovery.add(*r.eve_exact);
    m.eve_bit_accuracy.add_counts(static_cast<std::uint64_t>(r.eve_bit_hits),
                                  static_cast<std::uint64_t>(r.eve_bit_count));
    if (r.bob_correct) m.bob_message_correct.add(*r.bob_correct);
    m.message_bit_error.add_counts(static_cast<std::uint64_t>(r.msg_bit_errors),
                                   static_cast<std::uint64_t>(r.msg_bit_count));
    if (r.integrity_mismatch) m.integrity_mismatch.add(*r.integrity_mismatch);
}

namespace detail {

inline void score_eve_guess(TrialReport& rep, const Bits& truth_message, const Bits& guess,
                            const std::optional<Bits>& truth_id = std::nullopt,
                            const std::optional<Bits>& guess_id = std::nullopt) {
    bool exact = guess == truth_message;
    if (truth_id && guess_id) exact = exact && *guess_id == *truth_id;
    rep.eve_exact = exact;
    rep.eve_bit_count = static_cast<int>(truth_message.size());
    for (std::size_t i = 0; i < truth_message.size(); ++i)
        rep.eve_bit_hits += (guess[i] == truth_message[i]);
}

inline TrialReport run_yzcss_trial(const ScenarioConfig& cfg, Rng& trial_rng, Rng& alice_rng,
                                   Rng& eve_rng, Rng& bob_rng) {
    const std::size_t n = cfg.message_bits;
    YzcssInputs in;
    in.message = random_bits(trial_rng, n);
    in.id_a = random_bits(trial_rng, n);
    in.id_b = random_bits(trial_rng, n);

    RegisterPool pool;
    RngChoices choices(alice_rng);
    const YzcssSession session = yzcss_alice_encode(in, pool, choices);
    TrialReport rep;

    if (cfg.attack == Attack::Impersonation) {
        const YzcssEveRecord rec = impersonate_bob_yzcss(session.slots, pool, eve_rng);
        const YzcssRecovered got = eve_recover(rec.m, session.decoy_labels());
        score_eve_guess(rep, in.message, got.message, in.id_a, got.id_a);
        // Alice only ever listens in this protocol; there is nothing on her
        // side that could flag the impostor.
        return rep;
    }

    std::optional<YzcssEveRecord> rec;
    if (cfg.attack == Attack::InterceptResend)
        rec = intercept_resend_yzcss(session.slots, pool, eve_rng);

    const std::vector<StateLabel> revealed = session.decoy_labels();
    const YzcssBobResult bob =
        yzcss_bob_run(session.slots, in.id_a, in.id_b, revealed, pool, bob_rng, cfg.threshold);

    rep.decoy_errors = bob.decoy_errors;
    rep.decoy_count = bob.decoy_count;
    rep.channel_error_rate = bob.decoy_error_rate;
    rep.detected = bob.aborted;
    rep.abort_stage = bob.aborted ? AbortStage::Channel : AbortStage::None;
    rep.completed = !bob.aborted;
    rep.bob_correct = (bob.decoded_message == in.message);
    rep.msg_bit_count = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i)
        rep.msg_bit_errors += (bob.decoded_message[i] != in.message[i]);
    if (rep.completed) rep.integrity_mismatch = !*rep.bob_correct;

    if (rec) {
        const YzcssRecovered got = eve_recover(rec->m, revealed);
        score_eve_guess(rep, in.message, got.message, in.id_a, got.id_a);
    }
    return rep;
}

inline TrialReport run_modified_trial(const ScenarioConfig& cfg, Rng& trial_rng, Rng& alice_rng,
                                      Rng& eve_rng, Rng& bob_rng) {
    const std::size_t n = cfg.message_bits;
    const std::size_t k = cfg.id_bits;
    ModifiedInputs in;
    in.message = random_bits(trial_rng, n);
    in.id_a = random_bits(trial_rng, k);
    in.id_b = random_bits(trial_rng, k);

    RegisterPool pool;
    RngChoices choices(alice_rng);
    const ModifiedSession session = modified_alice_encode(in, cfg.resolved_channel_decoys(),
                                                          pool, choices, alice_rng);
    TrialReport rep;

    switch (cfg.attack) {
        case Attack::None: break;
        case Attack::InterceptResend: {
            intercept_resend_stream(session.stream, pool, eve_rng);
            // Without the permutation Eve cannot pair positions into bits;
            // her best payload estimate is a blind guess per bit.
            Bits guess(n);
            for (auto& b : guess) b = static_cast<std::uint8_t>(eve_rng.coin());
            score_eve_guess(rep, in.message, guess);
            break;
        }
        case Attack::EntangleMeasure: {
            const EntangleParams params = cfg.probe.make();
            for (QubitId q : session.stream) entangle_probe(params, q, pool);
            break;
        }
        case Attack::Dos:
            dos_flip_stream(session.stream, pool, eve_rng, cfg.dos_p);
            break;
        case Attack::Mitm:
            mitm_replace_stream(session.stream, pool, eve_rng);
            break;
        case Attack::Impersonation: {
            // Eve sits in Bob's chair. The channel check costs her nothing:
            // positions, bases and states are announced, so she measures
            // each decoy where it is transparent.
            for (std::size_t j = 0; j < session.channel_decoy_positions.size(); ++j) {
                const StateLabel lab = session.channel_decoy_labels[j];
                pool.measure_qubit(session.stream[session.channel_decoy_positions[j] - 1],
                                   basis_by_name(basis_of_label(lab)), eve_rng);
            }
            const ModifiedImpersonationResult imp = impersonate_bob_modified(
                auth_info_bits(session.auth_labels), eve_rng, cfg.auth_tolerance);
            rep.alice_accepts_bob = imp.alice_accepts;
            rep.detected = !imp.alice_accepts;
            rep.abort_stage = imp.alice_accepts ? AbortStage::None : AbortStage::Auth;
            return rep;
        }
    }

    const ModifiedBobResult bob =
        modified_bob_run(session, in, pool, bob_rng, cfg.threshold, cfg.auth_tolerance);

    rep.decoy_errors = bob.channel.errors;
    rep.decoy_count = bob.channel.count;
    rep.z_decoy_errors = bob.channel.z_errors;
    rep.z_decoy_count = bob.channel.z_count;
    rep.x_decoy_errors = bob.channel.x_errors;
    rep.x_decoy_count = bob.channel.x_count;
    rep.channel_error_rate = bob.channel.error_rate;

    if (bob.channel_aborted) {
        rep.detected = true;
        rep.abort_stage = AbortStage::Channel;
        return rep;
    }
    rep.bob_accepts_alice = bob.auth.bob_accepts_alice;
    rep.alice_accepts_bob = bob.auth.alice_accepts_bob;
    if (bob.auth_aborted) {
        rep.detected = true;
        rep.abort_stage = AbortStage::Auth;
        return rep;
    }
    rep.completed = bob.completed;
    rep.bob_correct = (bob.decoded_message == in.message);
    rep.msg_bit_count = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i)
        rep.msg_bit_errors += (bob.decoded_message[i] != in.message[i]);
    rep.integrity_mismatch = !*rep.bob_correct;
    return rep;
}

}  // namespace detail

inline TrialReport run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    Rng trial_rng(cfg.seed ^ trial_index);
    Rng alice_rng = trial_rng.split();
    Rng eve_rng = trial_rng.split();
    Rng bob_rng = trial_rng.split();
    if (cfg.protocol == Protocol::Yzcss)
        return detail::run_yzcss_trial(cfg, trial_rng, alice_rng, eve_rng, bob_rng);
    return detail::run_modified_trial(cfg, trial_rng, alice_rng, eve_rng, bob_rng);
}

struct AggregateReport {
    ScenarioConfig config;
    Metrics metrics;
};

/// Run every trial sequentially (determinism over wall-clock) and pool the
/// counts.
inline AggregateReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    AggregateReport agg{cfg, {}};
    for (std::uint64_t t = 0; t < cfg.trials; ++t) fold(agg.metrics, run_trial(cfg, t));
    return agg;
}

}  // namespace qsdc
