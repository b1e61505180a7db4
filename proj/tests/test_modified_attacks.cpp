#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qsdc/attack/entangle_measure.hpp"
#include "qsdc/attack/modified_attacks.hpp"
#include "qsdc/protocol/modified.hpp"

using namespace qsdc;

namespace {

constexpr double kTol = 1e-12;

constexpr StateLabel kSingles[4] = {StateLabel::Zero, StateLabel::One, StateLabel::Plus,
                                    StateLabel::Minus};

// Exact probability that a decoy prepared as `sent` fails its check after a
// random Z/X intercept-and-resend: average over Eve's basis coin, her Born
// outcome, and the verifier's re-measurement of the resent eigenstate.
double intercept_decoy_error(StateLabel sent) {
    const Basis& home = basis_by_name(basis_of_label(sent));
    double err = 0.0;
    for (const Basis* eve : {&z_basis(), &x_basis()}) {
        const BornDistribution seen = born_distribution(state_from_label(sent), *eve);
        for (const auto& [outcome, p] : seen) {
            if (p < 1e-15) continue;
            const BornDistribution recheck = born_distribution(state_from_label(outcome), home);
            err += 0.5 * p * (1.0 - prob_of(recheck, sent));
        }
    }
    return err;
}

}  // namespace

TEST_CASE("random-basis interception disturbs every single-qubit decoy at exactly 1/4") {
    for (StateLabel sent : kSingles)
        REQUIRE(intercept_decoy_error(sent) == Catch::Approx(0.25).margin(kTol));
}

TEST_CASE("the stream interceptor records one basis and outcome per qubit") {
    Rng rng(83);
    ModifiedInputs in{random_bits(rng, 4), random_bits(rng, 2), random_bits(rng, 2)};
    RegisterPool pool;
    RngChoices choices(rng);
    const ModifiedSession s = modified_alice_encode(in, 6, pool, choices, rng);
    const StreamEveRecord rec = intercept_resend_stream(s.stream, pool, rng);
    REQUIRE(rec.bases.size() == s.stream.size());
    REQUIRE(rec.outcomes.size() == s.stream.size());
    for (std::size_t i = 0; i < s.stream.size(); ++i) {
        REQUIRE(basis_of_label(rec.outcomes[i]) == rec.bases[i]);
        // The collapse is the resend: re-measuring in Eve's basis is certain.
        const auto d = pool.qubit_distribution(s.stream[i], basis_by_name(rec.bases[i]));
        REQUIRE(prob_of(d, rec.outcomes[i]) == Catch::Approx(1.0).margin(kTol));
    }
}

TEST_CASE("interception of the full stream trips the channel check") {
    std::uint64_t seed = 8300;
    int aborts = 0;
    long err = 0;
    long total = 0;
    for (int rep = 0; rep < 200; ++rep) {
        Rng rng(seed++);
        ModifiedInputs in{random_bits(rng, 4), random_bits(rng, 2), random_bits(rng, 2)};
        RegisterPool pool;
        RngChoices choices(rng);
        const ModifiedSession s = modified_alice_encode(in, 16, pool, choices, rng);
        intercept_resend_stream(s.stream, pool, rng);
        const ModifiedBobResult r = modified_bob_run(s, in, pool, rng, 0.05);
        err += r.channel.errors;
        total += r.channel.count;
        aborts += r.channel_aborted;
    }
    const double rate = static_cast<double>(err) / static_cast<double>(total);
    REQUIRE(rate == Catch::Approx(0.25).margin(0.03));
    // P(a 16-decoy check passes) = (3/4)^16, about 1%.
    REQUIRE(aborts >= 190);
}

TEST_CASE("jamming flips trip only the computational-basis decoys") {
    Rng rng(89);
    ModifiedInputs in{random_bits(rng, 6), random_bits(rng, 3), random_bits(rng, 3)};
    RegisterPool pool;
    RngChoices choices(rng);
    const ModifiedSession s = modified_alice_encode(in, 8, pool, choices, rng);
    const std::size_t flipped = dos_flip_stream(s.stream, pool, rng, 1.0);
    REQUIRE(flipped == s.stream.size());
    // Forced continuation: threshold 1 swallows the channel errors and a
    // tolerance of k swallows the authentication mismatches.
    const ModifiedBobResult r = modified_bob_run(s, in, pool, rng, 1.0, 3);
    REQUIRE(r.channel.z_errors == r.channel.z_count);
    REQUIRE(r.channel.x_errors == 0);
    REQUIRE(r.completed);
    // A flip on both halves of a pair preserves its decode class, so a
    // jammer who hits everything leaves the payload intact.
    REQUIRE(r.decoded_message == in.message);
}

TEST_CASE("jamming leaves the stream alone at p = 0") {
    Rng rng(97);
    ModifiedInputs in{random_bits(rng, 4), random_bits(rng, 2), random_bits(rng, 2)};
    RegisterPool pool;
    RngChoices choices(rng);
    const ModifiedSession s = modified_alice_encode(in, 4, pool, choices, rng);
    REQUIRE(dos_flip_stream(s.stream, pool, rng, 0.0) == 0);
    const ModifiedBobResult r = modified_bob_run(s, in, pool, rng, 0.05);
    REQUIRE(r.channel.errors == 0);
    REQUIRE(r.completed);
    REQUIRE(r.decoded_message == in.message);
}

TEST_CASE("partial jamming corrupts message bits at the single-flip rate") {
    // Exactly one flipped half always changes the decode class, two or zero
    // never do, so the bit error rate is 2p(1-p): maximal at p = 1/2.
    std::uint64_t seed = 9700;
    long wrong = 0;
    long total = 0;
    for (int rep = 0; rep < 300; ++rep) {
        Rng rng(seed++);
        ModifiedInputs in{random_bits(rng, 6), random_bits(rng, 2), random_bits(rng, 2)};
        RegisterPool pool;
        RngChoices choices(rng);
        const ModifiedSession s = modified_alice_encode(in, 0, pool, choices, rng);
        dos_flip_stream(s.stream, pool, rng, 0.5);
        const ModifiedBobResult r = modified_bob_run(s, in, pool, rng, 1.0, 2);
        REQUIRE(r.completed);
        for (std::size_t i = 0; i < in.message.size(); ++i) {
            wrong += (r.decoded_message[i] != in.message[i]);
            ++total;
        }
    }
    const double rate = static_cast<double>(wrong) / static_cast<double>(total);
    REQUIRE(rate == Catch::Approx(0.5).margin(0.045));
}

TEST_CASE("substituted qubits fail their decoy check half the time, exactly") {
    for (StateLabel announced : kSingles) {
        const Basis& home = basis_by_name(basis_of_label(announced));
        double match = 0.0;
        for (StateLabel fresh : kSingles) {
            const BornDistribution d = born_distribution(state_from_label(fresh), home);
            match += 0.25 * prob_of(d, announced);
        }
        REQUIRE(1.0 - match == Catch::Approx(0.5).margin(kTol));
    }
}

TEST_CASE("substitution severs entanglement and installs a fresh separable state") {
    Rng rng(101);
    RegisterPool pool;
    const std::vector<QubitId> pair = pool.add_label(StateLabel::PhiPlus);
    mitm_replace_stream({pair[0]}, pool, rng);
    REQUIRE(pool.register_of(pair[0]) != pool.register_of(pair[1]));
    REQUIRE(pool.register_qubit_count(pool.register_of(pair[0])) == 1);
    REQUIRE(pool.register_qubit_count(pool.register_of(pair[1])) == 1);
    // The replacement is one of the four advertised states.
    bool is_fresh = false;
    for (StateLabel l : kSingles)
        is_fresh = is_fresh || states_equal_up_to_phase(
                                   pool.register_state(pool.register_of(pair[0])),
                                   state_from_label(l));
    REQUIRE(is_fresh);
    // The stranded partner collapsed to a computational eigenstate.
    const auto d = pool.qubit_distribution(pair[1], z_basis());
    const double p0 = prob_of(d, StateLabel::Zero);
    REQUIRE((p0 == Catch::Approx(0.0).margin(kTol) || p0 == Catch::Approx(1.0).margin(kTol)));
    pool.validate();
}

TEST_CASE("full substitution is caught by a 16-decoy check") {
    std::uint64_t seed = 10100;
    int aborts = 0;
    long err = 0;
    long total = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng(seed++);
        ModifiedInputs in{random_bits(rng, 4), random_bits(rng, 2), random_bits(rng, 2)};
        RegisterPool pool;
        RngChoices choices(rng);
        const ModifiedSession s = modified_alice_encode(in, 16, pool, choices, rng);
        mitm_replace_stream(s.stream, pool, rng);
        const ModifiedBobResult r = modified_bob_run(s, in, pool, rng, 0.05);
        err += r.channel.errors;
        total += r.channel.count;
        aborts += r.channel_aborted;
    }
    const double rate = static_cast<double>(err) / static_cast<double>(total);
    REQUIRE(rate == Catch::Approx(0.5).margin(0.045));
    REQUIRE(aborts >= 99);
}

TEST_CASE("probe parameters enforce the unitarity constraints") {
    const EntangleParams id = EntangleParams::identity();
    REQUIRE(id.predicted_z_error() == Catch::Approx(0.0).margin(kTol));
    REQUIRE(EntangleParams::cnot_probe().predicted_z_error() == Catch::Approx(0.0).margin(kTol));
    const double theta = 0.6;
    REQUIRE(EntangleParams::rotation(theta).predicted_z_error() ==
            Catch::Approx(std::sin(theta) * std::sin(theta)).margin(kTol));
    const EntangleParams custom = EntangleParams::custom(0.6, 0.8, 0.8, -0.6);
    REQUIRE(custom.predicted_z_error() == Catch::Approx(0.64).margin(kTol));

    // Non-normalized branch amplitudes.
    REQUIRE_THROWS_AS(EntangleParams::custom(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
    // Normalized but non-orthogonal branches (the composite would not be
    // unitary).
    REQUIRE_THROWS_AS(EntangleParams::custom(1.0, 0.0, 1.0, 0.0), std::invalid_argument);
    const double r = std::sqrt(0.5);
    REQUIRE_THROWS_AS(EntangleParams::custom(1.0, 0.0, r, r), std::invalid_argument);
}

TEST_CASE("the identity probe leaves every carrier untouched") {
    const EntangleParams id = EntangleParams::identity();
    for (StateLabel carrier_label : kSingles) {
        RegisterPool pool;
        const QubitId carrier = pool.add_label(carrier_label)[0];
        const QubitId ancilla = entangle_probe(id, carrier, pool);
        REQUIRE(pool.register_of(ancilla) == pool.register_of(carrier));
        const Basis& home = basis_by_name(basis_of_label(carrier_label));
        REQUIRE(prob_of(pool.qubit_distribution(carrier, home), carrier_label) ==
                Catch::Approx(1.0).margin(kTol));
        REQUIRE(prob_of(pool.qubit_distribution(ancilla, z_basis()), StateLabel::Zero) ==
                Catch::Approx(1.0).margin(kTol));
    }
}

TEST_CASE("the copying probe is invisible in Z and maximally disturbing in X") {
    const EntangleParams probe = EntangleParams::cnot_probe();
    {
        RegisterPool pool;
        const QubitId carrier = pool.add_label(StateLabel::Zero)[0];
        entangle_probe(probe, carrier, pool);
        REQUIRE(prob_of(pool.qubit_distribution(carrier, z_basis()), StateLabel::Zero) ==
                Catch::Approx(1.0).margin(kTol));
    }
    {
        RegisterPool pool;
        const QubitId carrier = pool.add_label(StateLabel::One)[0];
        const QubitId ancilla = entangle_probe(probe, carrier, pool);
        REQUIRE(prob_of(pool.qubit_distribution(carrier, z_basis()), StateLabel::One) ==
                Catch::Approx(1.0).margin(kTol));
        // The ancilla now holds a perfect copy of the computational value.
        REQUIRE(prob_of(pool.qubit_distribution(ancilla, z_basis()), StateLabel::One) ==
                Catch::Approx(1.0).margin(kTol));
    }
    {
        RegisterPool pool;
        const QubitId carrier = pool.add_label(StateLabel::Plus)[0];
        const QubitId ancilla = entangle_probe(probe, carrier, pool);
        // |+>|0> becomes the maximally entangled pair, so the carrier's
        // X-basis marginal is an even coin: error rate 1/2.
        const auto d = pool.qubit_distribution(carrier, x_basis());
        REQUIRE(prob_of(d, StateLabel::Plus) == Catch::Approx(0.5).margin(kTol));
        REQUIRE(states_equal_up_to_phase(pool.register_state(pool.register_of(carrier)),
                                         state_from_label(StateLabel::PhiPlus)));
        REQUIRE(pool.register_of(ancilla) == pool.register_of(carrier));
    }
}

TEST_CASE("the rotation probe disturbs both bases at sin^2(theta)") {
    const double theta = 0.4;
    const double s2 = std::sin(theta) * std::sin(theta);
    const EntangleParams probe = EntangleParams::rotation(theta);
    {
        RegisterPool pool;
        const QubitId carrier = pool.add_label(StateLabel::Zero)[0];
        entangle_probe(probe, carrier, pool);
        REQUIRE(prob_of(pool.qubit_distribution(carrier, z_basis()), StateLabel::One) ==
                Catch::Approx(s2).margin(kTol));
    }
    {
        RegisterPool pool;
        const QubitId carrier = pool.add_label(StateLabel::Plus)[0];
        entangle_probe(probe, carrier, pool);
        REQUIRE(prob_of(pool.qubit_distribution(carrier, x_basis()), StateLabel::Minus) ==
                Catch::Approx(s2).margin(kTol));
    }
}

TEST_CASE("the impostor learns only the opened half of the reference string") {
    const Bits info = bits_from_string("01101011");
    Rng rng(103);
    const ModifiedImpersonationResult r = impersonate_bob_modified(info, rng);
    REQUIRE(r.reveal_set.size() == 4);
    REQUIRE(r.learned_bits.size() == 4);
    for (std::size_t j = 0; j < r.reveal_set.size(); ++j)
        REQUIRE(r.learned_bits[j] == info[r.reveal_set[j]]);
    REQUIRE(r.guesses.size() == 4);
    int mism = 0;
    std::size_t g = 0;
    std::vector<bool> revealed(info.size(), false);
    for (std::size_t i : r.reveal_set) revealed[i] = true;
    for (std::size_t i = 0; i < info.size(); ++i)
        if (!revealed[i]) mism += (r.guesses[g++] != info[i]);
    REQUIRE(r.mismatches == mism);
    REQUIRE(r.alice_accepts == (r.mismatches == 0));
}

TEST_CASE("a tolerance as large as the identity always admits the impostor") {
    Rng rng(107);
    for (int rep = 0; rep < 50; ++rep) {
        const Bits info = random_bits(rng, 6);
        const ModifiedImpersonationResult r = impersonate_bob_modified(info, rng, 6);
        REQUIRE(r.alice_accepts);
    }
}

TEST_CASE("impostor acceptance decays as a coin per blind bit") {
    auto acceptance = [](std::size_t k, std::uint64_t seed, int trials) {
        Rng rng(seed);
        int accepted = 0;
        for (int t = 0; t < trials; ++t) {
            const Bits info = random_bits(rng, k);
            accepted += impersonate_bob_modified(info, rng).alice_accepts;
        }
        return static_cast<double>(accepted) / trials;
    };
    // ceil(k/2) blind bits: k=8 gives 2^-4, k=2 gives 2^-1, and k=1 (nothing
    // opened, one blind bit) gives 2^-1 as well.
    REQUIRE(acceptance(8, 109, 20000) == Catch::Approx(0.0625).margin(0.008));
    REQUIRE(acceptance(2, 113, 20000) == Catch::Approx(0.5).margin(0.015));
    REQUIRE(acceptance(1, 127, 20000) == Catch::Approx(0.5).margin(0.015));
}
