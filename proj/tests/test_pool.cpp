#include <map>

#include <catch2/catch_amalgamated.hpp>

#include "qsdc/pool.hpp"

using namespace qsdc;

namespace {
constexpr double kTol = 1e-12;
}

TEST_CASE("gate constructors are unitary; a projector is not") {
    REQUIRE(is_unitary(identity2()));
    REQUIRE(is_unitary(pauli_x()));
    REQUIRE(is_unitary(identity4()));
    REQUIRE(is_unitary(cnot()));
    REQUIRE(is_unitary(kron(pauli_x(), identity2())));
    Mat2 proj;
    proj.at(0, 0) = 1.0;  // |0><0|
    REQUIRE_FALSE(is_unitary(proj));
}

TEST_CASE("adding labels places qubits into fresh registers") {
    RegisterPool pool;
    const auto a = pool.add_label(StateLabel::PhiPlus);
    const auto b = pool.add_label(StateLabel::Zero);
    REQUIRE(a.size() == 2);
    REQUIRE(b.size() == 1);
    REQUIRE(pool.register_count() == 2);
    REQUIRE(pool.qubit_count() == 3);
    REQUIRE(pool.register_of(a[0]) == pool.register_of(a[1]));
    REQUIRE(pool.register_of(a[0]) != pool.register_of(b[0]));
    REQUIRE(pool.local_index(a[0]) == 0);
    REQUIRE(pool.local_index(a[1]) == 1);
    REQUIRE(pool.validate());
}

TEST_CASE("measuring a register collapses it onto the observed element") {
    RegisterPool pool;
    Rng rng(3);
    const auto q = pool.add_label(StateLabel::PhiPlus);
    const RegisterId reg = pool.register_of(q[0]);
    const StateLabel out = pool.measure_register(reg, zz_basis(), rng);
    REQUIRE((out == StateLabel::ZZ00 || out == StateLabel::ZZ11));
    // Post-measurement state is exactly the observed basis element.
    REQUIRE(states_equal_up_to_phase(pool.register_state(reg), state_from_label(out)));
    // Re-measuring in the same basis repeats the outcome.
    REQUIRE(pool.measure_register(reg, zz_basis(), rng) == out);
}

TEST_CASE("measurement outcomes follow the Born weights") {
    Rng rng(101);
    std::map<StateLabel, int> counts;
    const int kDraws = 40000;
    for (int i = 0; i < kDraws; ++i) {
        RegisterPool pool;
        const auto q = pool.add_label(StateLabel::ZZ01);
        ++counts[pool.measure_register(pool.register_of(q[0]), bell_basis(), rng)];
    }
    REQUIRE(counts[StateLabel::PsiPlus] + counts[StateLabel::PsiMinus] == kDraws);
    REQUIRE(std::abs(counts[StateLabel::PsiPlus] - kDraws / 2) < 400);
}

TEST_CASE("partial measurement of an entangled pair is consistent") {
    // Measuring one half of Phi+ in Z forces the partner to the same bit.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        RegisterPool pool;
        Rng rng(seed);
        const auto q = pool.add_label(StateLabel::PhiPlus);
        const StateLabel first = pool.measure_qubit(q[0], z_basis(), rng);
        const StateLabel second = pool.measure_qubit(q[1], z_basis(), rng);
        REQUIRE(first == second);
    }
    // Psi- anti-correlates in Z.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        RegisterPool pool;
        Rng rng(seed);
        const auto q = pool.add_label(StateLabel::PsiMinus);
        const StateLabel first = pool.measure_qubit(q[0], z_basis(), rng);
        const StateLabel second = pool.measure_qubit(q[1], z_basis(), rng);
        REQUIRE(first != second);
    }
}

TEST_CASE("qubit distribution marginalizes entangled registers") {
    RegisterPool pool;
    const auto q = pool.add_label(StateLabel::PhiMinus);
    const BornDistribution d = pool.qubit_distribution(q[1], z_basis());
    REQUIRE(prob_of(d, StateLabel::Zero) == Catch::Approx(0.5).margin(kTol));
    REQUIRE(prob_of(d, StateLabel::One) == Catch::Approx(0.5).margin(kTol));
}

TEST_CASE("measure_pair merges separate registers on demand") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RegisterPool pool;
        Rng rng(seed);
        const QubitId a = pool.add_label(StateLabel::Zero)[0];
        const QubitId b = pool.add_label(StateLabel::One)[0];
        REQUIRE(pool.register_of(a) != pool.register_of(b));
        const StateLabel out = pool.measure_pair(a, b, zz_basis(), rng);
        REQUIRE(out == StateLabel::ZZ01);
        REQUIRE(pool.register_of(a) == pool.register_of(b));
        REQUIRE(pool.validate());
    }
}

TEST_CASE("measure_pair in Bell basis on product states splits evenly") {
    Rng rng(77);
    int phis = 0;
    const int kDraws = 20000;
    for (int i = 0; i < kDraws; ++i) {
        RegisterPool pool;
        const QubitId a = pool.add_label(StateLabel::Zero)[0];
        const QubitId b = pool.add_label(StateLabel::Zero)[0];
        const StateLabel out = pool.measure_pair(a, b, bell_basis(), rng);
        REQUIRE((out == StateLabel::PhiPlus || out == StateLabel::PhiMinus));
        phis += (out == StateLabel::PhiPlus);
    }
    REQUIRE(std::abs(phis - kDraws / 2) < 300);
}

TEST_CASE("measure_pair respects qubit order") {
    RegisterPool pool;
    Rng rng(5);
    const QubitId a = pool.add_label(StateLabel::Zero)[0];
    const QubitId b = pool.add_label(StateLabel::One)[0];
    // Reversed order must read |10>.
    REQUIRE(pool.measure_pair(b, a, zz_basis(), rng) == StateLabel::ZZ10);
}

TEST_CASE("apply_1q transforms states in place") {
    RegisterPool pool;
    const QubitId q = pool.add_label(StateLabel::Zero)[0];
    pool.apply_1q(pauli_x(), q);
    REQUIRE(states_equal_up_to_phase(pool.register_state(pool.register_of(q)),
                                     state_from_label(StateLabel::One)));
    // X on one half of Phi+ gives Psi+.
    const auto pair = pool.add_label(StateLabel::PhiPlus);
    pool.apply_1q(pauli_x(), pair[0]);
    REQUIRE(states_equal_up_to_phase(pool.register_state(pool.register_of(pair[0])),
                                     state_from_label(StateLabel::PsiPlus)));
}

TEST_CASE("apply_2q merges registers and honors qubit roles") {
    RegisterPool pool;
    const QubitId control = pool.add_label(StateLabel::One)[0];
    const QubitId target = pool.add_label(StateLabel::Zero)[0];
    pool.apply_2q(cnot(), control, target);
    REQUIRE(pool.register_of(control) == pool.register_of(target));
    // CNOT with set control flips the target: expect |11>.
    Rng rng(1);
    REQUIRE(pool.measure_pair(control, target, zz_basis(), rng) == StateLabel::ZZ11);

    // Control clear: nothing happens.
    RegisterPool pool2;
    const QubitId c2 = pool2.add_label(StateLabel::Zero)[0];
    const QubitId t2 = pool2.add_label(StateLabel::Zero)[0];
    pool2.apply_2q(cnot(), c2, t2);
    Rng rng2(1);
    REQUIRE(pool2.measure_pair(c2, t2, zz_basis(), rng2) == StateLabel::ZZ00);
}

TEST_CASE("non-unitary matrices are rejected") {
    RegisterPool pool;
    const QubitId q = pool.add_label(StateLabel::Zero)[0];
    Mat2 bad;
    bad.at(0, 0) = 1.0;
    bad.at(1, 0) = 1.0;
    REQUIRE_THROWS_AS(pool.apply_1q(bad, q), std::invalid_argument);
    Mat4 bad4;
    REQUIRE_THROWS_AS(
        pool.apply_2q(bad4, q, pool.add_label(StateLabel::Zero)[0]), std::invalid_argument);
}

TEST_CASE("forced outcomes land on the requested element or refuse") {
    RegisterPool pool;
    const auto q = pool.add_label(StateLabel::PhiPlus);
    const RegisterId reg = pool.register_of(q[0]);
    pool.force_register_outcome(reg, zz_basis(), StateLabel::ZZ11);
    REQUIRE(states_equal_up_to_phase(pool.register_state(reg),
                                     state_from_label(StateLabel::ZZ11)));
    // Phi+ has no overlap with |01>.
    RegisterPool pool2;
    const auto q2 = pool2.add_label(StateLabel::PhiPlus);
    REQUIRE_THROWS_AS(
        pool2.force_register_outcome(pool2.register_of(q2[0]), zz_basis(), StateLabel::ZZ01),
        std::domain_error);
}

TEST_CASE("force_qubit_outcome collapses a single qubit inside a register") {
    RegisterPool pool;
    const auto q = pool.add_label(StateLabel::PsiPlus);
    pool.force_qubit_outcome(q[0], z_basis(), StateLabel::Zero);
    // Psi+ with the first qubit pinned to 0 leaves |01>.
    REQUIRE(states_equal_up_to_phase(pool.register_state(pool.register_of(q[0])),
                                     state_from_label(StateLabel::ZZ01)));
}

TEST_CASE("split_qubit factors a measured qubit into its own register") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RegisterPool pool;
        Rng rng(seed);
        const auto q = pool.add_label(StateLabel::PhiPlus);
        const int bit = pool.split_qubit(q[0], rng);
        REQUIRE((bit == 0 || bit == 1));
        REQUIRE(pool.register_of(q[0]) != pool.register_of(q[1]));
        REQUIRE(pool.register_qubit_count(pool.register_of(q[0])) == 1);
        // The partner retains the correlated bit.
        const StateLabel partner = pool.measure_qubit(q[1], z_basis(), rng);
        REQUIRE(partner == (bit == 0 ? StateLabel::Zero : StateLabel::One));
        REQUIRE(pool.validate());
    }
}

TEST_CASE("born agreement holds for every label in every compatible basis") {
    // Frequencies over many draws track the analytic distribution within 0.01.
    Rng rng(2024);
    const int kDraws = 100000;
    for (StateLabel l : kAllLabels) {
        const bool single = label_qubit_count(l) == 1;
        for (const Basis* basis : single
                 ? std::vector<const Basis*>{&z_basis(), &x_basis()}
                 : std::vector<const Basis*>{&zz_basis(), &bell_basis()}) {
            const BornDistribution expected =
                born_distribution(state_from_label(l), *basis);
            std::map<StateLabel, int> counts;
            for (int i = 0; i < kDraws; ++i) {
                RegisterPool pool;
                const auto q = pool.add_label(l);
                ++counts[pool.measure_register(pool.register_of(q[0]), *basis, rng)];
            }
            for (const auto& [label, p] : expected) {
                const double freq = static_cast<double>(counts[label]) / kDraws;
                REQUIRE(std::abs(freq - p) < 0.01);
            }
        }
    }
}

TEST_CASE("invalid handles are rejected") {
    RegisterPool pool;
    Rng rng(1);
    REQUIRE_THROWS_AS(pool.register_of(123), std::out_of_range);
    const QubitId q = pool.add_label(StateLabel::Zero)[0];
    REQUIRE_THROWS_AS(pool.measure_qubit(q + 50, z_basis(), rng), std::out_of_range);
    // Basis dimensionality must match the target.
    REQUIRE_THROWS_AS(pool.measure_register(pool.register_of(q), zz_basis(), rng),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(pool.measure_qubit(q, zz_basis(), rng), std::invalid_argument);
}

TEST_CASE("measure_pair refuses a duplicated qubit") {
    RegisterPool pool;
    Rng rng(1);
    const auto q = pool.add_label(StateLabel::PhiPlus);
    REQUIRE_THROWS_AS(pool.measure_pair(q[0], q[0], zz_basis(), rng), std::invalid_argument);
}
