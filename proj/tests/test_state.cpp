#include <catch2/catch_amalgamated.hpp>

#include "qsdc/state.hpp"

using namespace qsdc;

namespace {
constexpr double kTol = 1e-12;
}

TEST_CASE("labels cover one- and two-qubit states") {
    int singles = 0, pairs = 0;
    for (StateLabel l : kAllLabels) {
        const int n = label_qubit_count(l);
        REQUIRE((n == 1 || n == 2));
        (n == 1 ? singles : pairs)++;
        const PureState s = state_from_label(l);
        REQUIRE(s.qubit_count() == n);
        s.assert_normalized();
    }
    REQUIRE(singles == 4);
    REQUIRE(pairs == 8);
}

TEST_CASE("label strings round-trip") {
    for (StateLabel l : kAllLabels) REQUIRE(label_from_string(to_string(l)) == l);
    REQUIRE(to_string(StateLabel::PhiPlus) == "Phi+");
    REQUIRE(to_string(StateLabel::ZZ01) == "01");
    REQUIRE_THROWS_AS(label_from_string("Phi*"), std::invalid_argument);
    REQUIRE_THROWS_AS(label_from_string(""), std::invalid_argument);
}

TEST_CASE("amplitude layout is most-significant-qubit-first") {
    // |01> means qubit 0 reads 0 and qubit 1 reads 1, i.e. amplitude index 1.
    const PureState s01 = state_from_label(StateLabel::ZZ01);
    REQUIRE(std::abs(s01[1] - Amplitude{1, 0}) < kTol);
    const PureState s10 = state_from_label(StateLabel::ZZ10);
    REQUIRE(std::abs(s10[2] - Amplitude{1, 0}) < kTol);

    const double h = 1.0 / std::sqrt(2.0);
    const PureState phip = state_from_label(StateLabel::PhiPlus);
    REQUIRE(std::abs(phip[0].real() - h) < kTol);
    REQUIRE(std::abs(phip[3].real() - h) < kTol);
    REQUIRE(std::abs(phip[1]) < kTol);
    const PureState psim = state_from_label(StateLabel::PsiMinus);
    REQUIRE(std::abs(psim[1].real() - h) < kTol);
    REQUIRE(std::abs(psim[2].real() + h) < kTol);
}

TEST_CASE("constructor validates input") {
    REQUIRE_THROWS_AS(PureState(0, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(PureState(5, std::vector<Amplitude>(32, {0, 0})), std::invalid_argument);
    REQUIRE_THROWS_AS(PureState(1, {{1, 0}}), std::invalid_argument);       // wrong length
    REQUIRE_THROWS_AS(PureState(1, {{1, 0}, {1, 0}}), std::domain_error);   // unnormalized
}

TEST_CASE("tensor products compose") {
    const PureState zero = state_from_label(StateLabel::Zero);
    const PureState one = state_from_label(StateLabel::One);
    const PureState joint = zero.tensor(one);
    REQUIRE(joint.qubit_count() == 2);
    REQUIRE(std::abs(joint.inner_product(state_from_label(StateLabel::ZZ01)) - Amplitude{1, 0}) <
            kTol);

    // 2 + 2 qubits fits the cap; 2 + 2 + 1 must not.
    const PureState four = joint.tensor(joint);
    REQUIRE(four.qubit_count() == 4);
    REQUIRE_THROWS_AS(four.tensor(zero), std::invalid_argument);
}

TEST_CASE("inner products are conjugate-symmetric projections") {
    const PureState plus = state_from_label(StateLabel::Plus);
    const PureState zero = state_from_label(StateLabel::Zero);
    const Amplitude ip = plus.inner_product(zero);
    REQUIRE(std::abs(ip.real() - 1.0 / std::sqrt(2.0)) < kTol);
    REQUIRE(std::abs(plus.inner_product(plus) - Amplitude{1, 0}) < kTol);
    REQUIRE(std::abs(state_from_label(StateLabel::Minus).inner_product(plus)) < kTol);
    REQUIRE_THROWS_AS(plus.inner_product(state_from_label(StateLabel::PhiPlus)),
                      std::invalid_argument);
}

TEST_CASE("phase-blind equality") {
    const PureState plus = state_from_label(StateLabel::Plus);
    PureState flipped(1, {{-1.0 / std::sqrt(2.0), 0}, {-1.0 / std::sqrt(2.0), 0}});
    REQUIRE(states_equal_up_to_phase(plus, flipped));
    PureState imag(1, {{0, 1.0 / std::sqrt(2.0)}, {0, 1.0 / std::sqrt(2.0)}});
    REQUIRE(states_equal_up_to_phase(plus, imag));
    REQUIRE_FALSE(states_equal_up_to_phase(plus, state_from_label(StateLabel::Minus)));
    REQUIRE_FALSE(states_equal_up_to_phase(plus, state_from_label(StateLabel::Zero)));
}

TEST_CASE("renormalize rescues drifted states and rejects zero") {
    PureState s = state_from_label(StateLabel::Plus);
    s[0] *= 1.0 + 1e-7;
    s.renormalize();
    s.assert_normalized();
    PureState z = state_from_label(StateLabel::Zero);
    z[0] = 0;
    REQUIRE_THROWS_AS(z.renormalize(), std::domain_error);
}
