#pragma once

#include <stdexcept>

#include "qsdc/basis.hpp"
#include "qsdc/bits.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/state.hpp"

namespace qsdc {

/// Bit -> two-qubit carrier state. A 0 becomes |01> or |10>, a 1 becomes
/// Phi+ or Phi-, each variant chosen with equal probability.
inline StateLabel encode_pair_bit(int bit, ChoiceSource& choices) {
    switch (bit) {
        case 0: return choices.pick(2) == 0 ? StateLabel::ZZ01 : StateLabel::ZZ10;
        case 1: return choices.pick(2) == 0 ? StateLabel::PhiPlus : StateLabel::PhiMinus;
        default: throw std::invalid_argument("encode_pair_bit: bit must be 0 or 1");
    }
}

/// Bit -> single-photon carrier. A 0 becomes |0> or |1>, a 1 becomes
/// |+> or |->, each variant with equal probability.
inline StateLabel encode_auth_bit(int bit, ChoiceSource& choices) {
    switch (bit) {
        case 0: return choices.pick(2) == 0 ? StateLabel::Zero : StateLabel::One;
        case 1: return choices.pick(2) == 0 ? StateLabel::Plus : StateLabel::Minus;
        default: throw std::invalid_argument("encode_auth_bit: bit must be 0 or 1");
    }
}

/// Decoding table for two-qubit outcomes, shared by the honest receiver and
/// the eavesdropper: |01>, |10>, Psi+, Psi- carry 0; |00>, |11>, Phi+, Phi-
/// carry 1.
inline int decode_pair_label(StateLabel label) {
    switch (label) {
        case StateLabel::ZZ01:
        case StateLabel::ZZ10:
        case StateLabel::PsiPlus:
        case StateLabel::PsiMinus: return 0;
        case StateLabel::ZZ00:
        case StateLabel::ZZ11:
        case StateLabel::PhiPlus:
        case StateLabel::PhiMinus: return 1;
        default: throw std::invalid_argument("decode_pair_label: not a two-qubit outcome");
    }
}

/// Single-photon information map: |0> and |+> carry 0, |1> and |-> carry 1.
inline int info_bit(StateLabel label) {
    switch (label) {
        case StateLabel::Zero:
        case StateLabel::Plus: return 0;
        case StateLabel::One:
        case StateLabel::Minus: return 1;
        default: throw std::invalid_argument("info_bit: not a single-qubit label");
    }
}

/// Preparation/measurement basis a label belongs to.
inline BasisName basis_of_label(StateLabel label) {
    switch (label) {
        case StateLabel::Zero:
        case StateLabel::One: return BasisName::Z;
        case StateLabel::Plus:
        case StateLabel::Minus: return BasisName::X;
        case StateLabel::ZZ00:
        case StateLabel::ZZ01:
        case StateLabel::ZZ10:
        case StateLabel::ZZ11: return BasisName::ZZ;
        case StateLabel::PhiPlus:
        case StateLabel::PhiMinus:
        case StateLabel::PsiPlus:
        case StateLabel::PsiMinus: return BasisName::Bell;
    }
    throw std::invalid_argument("basis_of_label: unknown label");
}

inline bool is_pair_label(StateLabel label) { return label_qubit_count(label) == 2; }

}  // namespace qsdc
