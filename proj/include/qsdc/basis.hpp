#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsdc/state.hpp"

namespace qsdc {

enum class BasisName { Z, X, ZZ, Bell };

inline std::string to_string(BasisName name) {
    switch (name) {
        case BasisName::Z: return "Z";
        case BasisName::X: return "X";
        case BasisName::ZZ: return "ZZ";
        case BasisName::Bell: return "Bell";
    }
    throw std::invalid_argument("to_string: unknown BasisName");
}

inline BasisName basis_from_string(std::string_view s) {
    if (s == "Z") return BasisName::Z;
    if (s == "X") return BasisName::X;
    if (s == "ZZ") return BasisName::ZZ;
    if (s == "Bell") return BasisName::Bell;
    throw std::invalid_argument("basis_from_string: unknown basis '" + std::string(s) + "'");
}

/// Named orthonormal measurement basis with labelled outcome vectors.
struct Basis {
    BasisName name;
    int qubit_count;
    std::vector<std::pair<StateLabel, PureState>> elements;

    std::size_t dim() const { return std::size_t{1} << qubit_count; }

    const PureState& element(StateLabel label) const {
        for (const auto& [l, v] : elements)
            if (l == label) return v;
        throw std::invalid_argument("Basis::element: label not in basis");
    }

    bool contains(StateLabel label) const {
        for (const auto& [l, v] : elements)
            if (l == label) return true;
        return false;
    }
};

inline const Basis& z_basis() {
    static const Basis b{BasisName::Z,
                         1,
                         {{StateLabel::Zero, state_from_label(StateLabel::Zero)},
                          {StateLabel::One, state_from_label(StateLabel::One)}}};
    return b;
}

inline const Basis& x_basis() {
    static const Basis b{BasisName::X,
                         1,
                         {{StateLabel::Plus, state_from_label(StateLabel::Plus)},
                          {StateLabel::Minus, state_from_label(StateLabel::Minus)}}};
    return b;
}

inline const Basis& zz_basis() {
    static const Basis b{BasisName::ZZ,
                         2,
                         {{StateLabel::ZZ00, state_from_label(StateLabel::ZZ00)},
                          {StateLabel::ZZ01, state_from_label(StateLabel::ZZ01)},
                          {StateLabel::ZZ10, state_from_label(StateLabel::ZZ10)},
                          {StateLabel::ZZ11, state_from_label(StateLabel::ZZ11)}}};
    return b;
}

inline const Basis& bell_basis() {
    static const Basis b{BasisName::Bell,
                         2,
                         {{StateLabel::PhiPlus, state_from_label(StateLabel::PhiPlus)},
                          {StateLabel::PhiMinus, state_from_label(StateLabel::PhiMinus)},
                          {StateLabel::PsiPlus, state_from_label(StateLabel::PsiPlus)},
                          {StateLabel::PsiMinus, state_from_label(StateLabel::PsiMinus)}}};
    return b;
}

inline const Basis& basis_by_name(BasisName name) {
    switch (name) {
        case BasisName::Z: return z_basis();
        case BasisName::X: return x_basis();
        case BasisName::ZZ: return zz_basis();
        case BasisName::Bell: return bell_basis();
    }
    throw std::invalid_argument("basis_by_name: unknown BasisName");
}

/// Outcome probabilities in a basis's element order.
using BornDistribution = std::vector<std::pair<StateLabel, double>>;

inline double prob_of(const BornDistribution& dist, StateLabel label) {
    for (const auto& [l, p] : dist)
        if (l == label) return p;
    throw std::invalid_argument("prob_of: label not in distribution");
}

/// Born rule: probability of each basis outcome is |<element|state>|^2.
inline BornDistribution born_distribution(const PureState& state, const Basis& basis) {
    if (state.dim() != basis.dim())
        throw std::invalid_argument("born_distribution: basis/state dimension mismatch");
    BornDistribution dist;
    dist.reserve(basis.elements.size());
    double total = 0.0;
    for (const auto& [label, vec] : basis.elements) {
        double p = std::norm(vec.inner_product(state));
        total += p;
        dist.emplace_back(label, p);
    }
    if (std::abs(total - 1.0) > kNormTolerance)
        throw std::domain_error("born_distribution: probabilities do not sum to 1");
    return dist;
}

/// Sum of |e><e| over the basis equals the identity (within tol).
inline bool basis_is_complete(const Basis& basis, double tol = kNormTolerance) {
    const std::size_t d = basis.dim();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            Amplitude sum{0.0, 0.0};
            for (const auto& [label, vec] : basis.elements)
                sum += vec[r] * std::conj(vec[c]);
            const Amplitude expected = (r == c) ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
            if (std::abs(sum - expected) > tol) return false;
        }
    }
    return true;
}

}  // namespace qsdc
