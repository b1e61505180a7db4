#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qsdc {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;

inline double inv_sqrt2() {
    static const double v = 1.0 / std::sqrt(2.0);
    return v;
}

/// Named one- and two-qubit states: the computational and conjugate
/// single-qubit states plus the four Bell states.
enum class StateLabel {
    Zero,      // |0>
    One,       // |1>
    Plus,      // |+> = (|0>+|1>)/sqrt2
    Minus,     // |-> = (|0>-|1>)/sqrt2
    ZZ00,      // |00>
    ZZ01,      // |01>
    ZZ10,      // |10>
    ZZ11,      // |11>
    PhiPlus,   // (|00>+|11>)/sqrt2
    PhiMinus,  // (|00>-|11>)/sqrt2
    PsiPlus,   // (|01>+|10>)/sqrt2
    PsiMinus,  // (|01>-|10>)/sqrt2
};

inline constexpr std::array<StateLabel, 12> kAllLabels = {
    StateLabel::Zero,    StateLabel::One,      StateLabel::Plus,    StateLabel::Minus,
    StateLabel::ZZ00,    StateLabel::ZZ01,     StateLabel::ZZ10,    StateLabel::ZZ11,
    StateLabel::PhiPlus, StateLabel::PhiMinus, StateLabel::PsiPlus, StateLabel::PsiMinus,
};

inline int label_qubit_count(StateLabel label) {
    switch (label) {
        case StateLabel::Zero:
        case StateLabel::One:
        case StateLabel::Plus:
        case StateLabel::Minus:
            return 1;
        default:
            return 2;
    }
}

inline std::string to_string(StateLabel label) {
    switch (label) {
        case StateLabel::Zero: return "0";
        case StateLabel::One: return "1";
        case StateLabel::Plus: return "+";
        case StateLabel::Minus: return "-";
        case StateLabel::ZZ00: return "00";
        case StateLabel::ZZ01: return "01";
        case StateLabel::ZZ10: return "10";
        case StateLabel::ZZ11: return "11";
        case StateLabel::PhiPlus: return "Phi+";
        case StateLabel::PhiMinus: return "Phi-";
        case StateLabel::PsiPlus: return "Psi+";
        case StateLabel::PsiMinus: return "Psi-";
    }
    throw std::invalid_argument("to_string: unknown StateLabel");
}

inline StateLabel label_from_string(std::string_view s) {
    for (auto label : kAllLabels)
        if (to_string(label) == s) return label;
    throw std::invalid_argument("label_from_string: unknown label '" + std::string(s) + "'");
}

/// Pure quantum state of 1..4 qubits as a unit complex amplitude vector.
///
/// Amplitude index convention: qubit 0 is the most significant bit of the
/// index, so |01> has amplitude 1 at index 0b01 = 1.
class PureState {
public:
    static constexpr int kMaxQubits = 4;

    PureState(int qubit_count, std::vector<Amplitude> amplitudes)
        : qubit_count_(qubit_count), amps_(std::move(amplitudes)) {
        if (qubit_count < 1 || qubit_count > kMaxQubits)
            throw std::invalid_argument("PureState: qubit count out of range");
        if (amps_.size() != (std::size_t{1} << qubit_count))
            throw std::invalid_argument("PureState: amplitude vector has wrong length");
        assert_normalized();
    }

    int qubit_count() const { return qubit_count_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amps_; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
    Amplitude& operator[](std::size_t i) { return amps_[i]; }

    double norm() const {
        double n = 0.0;
        for (const auto& a : amps_) n += std::norm(a);
        return std::sqrt(n);
    }

    void renormalize() {
        double n = norm();
        if (n <= 0.0) throw std::domain_error("PureState: zero-norm state");
        for (auto& a : amps_) a /= n;
    }

    void assert_normalized(double tol = kNormTolerance) const {
        if (std::abs(norm() - 1.0) > tol)
            throw std::domain_error("PureState: state is not normalized");
    }

    /// <this|other>
    Amplitude inner_product(const PureState& other) const {
        if (dim() != other.dim())
            throw std::invalid_argument("inner_product: dimension mismatch");
        Amplitude acc{0.0, 0.0};
        for (std::size_t i = 0; i < dim(); ++i) acc += std::conj(amps_[i]) * other.amps_[i];
        return acc;
    }

    PureState tensor(const PureState& other) const {
        if (qubit_count_ + other.qubit_count_ > kMaxQubits)
            throw std::invalid_argument("tensor: joint register would exceed qubit cap");
        std::vector<Amplitude> out(dim() * other.dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < other.dim(); ++j)
                out[i * other.dim() + j] = amps_[i] * other.amps_[j];
        return PureState(qubit_count_ + other.qubit_count_, std::move(out));
    }

private:
    int qubit_count_;
    std::vector<Amplitude> amps_;
};

inline PureState state_from_label(StateLabel label) {
    const double h = inv_sqrt2();
    switch (label) {
        case StateLabel::Zero: return PureState(1, {{1, 0}, {0, 0}});
        case StateLabel::One: return PureState(1, {{0, 0}, {1, 0}});
        case StateLabel::Plus: return PureState(1, {{h, 0}, {h, 0}});
        case StateLabel::Minus: return PureState(1, {{h, 0}, {-h, 0}});
        case StateLabel::ZZ00: return PureState(2, {{1, 0}, {0, 0}, {0, 0}, {0, 0}});
        case StateLabel::ZZ01: return PureState(2, {{0, 0}, {1, 0}, {0, 0}, {0, 0}});
        case StateLabel::ZZ10: return PureState(2, {{0, 0}, {0, 0}, {1, 0}, {0, 0}});
        case StateLabel::ZZ11: return PureState(2, {{0, 0}, {0, 0}, {0, 0}, {1, 0}});
        case StateLabel::PhiPlus: return PureState(2, {{h, 0}, {0, 0}, {0, 0}, {h, 0}});
        case StateLabel::PhiMinus: return PureState(2, {{h, 0}, {0, 0}, {0, 0}, {-h, 0}});
        case StateLabel::PsiPlus: return PureState(2, {{0, 0}, {h, 0}, {h, 0}, {0, 0}});
        case StateLabel::PsiMinus: return PureState(2, {{0, 0}, {h, 0}, {-h, 0}, {0, 0}});
    }
    throw std::invalid_argument("state_from_label: unknown StateLabel");
}

/// True iff |<a|b>| >= 1 - tol, i.e. the states differ only by a global phase.
inline bool states_equal_up_to_phase(const PureState& a, const PureState& b,
                                     double tol = kNormTolerance) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("states_equal_up_to_phase: dimension mismatch");
    return std::abs(a.inner_product(b)) >= 1.0 - tol;
}

}  // namespace qsdc
