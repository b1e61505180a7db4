#pragma once

#include <cmath>
#include <stdexcept>

#include "qsdc/pool.hpp"
#include "qsdc/state.hpp"

namespace qsdc {

/// A two-qubit probe unitary acting on (carrier, ancilla). In the basis
/// {|0>,|1>} of the carrier with the ancilla prepared in |0>, the action is
///
///   |0>|0>  ->  a0 |0>|e00>  +  b0 |1>|e01>
///   |1>|0>  ->  a1 |0>|e10>  +  b1 |1>|e11>
///
/// Unitarity forces |a0|^2+|b0|^2 = 1, |a1|^2+|b1|^2 = 1 and
/// a0*conj(a1) + b0*conj(b1) = 0; violating any of these by more than 1e-9
/// is rejected at construction. The carrier-flip probability on a Z decoy
/// is |b0|^2 regardless of the ancilla tag states.
class EntangleParams {
public:
    static EntangleParams identity() {
        return EntangleParams(1.0, 0.0, 0.0, 1.0, identity4());
    }

    /// Copy the carrier into the ancilla (control = carrier). Transparent
    /// in Z, maximally disturbing in X.
    static EntangleParams cnot_probe() { return EntangleParams(1.0, 0.0, 0.0, 1.0, cnot()); }

    /// Rotate the carrier by theta and leave the ancilla alone: flips a Z
    /// decoy with probability sin^2(theta).
    static EntangleParams rotation(double theta) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        Mat2 rot;
        rot.at(0, 0) = c;
        rot.at(0, 1) = -s;
        rot.at(1, 0) = s;
        rot.at(1, 1) = c;
        return EntangleParams(c, s, -s, c, kron(rot, identity2()));
    }

    /// Arbitrary amplitudes with computational ancilla tags: e00 = e10 = |0>,
    /// e01 = e11 = |1>. The remaining two columns (ancilla starting in |1>)
    /// are completed canonically; the constraint equations guarantee the
    /// result is unitary.
    static EntangleParams custom(Amplitude a0, Amplitude b0, Amplitude a1, Amplitude b1) {
        Mat4 u;
        u.at(0, 0) = a0;
        u.at(3, 0) = b0;
        u.at(0, 2) = a1;
        u.at(3, 2) = b1;
        u.at(1, 1) = 1.0;
        u.at(2, 3) = 1.0;
        return EntangleParams(a0, b0, a1, b1, u);
    }

    const Mat4& unitary() const { return unitary_; }
    Amplitude a0() const { return a0_; }
    Amplitude b0() const { return b0_; }
    Amplitude a1() const { return a1_; }
    Amplitude b1() const { return b1_; }

    /// Probability that a Z-basis decoy comes out flipped.
    double predicted_z_error() const { return std::norm(b0_); }

private:
    EntangleParams(Amplitude a0, Amplitude b0, Amplitude a1, Amplitude b1, Mat4 u)
        : a0_(a0), b0_(b0), a1_(a1), b1_(b1), unitary_(u) {
        if (std::abs(std::norm(a0) + std::norm(b0) - 1.0) > kNormTolerance ||
            std::abs(std::norm(a1) + std::norm(b1) - 1.0) > kNormTolerance)
            throw std::invalid_argument("EntangleParams: amplitude pairs must be normalized");
        if (std::abs(a0 * std::conj(a1) + b0 * std::conj(b1)) > kNormTolerance)
            throw std::invalid_argument("EntangleParams: amplitude pairs must be orthogonal");
        if (!is_unitary(unitary_))
            throw std::invalid_argument("EntangleParams: probe matrix is not unitary");
    }

    Amplitude a0_, b0_, a1_, b1_;
    Mat4 unitary_;
};

/// Attach a fresh |0> ancilla to a transiting qubit and run the probe.
/// Returns the ancilla handle so the attacker can measure it later.
inline QubitId entangle_probe(const EntangleParams& params, QubitId carrier, RegisterPool& pool) {
    const QubitId ancilla = pool.add_label(StateLabel::Zero)[0];
    pool.apply_2q(params.unitary(), carrier, ancilla);
    return ancilla;
}

}  // namespace qsdc
