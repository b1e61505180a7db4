#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsdc/basis.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/state.hpp"

namespace qsdc {

using QubitId = std::uint32_t;
using RegisterId = std::uint32_t;

/// Dense row-major complex matrix of fixed dimension.
template <std::size_t Dim>
struct Mat {
    std::array<Amplitude, Dim * Dim> m{};

    Amplitude& at(std::size_t r, std::size_t c) { return m[r * Dim + c]; }
    const Amplitude& at(std::size_t r, std::size_t c) const { return m[r * Dim + c]; }

    static constexpr std::size_t dim() { return Dim; }
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

template <std::size_t Dim>
inline bool is_unitary(const Mat<Dim>& u, double tol = kNormTolerance) {
    // U^dagger U == I
    for (std::size_t r = 0; r < Dim; ++r) {
        for (std::size_t c = 0; c < Dim; ++c) {
            Amplitude sum{0.0, 0.0};
            for (std::size_t k = 0; k < Dim; ++k) sum += std::conj(u.at(k, r)) * u.at(k, c);
            const Amplitude expected = (r == c) ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
            if (std::abs(sum - expected) > tol) return false;
        }
    }
    return true;
}

inline Mat2 identity2() {
    Mat2 u;
    u.at(0, 0) = 1.0;
    u.at(1, 1) = 1.0;
    return u;
}

inline Mat2 pauli_x() {
    Mat2 u;
    u.at(0, 1) = 1.0;
    u.at(1, 0) = 1.0;
    return u;
}

inline Mat4 identity4() {
    Mat4 u;
    for (std::size_t i = 0; i < 4; ++i) u.at(i, i) = 1.0;
    return u;
}

/// CNOT with the first (most significant) qubit as control.
inline Mat4 cnot() {
    Mat4 u;
    u.at(0, 0) = 1.0;
    u.at(1, 1) = 1.0;
    u.at(2, 3) = 1.0;
    u.at(3, 2) = 1.0;
    return u;
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 u;
    for (std::size_t ar = 0; ar < 2; ++ar)
        for (std::size_t ac = 0; ac < 2; ++ac)
            for (std::size_t br = 0; br < 2; ++br)
                for (std::size_t bc = 0; bc < 2; ++bc)
                    u.at(ar * 2 + br, ac * 2 + bc) = a.at(ar, ac) * b.at(br, bc);
    return u;
}

/// A pool of small quantum registers plus a stable qubit-handle map.
///
/// Each qubit receives a permanent QubitId when its register is added.
/// Registers may later be merged (by a two-qubit unitary spanning two
/// registers); handles stay valid because the placement map is updated.
/// Measuring one qubit of an entangled register collapses its partners,
/// since all of them share the one register state.
class RegisterPool {
public:
    std::vector<QubitId> add_state(PureState state) {
        const int n = state.qubit_count();
        const RegisterId reg = static_cast<RegisterId>(registers_.size());
        std::vector<QubitId> ids(static_cast<std::size_t>(n));
        for (int l = 0; l < n; ++l) {
            const QubitId q = static_cast<QubitId>(placement_.size());
            placement_.push_back(Placement{reg, l});
            ids[static_cast<std::size_t>(l)] = q;
        }
        registers_.emplace_back(Slot{std::move(state), ids});
        return ids;
    }

    std::vector<QubitId> add_label(StateLabel label) { return add_state(state_from_label(label)); }

    std::size_t register_count() const { return registers_.size(); }
    std::size_t qubit_count() const { return placement_.size(); }

    RegisterId register_of(QubitId q) const { return place(q).reg; }
    int local_index(QubitId q) const { return place(q).local; }

    const PureState& register_state(RegisterId r) const { return slot(r).state; }
    int register_qubit_count(RegisterId r) const { return slot(r).state.qubit_count(); }
    const std::vector<QubitId>& register_qubits(RegisterId r) const { return slot(r).qubits; }

    /// Replace a register's state in place (same qubit count).
    void set_register_state(RegisterId r, PureState state) {
        Slot& s = mutable_slot(r);
        if (state.qubit_count() != s.state.qubit_count())
            throw std::invalid_argument("set_register_state: qubit count mismatch");
        s.state = std::move(state);
    }

    void set_register_label(RegisterId r, StateLabel label) {
        set_register_state(r, state_from_label(label));
    }

    // ---- distributions (no collapse) ----

    BornDistribution register_distribution(RegisterId r, const Basis& basis) const {
        return born_distribution(slot(r).state, basis);
    }

    BornDistribution qubit_distribution(QubitId q, const Basis& basis) const {
        if (basis.qubit_count != 1)
            throw std::invalid_argument("qubit_distribution: basis must be single-qubit");
        const Slot& s = slot(place(q).reg);
        return subsystem_distribution(s.state, {place(q).local}, basis);
    }

    // ---- projective measurement ----

    /// Full-register measurement; the register is left exactly in the
    /// measured basis element.
    StateLabel measure_register(RegisterId r, const Basis& basis, Rng& rng) {
        Slot& s = mutable_slot(r);
        if (basis.dim() != s.state.dim())
            throw std::invalid_argument("measure_register: basis/register size mismatch");
        const BornDistribution dist = born_distribution(s.state, basis);
        const StateLabel outcome = sample(dist, rng);
        s.state = basis.element(outcome);
        return outcome;
    }

    /// Measure one qubit of a (possibly entangled) register; partner qubits
    /// collapse to the conditional state.
    StateLabel measure_qubit(QubitId q, const Basis& basis, Rng& rng) {
        if (basis.qubit_count != 1)
            throw std::invalid_argument("measure_qubit: basis must be single-qubit");
        return measure_subsystem(place(q).reg, {place(q).local}, basis, rng);
    }

    /// Measure two qubits jointly in a two-qubit basis, merging their
    /// registers first if they are separate.
    StateLabel measure_pair(QubitId a, QubitId b, const Basis& basis, Rng& rng) {
        if (basis.qubit_count != 2)
            throw std::invalid_argument("measure_pair: basis must be two-qubit");
        if (a == b) throw std::invalid_argument("measure_pair: qubits must be distinct");
        ensure_same_register(a, b);
        return measure_subsystem(place(a).reg, {place(a).local, place(b).local}, basis, rng);
    }

    /// Measure one qubit in Z and detach it into its own fresh register;
    /// partners keep the conditional state. Returns the measured bit.
    /// After this the qubit can be overwritten wholesale (see
    /// set_register_state), which models discard-and-replace attacks.
    int split_qubit(QubitId q, Rng& rng) {
        const StateLabel out = measure_qubit(q, z_basis(), rng);
        const int bit = (out == StateLabel::One) ? 1 : 0;
        const RegisterId old = place(q).reg;
        Slot& s = mutable_slot(old);
        const int n = s.state.qubit_count();
        if (n == 1) return bit;  // already its own register

        const std::vector<int> target{place(q).local};
        const std::size_t rest_dim = s.state.dim() / 2;
        std::vector<Amplitude> rest(rest_dim);
        for (std::size_t r = 0; r < rest_dim; ++r)
            rest[r] = s.state[join_index(r, static_cast<std::size_t>(bit), n, target)];
        PureState rest_state(n - 1, std::move(rest));
        rest_state.renormalize();  // shed the split-off factor's phase share

        std::vector<QubitId> rest_qubits;
        rest_qubits.reserve(static_cast<std::size_t>(n) - 1);
        for (QubitId other : s.qubits)
            if (other != q) rest_qubits.push_back(other);

        const RegisterId rest_reg = static_cast<RegisterId>(registers_.size());
        for (std::size_t l = 0; l < rest_qubits.size(); ++l)
            placement_[rest_qubits[l]] = Placement{rest_reg, static_cast<int>(l)};
        registers_.emplace_back(Slot{std::move(rest_state), std::move(rest_qubits)});

        const RegisterId own_reg = static_cast<RegisterId>(registers_.size());
        placement_[q] = Placement{own_reg, 0};
        registers_.emplace_back(
            Slot{state_from_label(bit ? StateLabel::One : StateLabel::Zero), {q}});
        registers_[old].reset();
        return bit;
    }

    /// Project onto a chosen outcome instead of sampling. Throws if the
    /// outcome has (near-)zero probability. Used by known-answer replays
    /// and test oracles.
    void force_register_outcome(RegisterId r, const Basis& basis, StateLabel outcome) {
        Slot& s = mutable_slot(r);
        if (basis.dim() != s.state.dim())
            throw std::invalid_argument("force_register_outcome: basis/register size mismatch");
        const double p = prob_of(born_distribution(s.state, basis), outcome);
        if (p < 1e-12)
            throw std::domain_error("force_register_outcome: outcome has zero probability");
        s.state = basis.element(outcome);
    }

    void force_qubit_outcome(QubitId q, const Basis& basis, StateLabel outcome) {
        if (basis.qubit_count != 1)
            throw std::invalid_argument("force_qubit_outcome: basis must be single-qubit");
        collapse_subsystem(place(q).reg, {place(q).local}, basis, outcome);
    }

    // ---- unitaries ----

    void apply_1q(const Mat2& u, QubitId q) {
        if (!is_unitary(u)) throw std::invalid_argument("apply_1q: matrix is not unitary");
        apply_subsystem<2>(place(q).reg, {place(q).local}, u);
    }

    /// Apply a 4x4 unitary to two qubits (first argument = most significant
    /// index of the matrix). Merges previously separate registers.
    void apply_2q(const Mat4& u, QubitId a, QubitId b) {
        if (!is_unitary(u)) throw std::invalid_argument("apply_2q: matrix is not unitary");
        if (a == b) throw std::invalid_argument("apply_2q: qubits must be distinct");
        ensure_same_register(a, b);
        apply_subsystem<4>(place(a).reg, {place(a).local, place(b).local}, u);
    }

    /// Placement-consistency audit: every live register's qubits map back to
    /// it and every (register, local) pair is claimed by exactly one qubit.
    bool validate() const {
        std::size_t seen = 0;
        for (RegisterId r = 0; r < registers_.size(); ++r) {
            if (!registers_[r].has_value()) continue;
            const Slot& s = *registers_[r];
            if (s.qubits.size() != static_cast<std::size_t>(s.state.qubit_count())) return false;
            for (int l = 0; l < s.state.qubit_count(); ++l) {
                const QubitId q = s.qubits[static_cast<std::size_t>(l)];
                if (q >= placement_.size()) return false;
                if (placement_[q].reg != r || placement_[q].local != l) return false;
                ++seen;
            }
        }
        return seen == placement_.size();
    }

private:
    struct Placement {
        RegisterId reg;
        int local;
    };
    struct Slot {
        PureState state;
        std::vector<QubitId> qubits;  // in local order
    };

    std::vector<std::optional<Slot>> registers_;
    std::vector<Placement> placement_;  // indexed by QubitId

    const Placement& place(QubitId q) const {
        if (q >= placement_.size()) throw std::out_of_range("RegisterPool: unknown qubit id");
        return placement_[q];
    }

    const Slot& slot(RegisterId r) const {
        if (r >= registers_.size() || !registers_[r].has_value())
            throw std::out_of_range("RegisterPool: register does not exist (or was merged)");
        return *registers_[r];
    }

    Slot& mutable_slot(RegisterId r) {
        return const_cast<Slot&>(static_cast<const RegisterPool*>(this)->slot(r));
    }

    static StateLabel sample(const BornDistribution& dist, Rng& rng) {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (const auto& [label, p] : dist) {
            acc += p;
            if (u < acc) return label;
        }
        return dist.back().first;  // numeric slack
    }

    void ensure_same_register(QubitId a, QubitId b) {
        const RegisterId ra = place(a).reg;
        const RegisterId rb = place(b).reg;
        if (ra == rb) return;
        Slot& sa = mutable_slot(ra);
        Slot& sb = mutable_slot(rb);
        PureState joint = sa.state.tensor(sb.state);  // throws past the qubit cap
        std::vector<QubitId> qubits = sa.qubits;
        qubits.insert(qubits.end(), sb.qubits.begin(), sb.qubits.end());
        const RegisterId merged = static_cast<RegisterId>(registers_.size());
        for (std::size_t l = 0; l < qubits.size(); ++l)
            placement_[qubits[l]] = Placement{merged, static_cast<int>(l)};
        registers_.emplace_back(Slot{std::move(joint), std::move(qubits)});
        registers_[ra].reset();
        registers_[rb].reset();
    }

    // Bit position (shift) of local qubit l in an n-qubit amplitude index;
    // local 0 is the most significant bit.
    static int shift_of(int n, int local) { return n - 1 - local; }

    // Split amplitude index i into (rest, sub): `sub` collects the target
    // bits in target order, `rest` compresses the remaining bits.
    static std::pair<std::size_t, std::size_t> split_index(std::size_t i, int n,
                                                           const std::vector<int>& targets) {
        std::size_t sub = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            const std::size_t bit = (i >> shift_of(n, targets[j])) & 1u;
            sub |= bit << (targets.size() - 1 - j);
        }
        std::size_t rest = 0;
        for (int l = 0; l < n; ++l) {
            bool is_target = false;
            for (int t : targets) is_target |= (t == l);
            if (is_target) continue;
            rest = (rest << 1) | ((i >> shift_of(n, l)) & 1u);
        }
        return {rest, sub};
    }

    static std::size_t join_index(std::size_t rest, std::size_t sub, int n,
                                  const std::vector<int>& targets) {
        std::size_t i = 0;
        int rest_bits = n - static_cast<int>(targets.size());
        int consumed = 0;
        for (int l = 0; l < n; ++l) {
            int tpos = -1;
            for (std::size_t j = 0; j < targets.size(); ++j)
                if (targets[j] == l) tpos = static_cast<int>(j);
            std::size_t bit;
            if (tpos >= 0) {
                bit = (sub >> (targets.size() - 1 - static_cast<std::size_t>(tpos))) & 1u;
            } else {
                bit = (rest >> (rest_bits - 1 - consumed)) & 1u;
                ++consumed;
            }
            i |= bit << shift_of(n, l);
        }
        return i;
    }

    static void check_targets(const PureState& state, const std::vector<int>& targets) {
        for (int t : targets)
            if (t < 0 || t >= state.qubit_count())
                throw std::out_of_range("RegisterPool: local qubit index out of range");
        if (targets.size() == 2 && targets[0] == targets[1])
            throw std::invalid_argument("RegisterPool: duplicate target qubit");
    }

    static BornDistribution subsystem_distribution(const PureState& state,
                                                   const std::vector<int>& targets,
                                                   const Basis& basis) {
        check_targets(state, targets);
        const int n = state.qubit_count();
        const std::size_t sub_dim = basis.dim();
        const std::size_t rest_dim = state.dim() / sub_dim;
        BornDistribution dist;
        dist.reserve(basis.elements.size());
        for (const auto& [label, vec] : basis.elements) {
            double p = 0.0;
            for (std::size_t r = 0; r < rest_dim; ++r) {
                Amplitude c{0.0, 0.0};
                for (std::size_t s = 0; s < sub_dim; ++s)
                    c += std::conj(vec[s]) * state[join_index(r, s, n, targets)];
                p += std::norm(c);
            }
            dist.emplace_back(label, p);
        }
        return dist;
    }

    StateLabel measure_subsystem(RegisterId r, const std::vector<int>& targets,
                                 const Basis& basis, Rng& rng) {
        const BornDistribution dist = subsystem_distribution(slot(r).state, targets, basis);
        const StateLabel outcome = sample(dist, rng);
        collapse_subsystem(r, targets, basis, outcome);
        return outcome;
    }

    void collapse_subsystem(RegisterId reg, const std::vector<int>& targets, const Basis& basis,
                            StateLabel outcome) {
        Slot& s = mutable_slot(reg);
        check_targets(s.state, targets);
        const int n = s.state.qubit_count();
        const PureState& vec = basis.element(outcome);
        const std::size_t sub_dim = basis.dim();
        const std::size_t rest_dim = s.state.dim() / sub_dim;

        std::vector<Amplitude> overlap(rest_dim, Amplitude{0.0, 0.0});
        double p = 0.0;
        for (std::size_t r = 0; r < rest_dim; ++r) {
            for (std::size_t k = 0; k < sub_dim; ++k)
                overlap[r] += std::conj(vec[k]) * s.state[join_index(r, k, n, targets)];
            p += std::norm(overlap[r]);
        }
        if (p < 1e-12)
            throw std::domain_error("RegisterPool: outcome has zero probability");

        const double scale = 1.0 / std::sqrt(p);
        std::vector<Amplitude> out(s.state.dim(), Amplitude{0.0, 0.0});
        for (std::size_t r = 0; r < rest_dim; ++r)
            for (std::size_t k = 0; k < sub_dim; ++k)
                out[join_index(r, k, n, targets)] = overlap[r] * vec[k] * scale;
        s.state = PureState(n, std::move(out));
    }

    template <std::size_t Dim>
    void apply_subsystem(RegisterId reg, const std::vector<int>& targets, const Mat<Dim>& u) {
        Slot& s = mutable_slot(reg);
        check_targets(s.state, targets);
        const int n = s.state.qubit_count();
        const std::size_t rest_dim = s.state.dim() / Dim;
        std::vector<Amplitude> out(s.state.dim(), Amplitude{0.0, 0.0});
        for (std::size_t r = 0; r < rest_dim; ++r) {
            for (std::size_t row = 0; row < Dim; ++row) {
                Amplitude acc{0.0, 0.0};
                for (std::size_t col = 0; col < Dim; ++col)
                    acc += u.at(row, col) * s.state[join_index(r, col, n, targets)];
                out[join_index(r, row, n, targets)] = acc;
            }
        }
        PureState next(n, std::move(out));
        next.assert_normalized();
        s.state = std::move(next);
    }
};

}  // namespace qsdc
