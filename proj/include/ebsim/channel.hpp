#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ebsim/complex_matrix.hpp"
#include "ebsim/density.hpp"
#include "ebsim/eigen.hpp"

namespace ebsim {

// Completely positive qubit map in Kraus form. Trace preserving when
// sum K^dag K = I within 1e-10; sub-normalized sets (post-selected optical
// models) are allowed as long as sum K^dag K <= I.
class KrausChannel {
  public:
    static constexpr std::size_t max_kraus = 16;

    explicit KrausChannel(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
        if (ops_.empty() || ops_.size() > max_kraus)
            throw std::invalid_argument("kraus channel: operator count must be in [1, 16]");
        ComplexMatrix sum(2);
        for (const auto& k : ops_) {
            if (k.dim() != 2) throw std::invalid_argument("kraus channel: operators must be 2x2");
            if (!is_finite(k)) throw std::invalid_argument("kraus channel: non-finite operator");
            sum += adjoint(k) * k;
        }
        completeness_defect_ = frobenius_distance(sum, ComplexMatrix::identity(2));
        trace_preserving_ = completeness_defect_ <= 1e-10;
        const Eigensystem es = hermitian_eigensystem(sum);
        if (es.values.front() > 1.0 + 1e-10)
            throw std::invalid_argument("kraus channel: sum K^dag K exceeds identity");
    }

    const std::vector<ComplexMatrix>& kraus() const { return ops_; }
    bool trace_preserving() const { return trace_preserving_; }
    double completeness_defect() const { return completeness_defect_; }

    // Linear action sum_i K_i rho K_i^dag on a raw 2x2 matrix.
    ComplexMatrix act(const ComplexMatrix& rho) const {
        if (rho.dim() != 2) throw std::invalid_argument("kraus channel: input must be 2x2");
        ComplexMatrix out(2);
        for (const auto& k : ops_) out += k * rho * adjoint(k);
        return out;
    }

    // Action on the first qubit of a two-qubit matrix: sum (K (x) I) rho (K (x) I)^dag.
    ComplexMatrix act_one_sided(const ComplexMatrix& rho) const {
        if (rho.dim() != 4) throw std::invalid_argument("kraus channel: input must be 4x4");
        const ComplexMatrix id2 = ComplexMatrix::identity(2);
        ComplexMatrix out(4);
        for (const auto& k : ops_) {
            const ComplexMatrix kk = tensor(k, id2);
            out += kk * rho * adjoint(kk);
        }
        return out;
    }

    // Trace of the unnormalized output; the post-selection probability of a
    // sub-normalized channel, 1 for trace-preserving ones.
    double success_probability(const DensityMatrix& rho) const {
        const ComplexMatrix out = rho.dim() == 2 ? act(rho.mat()) : act_one_sided(rho.mat());
        return out.trace().real();
    }

  private:
    std::vector<ComplexMatrix> ops_;
    double completeness_defect_;
    bool trace_preserving_;
};

inline KrausChannel identity_channel() {
    return KrausChannel({ComplexMatrix::identity(2)});
}

// Half-wave-plate reflection at plate angle theta:
// [[cos 2t, -sin 2t], [-sin 2t, -cos 2t]]. Unitary and involutive.
inline ComplexMatrix reflection_matrix(double theta) {
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    ComplexMatrix r(2);
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = -s;
    r(1, 1) = -c;
    return r;
}

inline KrausChannel rotation_channel(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("rotation_channel: theta not finite");
    return KrausChannel({reflection_matrix(theta)});
}

// Dephasing: rho -> (1 - p/2) rho + (p/2) Z rho Z. Off-diagonals shrink by (1-p).
inline KrausChannel phase_damping(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("phase_damping: p outside [0, 1]");
    return KrausChannel({std::sqrt(1.0 - p / 2.0) * ComplexMatrix::identity(2),
                         std::sqrt(p / 2.0) * pauli_z()});
}

// Decay |1> -> |0> with probability eta.
inline KrausChannel amplitude_damping(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("amplitude_damping: eta outside [0, 1]");
    ComplexMatrix keep(2);
    keep(0, 0) = 1.0;
    keep(1, 1) = std::sqrt(1.0 - eta);
    ComplexMatrix decay(2);
    decay(0, 1) = std::sqrt(eta);
    return KrausChannel({keep, decay});
}

// Raw Choi matrix: one-sided action on (|01> + |10>)/sqrt(2). Defined for
// sub-normalized channels too, where its trace is the probe success
// probability rather than one.
inline ComplexMatrix choi_matrix(const KrausChannel& phi) {
    return phi.act_one_sided(bell_psi_plus_projector());
}

// Minimal Kraus set recovered from the Choi eigendecomposition; eigenvalues
// at or below the cutoff are dropped. A qubit map needs at most four
// operators, so this bounds growth under repeated composition.
inline std::vector<ComplexMatrix> kraus_from_choi(const ComplexMatrix& choi,
                                                  double cutoff = 1e-12) {
    if (choi.dim() != 4) throw std::invalid_argument("kraus_from_choi: choi must be 4x4");
    const Eigensystem es = hermitian_eigensystem(choi);
    std::vector<ComplexMatrix> ops;
    for (int k = 0; k < 4; ++k) {
        const double lambda = es.values[static_cast<std::size_t>(k)];
        if (lambda <= cutoff) continue;
        // Probe anchor pairs system basis index s with ancilla index 1-s, so
        // the eigenvector reshapes as K[s][i] = sqrt(2 lambda) v[2 s + (1-i)].
        const double scale = std::sqrt(2.0 * lambda);
        ComplexMatrix op(2);
        for (int s = 0; s < 2; ++s)
            for (int i = 0; i < 2; ++i) op(s, i) = scale * es.vectors(2 * s + (1 - i), k);
        ops.push_back(op);
    }
    if (ops.empty()) ops.push_back(ComplexMatrix::zero(2));
    return ops;
}

inline KrausChannel compress(const KrausChannel& phi) {
    return KrausChannel(kraus_from_choi(choi_matrix(phi)));
}

// after o before, Kraus set {A_i B_j}. Products with negligible norm are
// pruned; if the raw product set would exceed 16 operators the inputs are
// compressed first.
inline KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
    if (after.kraus().size() * before.kraus().size() > KrausChannel::max_kraus)
        return compose(compress(after), compress(before));
    std::vector<ComplexMatrix> ops;
    ops.reserve(after.kraus().size() * before.kraus().size());
    for (const auto& ka : after.kraus())
        for (const auto& kb : before.kraus()) {
            ComplexMatrix prod = ka * kb;
            if (prod.frobenius_norm() < 1e-14) continue;
            ops.push_back(std::move(prod));
        }
    if (ops.empty()) ops.push_back(ComplexMatrix::zero(2));
    return KrausChannel(std::move(ops));
}

inline KrausChannel repeat(const KrausChannel& phi, int n) {
    if (n < 0) throw std::invalid_argument("repeat: n must be non-negative");
    KrausChannel out = identity_channel();
    for (int i = 0; i < n; ++i) out = compose(phi, out);
    return out;
}

// Validated action on a state; requires a trace-preserving channel.
inline DensityMatrix apply(const KrausChannel& phi, const DensityMatrix& rho) {
    if (!phi.trace_preserving())
        throw std::invalid_argument("apply: channel is not trace preserving");
    if (rho.dim() != 2) throw std::invalid_argument("apply: state must be one qubit");
    return DensityMatrix(phi.act(rho.mat()), rho.tolerance());
}

inline DensityMatrix apply_one_side(const KrausChannel& phi, const DensityMatrix& rho) {
    if (!phi.trace_preserving())
        throw std::invalid_argument("apply_one_side: channel is not trace preserving");
    if (rho.dim() != 4) throw std::invalid_argument("apply_one_side: state must be two-qubit");
    return DensityMatrix(phi.act_one_sided(rho.mat()), rho.tolerance());
}

// Renormalize a raw (e.g. post-selected) output by its trace.
inline DensityMatrix normalized_state(const ComplexMatrix& raw, double tol = 1e-10) {
    const double tr = raw.trace().real();
    if (!(tr > 0.0)) throw std::runtime_error("normalized_state: non-positive trace");
    return DensityMatrix((1.0 / tr) * raw, tol);
}

inline DensityMatrix choi(const KrausChannel& phi) {
    if (!phi.trace_preserving())
        throw std::invalid_argument("choi: channel is not trace preserving");
    return DensityMatrix(choi_matrix(phi));
}

inline KrausChannel rotated_pd(double theta, double p) {
    return compose(rotation_channel(theta), phase_damping(p));
}

inline KrausChannel rotated_ad(double theta, double eta) {
    return compose(rotation_channel(theta), amplitude_damping(eta));
}

// Waveplate angle realizing amplitude damping eta in the Sagnac loop and its
// inverse; alpha runs over [pi/4, pi/2] as eta runs from 1 down to 0.
inline double alpha_of_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("alpha_of_eta: eta outside [0, 1]");
    return std::acos(-std::sqrt(1.0 - eta)) / 2.0;
}

inline double eta_of_alpha(double alpha) {
    constexpr double lo = std::numbers::pi / 4.0;
    constexpr double hi = std::numbers::pi / 2.0;
    if (!(alpha >= lo - 1e-12 && alpha <= hi + 1e-12))
        throw std::invalid_argument("eta_of_alpha: alpha outside [pi/4, pi/2]");
    const double c = std::cos(2.0 * alpha);
    return 1.0 - c * c;
}

// Output of the two-stage dephasing chain built the way the optical bench
// builds it: a convex mixture of the four deterministic waveplate branch
// circuits (I/Z choice per stage, each followed by the theta plate, with an
// optional filter plate between the stages), applied to the first qubit.
// Equal to the composed-channel route within rounding.
inline DensityMatrix pd_chain_output(double p, double theta, std::optional<double> filter_phi,
                                     const DensityMatrix& rho_in) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("pd_chain_output: p outside [0, 1]");
    if (rho_in.dim() != 4) throw std::invalid_argument("pd_chain_output: state must be two-qubit");

    const ComplexMatrix plate = reflection_matrix(theta);
    const ComplexMatrix filter =
        filter_phi ? reflection_matrix(*filter_phi) : ComplexMatrix::identity(2);
    const ComplexMatrix branch_ops[2] = {ComplexMatrix::identity(2), pauli_z()};
    const double branch_prob[2] = {1.0 - p / 2.0, p / 2.0};

    const ComplexMatrix id2 = ComplexMatrix::identity(2);
    ComplexMatrix out(4);
    for (int first = 0; first < 2; ++first)
        for (int second = 0; second < 2; ++second) {
            const ComplexMatrix circuit =
                plate * branch_ops[second] * filter * plate * branch_ops[first];
            const ComplexMatrix u = tensor(circuit, id2);
            out += branch_prob[first] * branch_prob[second] * (u * rho_in.mat() * adjoint(u));
        }
    return DensityMatrix(out, rho_in.tolerance());
}

}  // namespace ebsim
