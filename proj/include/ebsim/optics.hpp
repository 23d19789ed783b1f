#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ebsim/channel.hpp"
#include "ebsim/complex_matrix.hpp"

namespace ebsim {

// Intensity transmissivities/reflectivities of the recombining beam splitter
// (BS) and the polarizing beam splitter (PBS), per input polarization.
// Defaults are the ideal elements: 50/50 BS, perfect PBS.
struct OpticsParams {
    double th_bs = 0.5;
    double rh_bs = 0.5;
    double tv_bs = 0.5;
    double rv_bs = 0.5;
    double th_pbs = 1.0;
    double rh_pbs = 0.0;
    double tv_pbs = 0.0;
    double rv_pbs = 1.0;

    static OpticsParams ideal() { return OpticsParams{}; }

    void validate() const {
        const double vals[8] = {th_bs, rh_bs, tv_bs, rv_bs, th_pbs, rh_pbs, tv_pbs, rv_pbs};
        for (double v : vals)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("optics: intensity fraction outside [0, 1]");
        if (th_bs + rh_bs > 1.0 + 1e-9 || tv_bs + rv_bs > 1.0 + 1e-9)
            throw std::invalid_argument("optics: BS transmission plus reflection exceeds one");
    }
};

// Plain-text key=value optics file; '#' starts a comment, keys are the eight
// Table entries (TH_BS, RH_BS, TV_BS, RV_BS, TH_PBS, RH_PBS, TV_PBS, RV_PBS),
// any missing key keeps its ideal default.
inline OpticsParams load_optics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("optics: cannot open " + path);
    OpticsParams params;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("optics: missing '=' at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        double parsed = 0.0;
        try {
            std::size_t used = 0;
            parsed = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw std::runtime_error("optics: bad value at line " + std::to_string(lineno));
        }
        if (key == "TH_BS") params.th_bs = parsed;
        else if (key == "RH_BS") params.rh_bs = parsed;
        else if (key == "TV_BS") params.tv_bs = parsed;
        else if (key == "RV_BS") params.rv_bs = parsed;
        else if (key == "TH_PBS") params.th_pbs = parsed;
        else if (key == "RH_PBS") params.rh_pbs = parsed;
        else if (key == "TV_PBS") params.tv_pbs = parsed;
        else if (key == "RV_PBS") params.rv_pbs = parsed;
        else throw std::runtime_error("optics: unknown key '" + key + "' at line " +
                                      std::to_string(lineno));
    }
    params.validate();
    return params;
}

// One amplitude-damping stage as the bench realizes it: a Sagnac loop opened
// and closed by one PBS, a damping waveplate in the counter-clockwise arm, a
// reference waveplate in the clockwise arm, then an unbalanced interferometer
// whose beam splitter merges the undamped and damped output paths
// incoherently (path difference beyond the coherence length, so cross terms
// drop). Imperfect PBS splitting mixes the arms at the opening pass;
// amplitudes taking a non-nominal exit at the closing pass are lost. The
// resulting Kraus pair is sub-normalized; downstream states are renormalized
// by their trace (coincidence post-selection). With ideal parameters the
// renormalized map is exactly amplitude damping.
inline KrausChannel sagnac_amplitude_damping(double eta, const OpticsParams& optics) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("sagnac_amplitude_damping: eta outside [0, 1]");
    optics.validate();

    const double alpha = alpha_of_eta(eta);
    const ComplexMatrix damp_plate = reflection_matrix(alpha);
    const ComplexMatrix ref_plate = pauli_z();  // unrotated waveplate

    auto diag = [](double a, double b) {
        ComplexMatrix m(2);
        m(0, 0) = a;
        m(1, 1) = b;
        return m;
    };
    // Opening PBS: polarization is preserved, only the arm assignment picks
    // up the per-polarization amplitude.
    const ComplexMatrix into_cw = diag(std::sqrt(optics.th_pbs), std::sqrt(optics.tv_pbs));
    const ComplexMatrix into_ccw = diag(std::sqrt(optics.rh_pbs), std::sqrt(optics.rv_pbs));
    // Closing PBS, nominal exits only: H transmits, V reflects.
    const ComplexMatrix exit_t = diag(std::sqrt(optics.th_pbs), 0.0);
    const ComplexMatrix exit_r = diag(0.0, std::sqrt(optics.rv_pbs));

    // Undamped path: transmitted H from the clockwise arm plus reflected V
    // from the counter-clockwise arm, coherently (common-path loop).
    const ComplexMatrix undamped = exit_t * ref_plate * into_cw + exit_r * damp_plate * into_ccw;
    // Damped path: the complementary exits.
    const ComplexMatrix damped = exit_r * ref_plate * into_cw + exit_t * damp_plate * into_ccw;

    const ComplexMatrix bs_t = diag(std::sqrt(optics.th_bs), std::sqrt(optics.tv_bs));
    const ComplexMatrix bs_r = diag(std::sqrt(optics.rh_bs), std::sqrt(optics.rv_bs));

    std::vector<ComplexMatrix> ops;
    const ComplexMatrix k_undamped = bs_t * undamped;
    const ComplexMatrix k_damped = bs_r * damped;
    if (k_undamped.frobenius_norm() >= 1e-14) ops.push_back(k_undamped);
    if (k_damped.frobenius_norm() >= 1e-14) ops.push_back(k_damped);
    if (ops.empty()) ops.push_back(ComplexMatrix::zero(2));
    return KrausChannel(std::move(ops));
}

// Full imperfect stage: Sagnac damping followed by the (ideal) rotation plate.
inline KrausChannel roe_rotated_ad(double theta, double eta, const OpticsParams& optics) {
    return compose(rotation_channel(theta), sagnac_amplitude_damping(eta, optics));
}

}  // namespace ebsim
