#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ebsim/channel.hpp"
#include "ebsim/entanglement.hpp"
#include "ebsim/optics.hpp"

namespace ebsim {

enum class MapKind { pd, ad };
enum class SweepVar { theta, phi };

inline double degrees_to_radians(double degrees) {
    return degrees * std::numbers::pi / 180.0;
}

struct McSpec {
    int samples = 1000;
    std::uint64_t seed = 0;
    double sigma_fidelity = 0.0;
    double sigma_theta = 0.0;  // radians, amplitude-damping sweeps only
};

struct SweepSpec {
    MapKind map_kind = MapKind::pd;
    double damping = 0.0;
    SweepVar sweep_var = SweepVar::theta;
    std::optional<double> fixed_theta;  // required for phi sweeps
    double start = -0.6;
    double stop = 0.6;
    int count = 121;
    double input_fidelity = 1.0;
    bool roe = false;
    OpticsParams optics = OpticsParams::ideal();
    McSpec mc;
    double eb_tol = 1e-9;

    void validate() const {
        if (!(damping >= 0.0 && damping <= 1.0))
            throw std::invalid_argument("sweep: damping outside [0, 1]");
        if (count < 2) throw std::invalid_argument("sweep: grid needs at least 2 points");
        if (!(start < stop)) throw std::invalid_argument("sweep: start must be below stop");
        if (!(input_fidelity >= 0.25 && input_fidelity <= 1.0))
            throw std::invalid_argument("sweep: fidelity outside [0.25, 1]");
        if (sweep_var == SweepVar::phi && !fixed_theta)
            throw std::invalid_argument("sweep: phi sweep needs a fixed theta");
        if (mc.samples < 1) throw std::invalid_argument("sweep: need at least 1 sample");
        if (mc.sigma_fidelity < 0.0 || mc.sigma_theta < 0.0)
            throw std::invalid_argument("sweep: negative spread");
        optics.validate();
    }

    std::vector<double> grid() const {
        std::vector<double> angles(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            angles[static_cast<std::size_t>(i)] =
                start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
        return angles;
    }
};

struct CurvePoint {
    double angle;
    double concurrence;
    double negativity;
    bool eb;
};

struct BandPoint {
    double angle;
    double c_min;
    double c_max;
};

struct Curve {
    std::vector<CurvePoint> points;
};

struct Band {
    std::vector<BandPoint> points;
};

// One elementary map: damping followed by the rotation plate. The realistic
// optics model only exists for amplitude damping; the dephasing bench is
// waveplates only, so its stage is identical in both modes.
inline KrausChannel elementary_map(MapKind kind, double damping, double theta, bool roe,
                                   const OpticsParams& optics) {
    if (kind == MapKind::pd) return rotated_pd(theta, damping);
    return roe ? roe_rotated_ad(theta, damping, optics) : rotated_ad(theta, damping);
}

// The two-stage line, with an optional filter plate between the stages.
inline KrausChannel two_stage_channel(MapKind kind, double damping, double theta,
                                      std::optional<double> filter_phi, bool roe,
                                      const OpticsParams& optics) {
    const KrausChannel stage = elementary_map(kind, damping, theta, roe, optics);
    if (!filter_phi) return compose(stage, stage);
    return compose(stage, compose(rotation_channel(*filter_phi), stage));
}

struct PointResult {
    double concurrence;
    double negativity;
    bool eb;
};

// Send one side of the fidelity-F input through the chain, renormalize
// (post-selection for sub-normalized chains) and quantify what survives.
inline PointResult evaluate_chain(const KrausChannel& chain, double fidelity, double eb_tol) {
    const DensityMatrix input = werner_state(fidelity);
    const DensityMatrix out = normalized_state(chain.act_one_sided(input.mat()));
    const double neg = negativity(out);
    return PointResult{concurrence(out), neg, neg <= eb_tol};
}

inline Curve sweep_theta(const SweepSpec& spec) {
    spec.validate();
    if (spec.sweep_var != SweepVar::theta)
        throw std::invalid_argument("sweep_theta: spec is not a theta sweep");
    Curve curve;
    curve.points.reserve(static_cast<std::size_t>(spec.count));
    for (double theta : spec.grid()) {
        const KrausChannel chain = two_stage_channel(spec.map_kind, spec.damping, theta,
                                                     std::nullopt, spec.roe, spec.optics);
        const PointResult r = evaluate_chain(chain, spec.input_fidelity, spec.eb_tol);
        curve.points.push_back(CurvePoint{theta, r.concurrence, r.negativity, r.eb});
    }
    return curve;
}

inline Curve sweep_phi(const SweepSpec& spec) {
    spec.validate();
    if (spec.sweep_var != SweepVar::phi)
        throw std::invalid_argument("sweep_phi: spec is not a phi sweep");
    Curve curve;
    curve.points.reserve(static_cast<std::size_t>(spec.count));
    for (double phi : spec.grid()) {
        const KrausChannel chain = two_stage_channel(spec.map_kind, spec.damping,
                                                     *spec.fixed_theta, phi, spec.roe,
                                                     spec.optics);
        const PointResult r = evaluate_chain(chain, spec.input_fidelity, spec.eb_tol);
        curve.points.push_back(CurvePoint{phi, r.concurrence, r.negativity, r.eb});
    }
    return curve;
}

// Maximal contiguous runs of entanglement-broken grid points, widened by half
// a grid step at interior boundaries (the crossing is only localized to one
// step); clipped at the curve ends.
inline std::vector<std::pair<double, double>> find_eb_windows(const Curve& curve,
                                                              double tol = 1e-9) {
    if (curve.points.empty()) throw std::invalid_argument("find_eb_windows: empty curve");
    std::vector<std::pair<double, double>> windows;
    const auto& pts = curve.points;
    const std::size_t n = pts.size();
    std::size_t i = 0;
    while (i < n) {
        if (pts[i].negativity > tol) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && pts[j + 1].negativity <= tol) ++j;
        const double lo = i == 0 ? pts[0].angle : 0.5 * (pts[i - 1].angle + pts[i].angle);
        const double hi = j + 1 == n ? pts[n - 1].angle : 0.5 * (pts[j].angle + pts[j + 1].angle);
        windows.emplace_back(lo, hi);
        i = j + 1;
    }
    return windows;
}

// Damping level at which the unfiltered two-stage line turns EB, located by
// bisection. Inside a genuine EB region the Choi negativity vanishes exactly,
// so the bisection tests against a strict numerical zero rather than the
// looser physical EB tolerance; otherwise lines whose negativity merely decays
// toward full damping (the unrotated ones) would fake a crossing near d = 1.
// Crossings squeezed against the d = 1 endpoint are reported as no threshold.
inline std::optional<double> critical_damping(MapKind kind, double theta, double tol = 1e-6) {
    if (!std::isfinite(theta)) throw std::invalid_argument("critical_damping: theta not finite");
    if (!(tol > 0.0)) throw std::invalid_argument("critical_damping: tolerance must be positive");
    const auto eb_at = [&](double d) {
        const KrausChannel chain =
            two_stage_channel(kind, d, theta, std::nullopt, false, OpticsParams::ideal());
        return is_eb(chain, 1e-13).is_eb;
    };
    if (eb_at(0.0)) return 0.0;
    if (!eb_at(1.0)) return std::nullopt;
    double lo = 0.0;  // not EB
    double hi = 1.0;  // EB
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (eb_at(mid) ? hi : lo) = mid;
    }
    const double threshold = 0.5 * (lo + hi);
    if (threshold > 1.0 - std::max(2.0 * tol, 1e-5)) return std::nullopt;
    return threshold;
}

struct FilterOptimum {
    double phi_star;  // radians, in [0, pi/2)
    double c_star;
};

// Best filter plate angle for the two-stage line: coarse scan over one
// period [0, pi/2), then golden-section refinement around the best cell.
// Never returns less than the best scanned value.
inline FilterOptimum optimize_filter(MapKind kind, double damping, double theta,
                                     double fidelity = 1.0) {
    const double period = std::numbers::pi / 2.0;
    const auto objective = [&](double phi) {
        const KrausChannel chain =
            two_stage_channel(kind, damping, theta, phi, false, OpticsParams::ideal());
        return evaluate_chain(chain, fidelity, 1e-9).concurrence;
    };

    double best_phi = 0.0;
    double best_c = -1.0;
    const auto consider = [&](double phi, double c) {
        if (c > best_c) {
            best_c = c;
            best_phi = phi;
        }
    };

    constexpr int grid_points = 64;
    const double step = period / grid_points;
    for (int i = 0; i < grid_points; ++i) {
        const double phi = static_cast<double>(i) * step;
        consider(phi, objective(phi));
    }

    double a = best_phi - step;
    double b = best_phi + step;
    constexpr double golden = 0.6180339887498949;  // (sqrt(5) - 1) / 2
    double c = b - golden * (b - a);
    double d = a + golden * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    consider(c, fc);
    consider(d, fd);
    while (b - a > 1e-8) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - golden * (b - a);
            fc = objective(c);
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + golden * (b - a);
            fd = objective(d);
            consider(d, fd);
        }
    }

    double phi = std::fmod(best_phi, period);
    if (phi < 0.0) phi += period;
    return FilterOptimum{phi, best_c};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic sample stream for one grid point, derived from (seed, point
// index) so sweep results do not depend on evaluation order. The variate
// mapping is spelled out here rather than taken from <random> distributions
// to keep byte-identical output across standard libraries.
class PointRng {
  public:
    PointRng(std::uint64_t seed, std::uint64_t point_index) {
        std::uint64_t state = seed;
        const std::uint64_t a = detail::splitmix64(state);
        state ^= 0x9e3779b97f4a7c15ULL * (point_index + 1);
        const std::uint64_t b = detail::splitmix64(state);
        engine_.seed(a ^ (b << 1));
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal(double mean, double sigma) {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * std::numbers::pi * u2);
    }

    double truncated_normal(double mean, double sigma, double lo, double hi) {
        for (int attempt = 0; attempt < 1000000; ++attempt) {
            const double x = normal(mean, sigma);
            if (x >= lo && x <= hi) return x;
        }
        throw std::runtime_error("truncated_normal: rejection cap reached");
    }

  private:
    std::mt19937_64 engine_;
};

// Monte-Carlo envelope: per grid angle, the min/max concurrence over samples
// of the input fidelity (truncated normal) and, for amplitude damping only,
// a common-mode offset on the two synchronized rotation plates (uniform).
inline Band mc_band(const SweepSpec& spec) {
    spec.validate();
    const bool jitter_theta = spec.map_kind == MapKind::ad && spec.mc.sigma_theta > 0.0;
    const bool jitter_fidelity = spec.mc.sigma_fidelity > 0.0;

    Band band;
    band.points.reserve(static_cast<std::size_t>(spec.count));
    const std::vector<double> angles = spec.grid();
    for (std::size_t i = 0; i < angles.size(); ++i) {
        PointRng rng(spec.mc.seed, static_cast<std::uint64_t>(i));
        double c_min = std::numeric_limits<double>::infinity();
        double c_max = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < spec.mc.samples; ++s) {
            const double fidelity =
                jitter_fidelity ? rng.truncated_normal(spec.input_fidelity,
                                                       spec.mc.sigma_fidelity, 0.25, 1.0)
                                : spec.input_fidelity;
            const double offset =
                jitter_theta ? rng.uniform(-spec.mc.sigma_theta, spec.mc.sigma_theta) : 0.0;
            KrausChannel chain =
                spec.sweep_var == SweepVar::theta
                    ? two_stage_channel(spec.map_kind, spec.damping, angles[i] + offset,
                                        std::nullopt, spec.roe, spec.optics)
                    : two_stage_channel(spec.map_kind, spec.damping, *spec.fixed_theta + offset,
                                        angles[i], spec.roe, spec.optics);
            const double c = evaluate_chain(chain, fidelity, spec.eb_tol).concurrence;
            c_min = std::min(c_min, c);
            c_max = std::max(c_max, c);
        }
        band.points.push_back(BandPoint{angles[i], c_min, c_max});
    }
    return band;
}

}  // namespace ebsim
