// Command-line front end: parameter sweeps, EB-order and threshold queries,
// filter optimization and Monte-Carlo envelope bands, all emitted as CSV.
//
// Exit codes: 0 success, 2 flag validation error, 3 numerical/runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ebsim/csv.hpp"
#include "ebsim/entanglement.hpp"
#include "ebsim/experiment.hpp"
#include "ebsim/optics.hpp"

namespace {

struct CliOptions {
    std::string map = "pd";
    double damping = 0.0;
    double theta = 0.0;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    double fidelity = 1.0;
    bool roe = false;
    std::string optics_path;
    std::string unit = "rad";
    std::string output = "-";
    int precision = 9;
    double eb_tol = 1e-9;
    int max_n = 16;
    double tol = 1e-6;
    std::string sweep = "theta";
    int samples = 1000;
    std::uint64_t seed = 0;
    double sigma_f = 0.0;
    double sigma_theta = 0.0;
    int stages = 1;
    double filter_phi = 0.0;
    bool filter_set = false;
};

double to_radians(double value, const std::string& unit) {
    return unit == "deg" ? ebsim::degrees_to_radians(value) : value;
}

ebsim::MapKind map_kind(const std::string& name) {
    return name == "ad" ? ebsim::MapKind::ad : ebsim::MapKind::pd;
}

void emit(const CliOptions& opt, const std::string& text) {
    if (opt.output == "-") {
        std::cout << text;
        return;
    }
    ebsim::write_text_atomic(opt.output, text);
}

ebsim::SweepSpec sweep_spec(const CliOptions& opt, ebsim::SweepVar var) {
    ebsim::SweepSpec spec;
    spec.map_kind = map_kind(opt.map);
    spec.damping = opt.damping;
    spec.sweep_var = var;
    if (var == ebsim::SweepVar::phi) spec.fixed_theta = to_radians(opt.theta, opt.unit);
    spec.start = to_radians(opt.from, opt.unit);
    spec.stop = to_radians(opt.to, opt.unit);
    spec.count = opt.steps;
    spec.input_fidelity = opt.fidelity;
    spec.roe = opt.roe;
    if (!opt.optics_path.empty()) spec.optics = ebsim::load_optics(opt.optics_path);
    spec.mc.samples = opt.samples;
    spec.mc.seed = opt.seed;
    spec.mc.sigma_fidelity = opt.sigma_f;
    spec.mc.sigma_theta = to_radians(opt.sigma_theta, opt.unit);
    spec.eb_tol = opt.eb_tol;
    return spec;
}

void add_angle_unit_flag(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--unit", opt.unit, "Unit of angle inputs")
        ->check(CLI::IsMember({"rad", "deg"}))
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("-o,--output", opt.output, "Output path ('-' for stdout)")
        ->capture_default_str();
    cmd->add_option("--precision", opt.precision, "Decimal places in CSV values")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
}

void add_map_flags(CLI::App* cmd, CliOptions& opt, bool with_optics) {
    cmd->add_option("--map", opt.map, "Elementary map family")
        ->check(CLI::IsMember({"pd", "ad"}))
        ->required();
    cmd->add_option("--damping", opt.damping, "Damping parameter (p or eta)")
        ->check(CLI::Range(0.0, 1.0))
        ->required();
    if (with_optics) {
        cmd->add_flag("--roe", opt.roe, "Use the imperfect-optics stage (amplitude damping)");
        cmd->add_option("--optics", opt.optics_path, "Optics parameter file (key=value)")
            ->check(CLI::ExistingFile);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement transmission through repeated noisy qubit channels"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* cmd_sweep_theta =
        app.add_subcommand("sweep-theta", "Two-stage channel vs. plate angle theta");
    add_map_flags(cmd_sweep_theta, opt, true);
    cmd_sweep_theta->add_option("--from", opt.from, "Grid start angle (default -0.6 rad)");
    cmd_sweep_theta->add_option("--to", opt.to, "Grid stop angle (default 0.6 rad)");
    cmd_sweep_theta->add_option("--steps", opt.steps, "Grid point count (default 121)")
        ->check(CLI::Range(2, 1000000));
    cmd_sweep_theta->add_option("--fidelity", opt.fidelity, "Input state fidelity")
        ->check(CLI::Range(0.25, 1.0))
        ->capture_default_str();
    cmd_sweep_theta->add_option("--eb-tol", opt.eb_tol, "Negativity threshold for the EB flag")
        ->capture_default_str();
    add_angle_unit_flag(cmd_sweep_theta, opt);
    add_output_flags(cmd_sweep_theta, opt);

    CLI::App* cmd_sweep_phi =
        app.add_subcommand("sweep-phi", "Filtered channel vs. filter angle phi");
    add_map_flags(cmd_sweep_phi, opt, true);
    cmd_sweep_phi->add_option("--theta", opt.theta, "Fixed stage plate angle")->required();
    cmd_sweep_phi->add_option("--from", opt.from, "Grid start angle (default -0.8 rad)");
    cmd_sweep_phi->add_option("--to", opt.to, "Grid stop angle (default 0.8 rad)");
    cmd_sweep_phi->add_option("--steps", opt.steps, "Grid point count (default 161)")
        ->check(CLI::Range(2, 1000000));
    cmd_sweep_phi->add_option("--fidelity", opt.fidelity, "Input state fidelity")
        ->check(CLI::Range(0.25, 1.0))
        ->capture_default_str();
    cmd_sweep_phi->add_option("--eb-tol", opt.eb_tol, "Negativity threshold for the EB flag")
        ->capture_default_str();
    add_angle_unit_flag(cmd_sweep_phi, opt);
    add_output_flags(cmd_sweep_phi, opt);

    CLI::App* cmd_eb_order = app.add_subcommand("eb-order", "Repetitions until the map breaks"
                                                            " entanglement");
    add_map_flags(cmd_eb_order, opt, false);
    cmd_eb_order->add_option("--theta", opt.theta, "Stage plate angle")->required();
    cmd_eb_order->add_option("--max-n", opt.max_n, "Largest repetition count to try")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    cmd_eb_order->add_option("--eb-tol", opt.eb_tol, "Negativity threshold")
        ->capture_default_str();
    add_angle_unit_flag(cmd_eb_order, opt);
    add_output_flags(cmd_eb_order, opt);

    CLI::App* cmd_critical =
        app.add_subcommand("critical-damping", "Damping threshold of the two-stage line");
    cmd_critical->add_option("--map", opt.map, "Elementary map family")
        ->check(CLI::IsMember({"pd", "ad"}))
        ->required();
    cmd_critical->add_option("--theta", opt.theta, "Stage plate angle")->required();
    cmd_critical->add_option("--tol", opt.tol, "Bisection tolerance")->capture_default_str();
    add_angle_unit_flag(cmd_critical, opt);
    add_output_flags(cmd_critical, opt);

    CLI::App* cmd_optimize =
        app.add_subcommand("optimize-filter", "Best filter plate angle for the two-stage line");
    add_map_flags(cmd_optimize, opt, false);
    cmd_optimize->add_option("--theta", opt.theta, "Stage plate angle")->required();
    cmd_optimize->add_option("--fidelity", opt.fidelity, "Input state fidelity")
        ->check(CLI::Range(0.25, 1.0))
        ->capture_default_str();
    add_angle_unit_flag(cmd_optimize, opt);
    add_output_flags(cmd_optimize, opt);

    CLI::App* cmd_band = app.add_subcommand("band", "Monte-Carlo concurrence envelope");
    add_map_flags(cmd_band, opt, true);
    cmd_band->add_option("--sweep", opt.sweep, "Swept angle")
        ->check(CLI::IsMember({"theta", "phi"}))
        ->capture_default_str();
    cmd_band->add_option("--theta", opt.theta, "Fixed stage plate angle (phi sweeps)");
    cmd_band->add_option("--from", opt.from, "Grid start angle (default per swept variable)");
    cmd_band->add_option("--to", opt.to, "Grid stop angle (default per swept variable)");
    cmd_band->add_option("--steps", opt.steps, "Grid point count (default per swept variable)")
        ->check(CLI::Range(2, 1000000));
    cmd_band->add_option("--fidelity", opt.fidelity, "Mean input state fidelity")
        ->check(CLI::Range(0.25, 1.0))
        ->capture_default_str();
    cmd_band->add_option("--samples", opt.samples, "Samples per grid point")
        ->check(CLI::Range(1, 10000000))
        ->capture_default_str();
    cmd_band->add_option("--seed", opt.seed, "Sample stream seed")->capture_default_str();
    cmd_band->add_option("--sigma-f", opt.sigma_f, "Fidelity standard deviation")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_band->add_option("--sigma-theta", opt.sigma_theta,
                         "Half-width of the plate angle jitter (amplitude damping only)")
        ->capture_default_str();
    add_angle_unit_flag(cmd_band, opt);
    add_output_flags(cmd_band, opt);

    CLI::App* cmd_choi = app.add_subcommand("choi", "Choi matrix of the (repeated) map");
    add_map_flags(cmd_choi, opt, false);
    cmd_choi->add_option("--theta", opt.theta, "Stage plate angle")->required();
    cmd_choi->add_option("--stages", opt.stages, "Number of stages")
        ->check(CLI::Range(1, 16))
        ->capture_default_str();
    CLI::Option* filter_opt =
        cmd_choi->add_option("--filter", opt.filter_phi, "Filter plate angle between two stages");
    add_angle_unit_flag(cmd_choi, opt);
    add_output_flags(cmd_choi, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    opt.filter_set = filter_opt->count() > 0;

    // grid defaults depend on which variable is swept
    const auto apply_grid_defaults = [&opt](CLI::App* cmd, bool phi_grid) {
        if (cmd->count("--from") == 0) opt.from = phi_grid ? -0.8 : -0.6;
        if (cmd->count("--to") == 0) opt.to = phi_grid ? 0.8 : 0.6;
        if (cmd->count("--steps") == 0) opt.steps = phi_grid ? 161 : 121;
    };
    if (cmd_sweep_theta->parsed()) apply_grid_defaults(cmd_sweep_theta, false);
    if (cmd_sweep_phi->parsed()) apply_grid_defaults(cmd_sweep_phi, true);
    if (cmd_band->parsed()) apply_grid_defaults(cmd_band, opt.sweep == "phi");

    try {
        if (cmd_sweep_theta->parsed()) {
            const ebsim::Curve curve = ebsim::sweep_theta(sweep_spec(opt, ebsim::SweepVar::theta));
            emit(opt, ebsim::curve_csv(curve, opt.precision));
        } else if (cmd_sweep_phi->parsed()) {
            const ebsim::Curve curve = ebsim::sweep_phi(sweep_spec(opt, ebsim::SweepVar::phi));
            emit(opt, ebsim::curve_csv(curve, opt.precision));
        } else if (cmd_eb_order->parsed()) {
            const ebsim::KrausChannel stage =
                ebsim::elementary_map(map_kind(opt.map), opt.damping,
                                      to_radians(opt.theta, opt.unit), false,
                                      ebsim::OpticsParams::ideal());
            const std::optional<int> k = ebsim::eb_order(stage, opt.max_n, opt.eb_tol);
            emit(opt, k ? std::to_string(*k) + "\n" : std::string("none\n"));
        } else if (cmd_critical->parsed()) {
            const std::optional<double> threshold = ebsim::critical_damping(
                map_kind(opt.map), to_radians(opt.theta, opt.unit), opt.tol);
            emit(opt, threshold ? ebsim::format_fixed(*threshold, opt.precision) + "\n"
                                : std::string("none\n"));
        } else if (cmd_optimize->parsed()) {
            const ebsim::FilterOptimum best = ebsim::optimize_filter(
                map_kind(opt.map), opt.damping, to_radians(opt.theta, opt.unit), opt.fidelity);
            emit(opt, "phi_star_rad,c_star\n" + ebsim::format_fixed(best.phi_star, opt.precision) +
                          "," + ebsim::format_fixed(best.c_star, opt.precision) + "\n");
        } else if (cmd_band->parsed()) {
            const ebsim::SweepVar var =
                opt.sweep == "phi" ? ebsim::SweepVar::phi : ebsim::SweepVar::theta;
            if (var == ebsim::SweepVar::phi && cmd_band->count("--theta") == 0) {
                std::cerr << "band: --sweep phi requires --theta\n";
                return 2;
            }
            const ebsim::Band band = ebsim::mc_band(sweep_spec(opt, var));
            emit(opt, ebsim::band_csv(band, opt.precision));
        } else if (cmd_choi->parsed()) {
            if (opt.filter_set && opt.stages != 2) {
                std::cerr << "choi: --filter requires --stages 2\n";
                return 2;
            }
            const double theta = to_radians(opt.theta, opt.unit);
            ebsim::KrausChannel chain = ebsim::identity_channel();
            if (opt.filter_set) {
                chain = ebsim::two_stage_channel(map_kind(opt.map), opt.damping, theta,
                                                 to_radians(opt.filter_phi, opt.unit), false,
                                                 ebsim::OpticsParams::ideal());
            } else {
                chain = ebsim::repeat(ebsim::elementary_map(map_kind(opt.map), opt.damping, theta,
                                                            false, ebsim::OpticsParams::ideal()),
                                      opt.stages);
            }
            const ebsim::DensityMatrix c = ebsim::choi(chain);
            std::string text = "row,col,re,im\n";
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    text += std::to_string(i) + "," + std::to_string(j) + "," +
                            ebsim::format_fixed(c.mat()(i, j).real(), opt.precision) + "," +
                            ebsim::format_fixed(c.mat()(i, j).imag(), opt.precision) + "\n";
                }
            emit(opt, text);
            const ebsim::EbVerdict verdict = ebsim::is_eb(chain, opt.eb_tol);
            std::cerr << "concurrence=" << verdict.choi_concurrence
                      << " negativity=" << verdict.negativity
                      << " is_eb=" << (verdict.is_eb ? 1 : 0) << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
