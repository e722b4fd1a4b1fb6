#include <complex>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "output.hpp"
#include "tcsim/diagnostics.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/lindblad.hpp"
#include "tcsim/model.hpp"
#include "tcsim/observables.hpp"
#include "tcsim/semiclassical.hpp"
#include "tcsim/version.hpp"

namespace {

using tcsim::cli::Table;

std::optional<double> cell(double v) { return v; }

// Route library warnings into the table metadata (and stderr) for the
// duration of one command.
struct WarningCapture {
    explicit WarningCapture(Table& table)
        : table_(table), previous_(tcsim::set_warning_handler([this](const std::string& msg) {
              table_.warnings.push_back(msg);
              std::cerr << "warning: " << msg << "\n";
          })) {}
    ~WarningCapture() { tcsim::set_warning_handler(previous_); }
    Table& table_;
    tcsim::WarningHandler previous_;
};

struct ScanArgs {
    int n_ions = 8;
    double omega = 1.0;
    double x_min = 0.0;
    double x_max = 0.9;
    double x_step = 0.1;
    double track_step = 0.02;
    int n_max = 80;
    std::string out;
    std::string format = "csv";
};

int run_scan(const ScanArgs& a) {
    std::vector<double> grid;
    const int count = static_cast<int>(std::floor((a.x_max - a.x_min) / a.x_step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(a.x_min + i * a.x_step);

    Table table;
    table.config["n_ions"] = a.n_ions;
    table.config["omega"] = a.omega;
    table.config["x_min"] = a.x_min;
    table.config["x_max"] = a.x_max;
    table.config["x_step"] = a.x_step;
    table.config["track_step"] = a.track_step;
    table.config["n_max"] = a.n_max;
    table.config["format"] = a.format;
    table.config["time_convention"] = "physical, hbar = 1";
    WarningCapture capture(table);

    const tcsim::ScanResult res =
        tcsim::scan_phase_transition(a.n_ions, a.omega, grid, a.n_max, a.track_step);
    table.failure_x = res.failure_x;
    table.columns = {"x",      "jx_num", "jy_num",   "jz_num",     "jx_an",   "jy_an",
                     "jz_an",  "var_min", "r_ansatz", "residual", "eigenvalue", "overlap"};
    for (const auto& r : res.rows) {
        table.rows.push_back({cell(r.x), r.jx_num, r.jy_num, r.jz_num, cell(r.jx_an),
                              cell(r.jy_an), cell(r.jz_an), r.var_min, r.r_ansatz,
                              r.residual, r.eigenvalue, r.overlap});
    }
    tcsim::cli::write_table(table, "scan", a.format, a.out);
    if (res.failure_x) {
        std::cerr << "continuation failed at x = " << *res.failure_x
                  << "; numeric columns are empty from there on\n";
        return 2;
    }
    return 0;
}

struct SemiclassicalArgs {
    double chi = 0.0;
    int n_ions = 2;
    double x0 = 0.0, y0 = 0.0, jx0 = 0.0, jy0 = 0.0;
    double jz0 = 0.0;
    bool jz0_given = false;
    bool start_at_fixed_point = false;
    bool spin_frozen = false;
    double t_end = 10.0;
    double dt = 1e-3;
    double gamma = 0.0;
    int n_traj = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
};

int run_semiclassical(const SemiclassicalArgs& a) {
    tcsim::PhasePoint p0{a.x0, a.y0, a.jx0, a.jy0,
                         a.jz0_given ? a.jz0 : -0.5 * a.n_ions};
    if (a.start_at_fixed_point) p0 = tcsim::fixed_point(a.chi, a.n_ions);

    tcsim::SweepConfig cfg;
    cfg.chi = a.chi;
    cfg.n_ions_equiv = a.n_ions;
    cfg.t_end = a.t_end;
    cfg.dt = a.dt;
    cfg.gamma = a.gamma;
    cfg.n_traj = a.n_traj;
    cfg.seed = a.seed;
    cfg.spin_frozen = a.spin_frozen;

    const bool stochastic = a.gamma > 0.0 || a.n_traj > 1;

    Table table;
    table.config["chi"] = a.chi;
    table.config["n_ions"] = a.n_ions;
    table.config["x0"] = p0.x;
    table.config["y0"] = p0.y;
    table.config["jx0"] = p0.jx;
    table.config["jy0"] = p0.jy;
    table.config["jz0"] = p0.jz;
    table.config["fixed_point_start"] = a.start_at_fixed_point;
    table.config["spin_frozen"] = a.spin_frozen;
    table.config["t_end"] = a.t_end;
    table.config["dt"] = a.dt;
    table.config["gamma"] = a.gamma;
    table.config["n_traj"] = a.n_traj;
    table.config["seed"] = a.seed;
    table.config["mode"] = stochastic ? "sde" : "deterministic";
    table.config["format"] = a.format;
    table.config["time_convention"] = "scaled, unit 1/(sqrt2 Omega)";
    WarningCapture capture(table);

    if (stochastic) {
        const tcsim::EnsembleMoments m = tcsim::sde_integrate(p0, cfg);
        table.columns = {"t", "mean_X", "mean_Y", "var_X", "var_Y", "stderr_X", "stderr_Y"};
        for (std::size_t i = 0; i < m.t.size(); ++i) {
            table.rows.push_back({cell(m.t[i]), cell(m.mean_x[i]), cell(m.mean_y[i]),
                                  cell(m.var_x[i]), cell(m.var_y[i]), cell(m.stderr_x[i]),
                                  cell(m.stderr_y[i])});
        }
    } else {
        const tcsim::Trajectory traj = tcsim::integrate(p0, cfg);
        table.columns = {"t", "X", "Y", "jx", "jy", "jz", "energy", "spin_norm2"};
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            const tcsim::PhasePoint& p = traj.points[i];
            table.rows.push_back({cell(traj.t[i]), cell(p.x), cell(p.y), cell(p.jx),
                                  cell(p.jy), cell(p.jz), cell(tcsim::energy(p, a.chi)),
                                  cell(tcsim::spin_norm2(p))});
        }
    }
    tcsim::cli::write_table(table, "semiclassical", a.format, a.out);
    return 0;
}

struct HeatArgs {
    int n_ions = 1;
    double omega = 1.0;
    double drive = 0.0;
    double gamma = 0.0;
    int n_max = 20;
    double t_end = 1.0;
    double dt = 0.0;
    long sample_stride = 0;
    std::string out;
    std::string format = "csv";
};

int run_heat(const HeatArgs& a) {
    const tcsim::ProductSpace space{a.n_ions + 1, a.n_max + 1};
    const tcsim::HeatingParams params{a.omega, a.drive, a.gamma};
    const tcsim::DensityOp w0 =
        tcsim::DensityOp::pure(tcsim::ground_product_state(space), space);

    tcsim::MasterOptions options;
    options.t_end = a.t_end;
    options.dt = a.dt;
    options.sample_stride = a.sample_stride;
    const double dt_resolved = a.dt > 0.0 ? a.dt : tcsim::default_master_dt(params);

    Table table;
    table.config["n_ions"] = a.n_ions;
    table.config["omega"] = a.omega;
    table.config["drive"] = a.drive;
    table.config["gamma"] = a.gamma;
    table.config["n_max"] = a.n_max;
    table.config["t_end"] = a.t_end;
    table.config["dt"] = dt_resolved;
    table.config["initial_state"] = "ground product state";
    table.config["format"] = a.format;
    table.config["time_convention"] = "physical, hbar = 1";
    WarningCapture capture(table);

    const tcsim::MasterTrajectory traj = tcsim::evolve_master(w0, params, options);
    table.columns = {"t",     "n_mean", "re_a_mean", "im_a_mean",
                     "jz_mean", "trace",  "purity",    "min_eig"};
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        table.rows.push_back({cell(traj.t[i]), cell(traj.n_mean[i]),
                              cell(traj.a_mean[i].real()), cell(traj.a_mean[i].imag()),
                              cell(traj.jz_mean[i]), cell(traj.trace[i]),
                              cell(traj.purity[i]), cell(traj.min_eig[i])});
    }
    tcsim::cli::write_table(table, "heat", a.format, a.out);
    return 0;
}

struct SweepArgs {
    int n_ions = 4;
    double omega = 1.0;
    double x_final = 0.7;
    double ramp_time = 500.0;
    double t_end = 0.0;  // 0 means ramp_time
    double dt = 0.0;     // 0 means 0.02 / omega
    double sample_dt = 0.0;
    int n_max = 40;
    std::string out;
    std::string format = "csv";
};

int run_sweep(const SweepArgs& a) {
    const double t_end = a.t_end > 0.0 ? a.t_end : a.ramp_time;
    const double dt = a.dt > 0.0 ? a.dt : 0.02 / a.omega;
    const tcsim::RampDescriptor ramp{a.x_final, a.ramp_time};

    Table table;
    table.config["n_ions"] = a.n_ions;
    table.config["omega"] = a.omega;
    table.config["x_final"] = a.x_final;
    table.config["ramp_time"] = a.ramp_time;
    table.config["t_end"] = t_end;
    table.config["dt"] = dt;
    table.config["sample_dt"] = a.sample_dt;
    table.config["n_max"] = a.n_max;
    table.config["initial_state"] = "ground product state";
    table.config["format"] = a.format;
    table.config["time_convention"] = "physical, hbar = 1";
    WarningCapture capture(table);

    const tcsim::AdiabaticResult res = tcsim::adiabatic_sweep(
        a.n_ions, a.omega, ramp, t_end, dt, a.n_max, a.sample_dt);
    table.columns = {"t", "x", "fidelity", "energy", "var_min", "leak"};
    for (const auto& s : res.samples) {
        table.rows.push_back({cell(s.t), cell(s.x), cell(s.fidelity), cell(s.energy),
                              cell(s.var_min), cell(s.leak)});
    }
    tcsim::cli::write_table(table, "sweep", a.format, a.out);
    return 0;
}

void add_format_option(CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    // Belt and braces for reproducibility: keep BLAS/OpenMP single-threaded
    // unless the user overrides the environment explicitly.
    setenv("OPENBLAS_NUM_THREADS", "1", 0);
    setenv("OMP_NUM_THREADS", "1", 0);

    CLI::App app{"driven Tavis-Cummings ion-chain simulator"};
    app.set_version_flag("--version", std::string("tcsim ") + tcsim::kVersion);
    app.require_subcommand(1);

    ScanArgs scan;
    CLI::App* scan_cmd = app.add_subcommand("scan", "phase-transition scan over the drive");
    scan_cmd->add_option("--n-ions", scan.n_ions, "ion count N")->capture_default_str();
    scan_cmd->add_option("--omega", scan.omega, "coupling Omega")->capture_default_str();
    scan_cmd->add_option("--x-min", scan.x_min, "first scaled drive")->capture_default_str();
    scan_cmd->add_option("--x-max", scan.x_max, "last scaled drive")->capture_default_str();
    scan_cmd->add_option("--x-step", scan.x_step, "grid spacing")->capture_default_str();
    scan_cmd->add_option("--track-step", scan.track_step, "max continuation step in x")
        ->capture_default_str();
    scan_cmd->add_option("--n-max", scan.n_max, "Fock cutoff")->capture_default_str();
    scan_cmd->add_option("--out", scan.out, "output path")->required();
    add_format_option(scan_cmd, scan.format);

    SemiclassicalArgs sc;
    CLI::App* sc_cmd =
        app.add_subcommand("semiclassical", "mean-field trajectories and SDE ensembles");
    sc_cmd->add_option("--chi", sc.chi, "scaled drive chi = E/Omega")->capture_default_str();
    sc_cmd->add_option("--n-ions", sc.n_ions, "ion count N")->capture_default_str();
    sc_cmd->add_option("--x0", sc.x0, "initial X")->capture_default_str();
    sc_cmd->add_option("--y0", sc.y0, "initial Y")->capture_default_str();
    sc_cmd->add_option("--jx0", sc.jx0, "initial Jx")->capture_default_str();
    sc_cmd->add_option("--jy0", sc.jy0, "initial Jy")->capture_default_str();
    CLI::Option* jz0_opt =
        sc_cmd->add_option("--jz0", sc.jz0, "initial Jz (default -N/2)");
    sc_cmd->add_flag("--fixed-point", sc.start_at_fixed_point,
                     "start from the stationary point of the flow");
    sc_cmd->add_flag("--spin-frozen", sc.spin_frozen,
                     "hold the spin at its initial value (diffusion validation)");
    sc_cmd->add_option("--t-end", sc.t_end, "integration horizon")->capture_default_str();
    sc_cmd->add_option("--dt", sc.dt, "output spacing / SDE step")->capture_default_str();
    sc_cmd->add_option("--gamma", sc.gamma, "heating rate")->capture_default_str();
    sc_cmd->add_option("--n-traj", sc.n_traj, "SDE ensemble size")->capture_default_str();
    sc_cmd->add_option("--seed", sc.seed, "SDE ensemble seed")->capture_default_str();
    sc_cmd->add_option("--out", sc.out, "output path")->required();
    add_format_option(sc_cmd, sc.format);

    HeatArgs heat;
    CLI::App* heat_cmd = app.add_subcommand("heat", "master-equation heating run");
    heat_cmd->add_option("--n-ions", heat.n_ions, "ion count N")->capture_default_str();
    heat_cmd->add_option("--omega", heat.omega, "coupling Omega")->capture_default_str();
    heat_cmd->add_option("--drive", heat.drive, "drive E")->capture_default_str();
    heat_cmd->add_option("--gamma", heat.gamma, "heating rate")->capture_default_str();
    heat_cmd->add_option("--n-max", heat.n_max, "Fock cutoff")->capture_default_str();
    heat_cmd->add_option("--t-end", heat.t_end, "integration horizon")->capture_default_str();
    heat_cmd->add_option("--dt", heat.dt, "step (0 = auto)")->capture_default_str();
    heat_cmd->add_option("--sample-stride", heat.sample_stride, "record every k-th step")
        ->capture_default_str();
    heat_cmd->add_option("--out", heat.out, "output path")->required();
    add_format_option(heat_cmd, heat.format);

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "adiabatic drive ramp");
    sweep_cmd->add_option("--n-ions", sweep.n_ions, "ion count N")->capture_default_str();
    sweep_cmd->add_option("--omega", sweep.omega, "coupling Omega")->capture_default_str();
    sweep_cmd->add_option("--x-final", sweep.x_final, "ramp target in x")
        ->capture_default_str();
    sweep_cmd->add_option("--ramp-time", sweep.ramp_time, "linear ramp duration")
        ->capture_default_str();
    sweep_cmd->add_option("--t-end", sweep.t_end, "horizon (0 = ramp_time)")
        ->capture_default_str();
    sweep_cmd->add_option("--dt", sweep.dt, "step (0 = 0.02/omega)")->capture_default_str();
    sweep_cmd->add_option("--sample-dt", sweep.sample_dt, "sample spacing (0 = auto)")
        ->capture_default_str();
    sweep_cmd->add_option("--n-max", sweep.n_max, "Fock cutoff")->capture_default_str();
    sweep_cmd->add_option("--out", sweep.out, "output path")->required();
    add_format_option(sweep_cmd, sweep.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    sc.jz0_given = jz0_opt->count() > 0;

    try {
        if (scan_cmd->parsed()) return run_scan(scan);
        if (sc_cmd->parsed()) return run_semiclassical(sc);
        if (heat_cmd->parsed()) return run_heat(heat);
        if (sweep_cmd->parsed()) return run_sweep(sweep);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const tcsim::TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "required n_max estimate: " << e.n_max_required << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
