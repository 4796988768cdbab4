#include "magnetworks/run.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "magnetworks/diffusion.hpp"
#include "magnetworks/error.hpp"
#include "magnetworks/field_io.hpp"
#include "magnetworks/pipeline1d.hpp"
#include "magnetworks/transport.hpp"

namespace magnetworks {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double interval_of(const Scenario& s) {
    return s.n_steps > 0 ? (s.t_end - s.t_start) / s.n_steps : 0.0;
}

std::string velocity_name(const VelocitySpec& v) {
    if (std::holds_alternative<ZeroVelocity>(v)) return "zero";
    if (const auto* c = std::get_if<ConstantVelocity>(&v))
        return "constant (" + format_number(c->vx) + ", " + format_number(c->vy) + ")";
    if (std::holds_alternative<LinearRadialVelocity>(v)) return "linear_radial";
    return "grid_sampled";
}

std::string mobility_name(const MobilityModel& m) {
    if (std::holds_alternative<StaticMobility>(m)) return "static";
    if (const auto* d = std::get_if<DeterministicMobility>(&m))
        return "deterministic, velocity " + velocity_name(d->velocity);
    const auto& b = std::get<BrownianMobility>(m);
    return "brownian, sigma_plus " + format_number(b.sigma_plus) + ", sigma_minus " +
           format_number(b.sigma_minus) + ", drift_plus " + velocity_name(b.drift_plus) + ", drift_minus " +
           velocity_name(b.drift_minus);
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    body(os);
    if (!os) throw IoError("write failed for " + path.string());
}

std::string snapshot_prefix(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%04d_", index);
    return buf;
}

void dump_snapshot(const std::filesystem::path& dir, const SnapshotData& d) {
    const std::string p = snapshot_prefix(d.index);
    const auto scalar = [&](const std::string& name, const ScalarField& f) {
        write_file(dir / (p + name + ".csv"), [&](std::ostream& os) { write_csv(os, f); });
    };
    scalar("rho", d.solve.rho);
    scalar("rho_plus", d.rho_plus);
    scalar("rho_minus", d.rho_minus);
    scalar("phi", d.solve.phi);
    scalar("eta", d.solve.eta);
    write_file(dir / (p + "T_u.csv"), [&](std::ostream& os) { write_csv(os, d.solve.T, FaceAxis::X); });
    if (d.solve.T.grid().dim == 2)
        write_file(dir / (p + "T_v.csv"), [&](std::ostream& os) { write_csv(os, d.solve.T, FaceAxis::Y); });
}

}  // namespace

Scenario resolve_scenario(const RunConfig& config) {
    Scenario s = load_scenario(config.scenario);
    if (config.nx) {
        const double lx = s.grid.lx();
        if (*config.nx < 2) throw ValidationError("--nx: must be >= 2");
        s.grid.nx = *config.nx;
        s.grid.dx = lx / *config.nx;
    }
    if (config.tol) s.poisson_tol = *config.tol;
    if (config.stride) s.stride = *config.stride;
    s.validate();
    return s;
}

std::filesystem::path resolve_output_dir(const RunConfig& config, const Scenario& s) {
    if (config.out_dir) return *config.out_dir;
    if (!s.output_dir.empty()) return s.output_dir;
    if (const char* env = std::getenv("MAGNETWORKS_OUT"); env && *env) return env;
    return "magnetworks_out";
}

std::vector<double> snapshot_times(const Scenario& s) {
    std::vector<double> times;
    const double interval = interval_of(s);
    for (int k = 0; k <= s.n_steps; ++k) times.push_back(k == s.n_steps && k > 0 ? s.t_end : s.t_start + k * interval);
    return times;
}

StepPlan plan_steps(const Scenario& s) {
    const double interval = interval_of(s);
    StepPlan plan{interval, 0, 0.0};
    if (s.is_static() || interval <= 0.0) return plan;
    if (const auto* d = std::get_if<DeterministicMobility>(&s.mobility)) {
        plan.dt_limit = cfl_dt(d->velocity, s.grid, s.cfl, interval) / s.grid.dim;
    } else {
        const auto& b = std::get<BrownianMobility>(s.mobility);
        DiffusionParams params{b.sigma_plus, b.sigma_minus, b.drift_plus, b.drift_minus, 0.0};
        const double limit = std::min(stable_dt(params, Sign::Plus, s.grid), stable_dt(params, Sign::Minus, s.grid));
        plan.dt_limit = std::isinf(limit) ? interval : std::min(interval, s.cfl * limit);
    }
    plan.substeps = std::max(1L, static_cast<long>(std::ceil(interval / plan.dt_limit - 1e-9)));
    plan.dt = interval / static_cast<double>(plan.substeps);
    return plan;
}

RunSummary simulate(const Scenario& s, const std::function<void(const SnapshotData&)>& on_snapshot) {
    s.validate();
    const std::vector<double> times = snapshot_times(s);
    const StepPlan plan = plan_steps(s);

    ScalarField plus = sample_density_part(s.density, s.grid, Sign::Plus);
    ScalarField minus = sample_density_part(s.density, s.grid, Sign::Minus);

    // Per-sign one-step evolution operators.
    std::function<ScalarField(const ScalarField&)> step_plus, step_minus;
    if (const auto* d = std::get_if<DeterministicMobility>(&s.mobility)) {
        const VectorField vel = sample_velocity(d->velocity, s.grid);
        const auto step = [vel, dt = plan.dt](const ScalarField& rho) {
            return step_upwind(rho, vel, dt);
        };
        step_plus = step;
        step_minus = step;
    } else if (const auto* b = std::get_if<BrownianMobility>(&s.mobility)) {
        const auto make = [&](double sigma, const VelocitySpec& drift) -> std::function<ScalarField(const ScalarField&)> {
            if (sigma == 0.0 && is_zero(drift)) return {};
            return [sigma, vel = sample_velocity(drift, s.grid), dt = plan.dt](const ScalarField& p) {
                return step_fokker_planck(p, sigma, vel, dt);
            };
        };
        step_plus = make(b->sigma_plus, b->drift_plus);
        step_minus = make(b->sigma_minus, b->drift_minus);
    }

    RunSummary summary;
    std::vector<std::pair<double, double>> points;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0) {
            for (long n = 0; n < plan.substeps; ++n) {
                if (step_plus) plus = step_plus(plus);
                if (step_minus) minus = step_minus(minus);
            }
        }
        const BalanceResult balanced = balance_with_factor(plus - minus, s.balance_tol);
        SnapshotData data{static_cast<int>(k),
                          s.grid.dim == 1 ? solve_snapshot_1d(times[k], balanced.rho, s.alpha)
                                          : solve_snapshot(times[k], balanced.rho, s.alpha, s.poisson_tol, s.max_iter),
                          plus,
                          minus,
                          balanced.sink_factor,
                          balanced.imbalance_before};
        data.capacity_violation =
            capacity_check(data.solve.T, relay_density(data.solve.T, 2.0), s.capacity_k).max_violation;

        summary.times.push_back(times[k]);
        summary.node_counts.push_back(data.solve.node_count);
        points.emplace_back(times[k], data.solve.node_count);
        on_snapshot(data);
        if (!data.solve.converged) {
            std::ostringstream msg;
            msg << "poisson solve did not converge at t = " << format_number(times[k]) << " (residual "
                << format_number(data.solve.residual_norm) << " after " << data.solve.iterations << " iterations)";
            throw SolverError(msg.str());
        }
    }
    summary.time_integrated_count = points.size() >= 2 ? time_integrated_count(points) : 0.0;
    return summary;
}

RunResult run(const RunConfig& config, std::ostream& log) {
    RunResult result;
    Scenario s;
    try {
        s = resolve_scenario(config);
    } catch (const std::exception& e) {
        result.exit_code = kExitConfig;
        result.message = e.what();
        log << "error: " << e.what() << "\n";
        return result;
    }

    const std::filesystem::path dir = resolve_output_dir(config, s);
    std::ofstream summary_csv;
    std::ostringstream meta_rows;
    try {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
        std::filesystem::remove(dir / "FAILED", ec);
        summary_csv.open(dir / "summary.csv", std::ios::binary);
        if (!summary_csv) throw IoError("cannot write " + (dir / "summary.csv").string());
        summary_csv << "t,node_count,div_residual,curl_max,flux_residual,iterations\n";

        result.summary = simulate(s, [&](const SnapshotData& d) {
            const SolveSnapshot& snap = d.solve;
            summary_csv << format_number(snap.t) << ',' << format_number(snap.node_count) << ','
                        << format_number(snap.div_residual) << ',' << format_number(snap.curl_max) << ','
                        << format_number(snap.flux_residual) << ',' << snap.iterations << '\n';
            summary_csv.flush();
            if (!summary_csv) throw IoError("write failed for summary.csv");
            meta_rows << "# snapshot " << d.index << ": t = " << format_number(snap.t)
                      << ", sink_factor = " << format_number(d.sink_factor)
                      << ", imbalance_before = " << format_number(d.imbalance)
                      << ", residual_norm = " << format_number(snap.residual_norm)
                      << ", capacity_violation = " << format_number(d.capacity_violation) << "\n";
            if (d.index % s.stride == 0) dump_snapshot(dir, d);
            if (config.verbosity > 0)
                log << "t = " << format_number(snap.t) << "  N = " << format_number(snap.node_count) << "\n";
        });
    } catch (const IoError& e) {
        result.exit_code = kExitIo;
        result.message = e.what();
    } catch (const SolverError& e) {
        result.exit_code = kExitSolver;
        result.message = e.what();
    } catch (const ContractError& e) {
        result.exit_code = kExitSolver;
        result.message = e.what();
    }
    summary_csv.close();

    if (result.exit_code == kExitIo) {
        log << "error: " << result.message << "\n";
        return result;
    }
    try {
        write_file(dir / "run.meta", [&](std::ostream& os) {
            os << "# magnetworks run metadata\n";
            os << "# status = " << (result.exit_code == kExitOk ? "ok" : "failed") << "\n";
            if (result.exit_code != kExitOk) os << "# failure = " << result.message << "\n";
            os << "# domain = [" << format_number(s.grid.x0) << ", " << format_number(s.grid.x0 + s.grid.lx()) << "]";
            if (s.grid.dim == 2)
                os << " x [" << format_number(s.grid.y0) << ", " << format_number(s.grid.y0 + s.grid.ly()) << "]";
            os << "\n";
            os << "# snapshots = " << result.summary.times.size() << "\n";
            os << "# time_integrated_count = " << format_number(result.summary.time_integrated_count) << "\n";
            os << meta_rows.str();
            os << to_text(s);
        });
        if (result.exit_code != kExitOk)
            write_file(dir / "FAILED", [&](std::ostream& os) { os << result.message << "\n"; });
    } catch (const IoError& e) {
        result.exit_code = kExitIo;
        result.message = e.what();
    }
    if (result.exit_code != kExitOk) log << "error: " << result.message << "\n";
    return result;
}

int describe(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Scenario s;
    try {
        s = resolve_scenario(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const StepPlan plan = plan_steps(s);
    const GridSpec& g = s.grid;
    out << "scenario: " << config.scenario.string() << "\n";
    out << "grid: dim " << g.dim << ", nx " << g.nx;
    if (g.dim == 2) out << ", ny " << g.ny;
    out << ", dx " << format_number(g.dx);
    if (g.dim == 2) out << ", dy " << format_number(g.dy);
    out << "\n";
    out << "domain: [" << format_number(g.x0) << ", " << format_number(g.x0 + g.lx()) << "]";
    if (g.dim == 2) out << " x [" << format_number(g.y0) << ", " << format_number(g.y0 + g.ly()) << "]";
    out << "\n";
    out << "cells: " << g.cells() << "\n";
    out << "density terms: " << s.density.terms.size() << "\n";
    out << "mobility: " << mobility_name(s.mobility) << "\n";
    out << "alpha: " << format_number(s.alpha) << "\n";
    out << "window: [" << format_number(s.t_start) << ", " << format_number(s.t_end) << "]\n";
    out << "n_steps: " << s.n_steps << "\n";
    out << "snapshots: " << snapshot_times(s).size() << " (dumped every " << s.stride << ")\n";
    if (const auto* d = std::get_if<DeterministicMobility>(&s.mobility))
        out << "cfl_dt: " << format_number(cfl_dt(d->velocity, g, s.cfl, interval_of(s))) << "\n";
    out << "evolution dt: " << format_number(plan.dt) << " (" << plan.substeps << " substeps per interval, "
        << plan.substeps * s.n_steps << " total)\n";
    out << "solver: " << (g.dim == 1 ? "cumulative integration" : "conjugate gradient") << ", poisson_tol "
        << format_number(s.poisson_tol) << ", balance_tol " << format_number(s.balance_tol) << "\n";
    // rho+, rho-, rho, phi, eta, CG work vectors and two face fields.
    const double bytes = 8.0 * (10.0 * g.cells() + 2.0 * (g.x_faces() + g.y_faces()));
    out << "estimated memory: " << static_cast<long long>(bytes) << " bytes\n";
    return kExitOk;
}

}  // namespace magnetworks
