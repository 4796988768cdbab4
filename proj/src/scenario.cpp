#include "magnetworks/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "magnetworks/error.hpp"
#include "magnetworks/field_io.hpp"

namespace magnetworks {

// ---------------------------------------------------------------- densities

void DensitySpec::validate() const {
    if (terms.empty() && !unbalanced_ok) throw ValidationError("density: missing");
    bool has_source = false, has_sink = false;
    for (const auto& term : terms) {
        if (const auto* g = std::get_if<GaussianBlob>(&term)) {
            if (!(g->width > 0.0) || !std::isfinite(g->width))
                throw ValidationError("density: gaussian width must be > 0");
            if (!std::isfinite(g->weight) || !std::isfinite(g->cx) || !std::isfinite(g->cy))
                throw ValidationError("density: gaussian parameters must be finite");
        } else {
            const auto& p = std::get<UniformPatch>(term);
            if (!std::isfinite(p.level)) throw ValidationError("density: uniform level must be finite");
            if (!(p.x_min < p.x_max) || !(p.y_min < p.y_max))
                throw ValidationError("density: uniform patch extent must be non-empty");
        }
        const double w = term_sign_weight(term);
        has_source |= w > 0.0;
        has_sink |= w < 0.0;
    }
    if (!unbalanced_ok && !(has_source && has_sink))
        throw ValidationError(
            "density: needs at least one source (positive) and one destination (negative) term");
}

double term_sign_weight(const DensityTerm& term) {
    if (const auto* g = std::get_if<GaussianBlob>(&term)) return g->weight;
    return std::get<UniformPatch>(term).level;
}

double evaluate(const DensityTerm& term, int dim, double x, double y) {
    if (const auto* g = std::get_if<GaussianBlob>(&term)) {
        double amplitude = g->weight;
        double r2 = (x - g->cx) * (x - g->cx);
        if (g->normalized) amplitude *= normalization_constant(g->cx, g->width, g->origin_x);
        if (dim == 2) {
            r2 += (y - g->cy) * (y - g->cy);
            if (g->normalized) amplitude *= normalization_constant(g->cy, g->width, g->origin_y);
        }
        return amplitude * std::exp(-r2 / (g->width * g->width));
    }
    const auto& p = std::get<UniformPatch>(term);
    const bool inside_x = p.x_min <= x && x < p.x_max;
    const bool inside_y = dim == 1 || (p.y_min <= y && y < p.y_max);
    return inside_x && inside_y ? p.level : 0.0;
}

double evaluate(const DensitySpec& spec, int dim, double x, double y) {
    double sum = 0.0;
    for (const auto& term : spec.terms) sum += evaluate(term, dim, x, y);
    return sum;
}

ScalarField sample_density(const DensitySpec& spec, const GridSpec& grid) {
    return ScalarField::sample(grid, [&](double x, double y) { return evaluate(spec, grid.dim, x, y); });
}

ScalarField sample_density_part(const DensitySpec& spec, const GridSpec& grid, Sign sign) {
    return ScalarField::sample(grid, [&](double x, double y) {
        double sum = 0.0;
        for (const auto& term : spec.terms) {
            const double w = term_sign_weight(term);
            if ((sign == Sign::Plus && w > 0.0) || (sign == Sign::Minus && w < 0.0))
                sum += evaluate(term, grid.dim, x, y);
        }
        return std::abs(sum);
    });
}

double erfc(double x) { return std::erfc(x); }

double normalization_constant(double center, double width, double origin) {
    return 2.0 / (width * std::sqrt(std::numbers::pi) * erfc((origin - center) / width));
}

BalanceResult balance_with_factor(const ScalarField& rho, double tol) {
    double positive = 0.0, negative = 0.0;
    for (double x : rho.values()) (x > 0.0 ? positive : negative) += std::abs(x);
    const double total = positive + negative;
    const double ratio = total > 0.0 ? std::abs(positive - negative) / total : 0.0;
    if (ratio <= tol) return {rho, 1.0, ratio};
    if (negative == 0.0) throw SolverError("balance: destination part is identically zero");
    if (positive == 0.0) throw SolverError("balance: source part is identically zero");

    const double factor = positive / negative;
    std::vector<double> out(rho.values().begin(), rho.values().end());
    for (double& x : out)
        if (x < 0.0) x *= factor;
    return {ScalarField(rho.grid(), std::move(out)), factor, ratio};
}

ScalarField balance(const ScalarField& rho, double tol) { return balance_with_factor(rho, tol).rho; }

// ---------------------------------------------------------------- velocity

VectorField sample_velocity(const VelocitySpec& v, const GridSpec& grid) {
    if (std::holds_alternative<ZeroVelocity>(v)) return VectorField::zeros(grid);
    if (const auto* c = std::get_if<ConstantVelocity>(&v))
        return VectorField::sample(grid, [&](double, double) { return c->vx; },
                                   [&](double, double) { return c->vy; });
    if (std::holds_alternative<LinearRadialVelocity>(v))
        return VectorField::sample(grid, [](double x, double) { return x; },
                                   [](double, double y) { return y; });
    const auto& sampled = std::get<GridSampledVelocity>(v).field;
    if (!(sampled.grid() == grid)) throw ValidationError("mobility: sampled velocity grid differs from scenario grid");
    return sampled;
}

bool is_zero(const VelocitySpec& v) {
    if (std::holds_alternative<ZeroVelocity>(v)) return true;
    if (const auto* c = std::get_if<ConstantVelocity>(&v)) return c->vx == 0.0 && c->vy == 0.0;
    if (const auto* s = std::get_if<GridSampledVelocity>(&v)) return s->field.max_abs() == 0.0;
    return false;
}

// ---------------------------------------------------------------- scenario

namespace {

void check_velocity(const VelocitySpec& v, const GridSpec& grid, const std::string& key) {
    if (const auto* c = std::get_if<ConstantVelocity>(&v)) {
        if (!std::isfinite(c->vx) || !std::isfinite(c->vy))
            throw ValidationError("mobility." + key + ": components must be finite");
        if (grid.dim == 1 && c->vy != 0.0) throw ValidationError("mobility." + key + "_vy: not allowed in 1D");
    }
    if (const auto* s = std::get_if<GridSampledVelocity>(&v))
        if (!(s->field.grid() == grid))
            throw ValidationError("mobility." + key + ": sampled velocity grid differs from scenario grid");
}

void check_tolerance(double tol, const char* name) {
    if (!(tol > 0.0 && tol <= 1e-2)) throw ValidationError(std::string("solver.") + name + ": must lie in (0, 1e-2]");
}

}  // namespace

void Scenario::validate() const {
    density.validate();
    try {
        grid.validate();
    } catch (const ContractError& e) {
        throw ValidationError(e.what());
    }
    for (const auto& term : density.terms)
        if (const auto* g = std::get_if<GaussianBlob>(&term); g && grid.dim == 1 && g->cy != 0.0)
            throw ValidationError("density: cy not allowed in 1D");

    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("solver.alpha: must be > 0");
    check_tolerance(poisson_tol, "poisson_tol");
    check_tolerance(balance_tol, "balance_tol");
    if (max_iter < 0) throw ValidationError("solver.max_iter: must be >= 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("solver.cfl: must lie in (0, 1]");
    if (!(capacity_k > 0.0) || !std::isfinite(capacity_k)) throw ValidationError("solver.capacity_k: must be > 0");
    if (stride < 1) throw ValidationError("output.stride: must be >= 1");
    if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw ValidationError("solver.t_start/t_end: must be finite");
    if (n_steps < 0) throw ValidationError("solver.n_steps: must be >= 0");

    if (!is_static()) {
        if (!(t_end > t_start)) throw ValidationError("solver.t_end: must exceed t_start for a mobile scenario");
        if (n_steps < 1) throw ValidationError("solver.n_steps: must be >= 1 for a mobile scenario");
    } else if (n_steps > 0 && !(t_end > t_start)) {
        throw ValidationError("solver.t_end: must exceed t_start when n_steps > 0");
    }

    if (const auto* d = std::get_if<DeterministicMobility>(&mobility)) check_velocity(d->velocity, grid, "velocity");
    if (const auto* b = std::get_if<BrownianMobility>(&mobility)) {
        if (!(b->sigma_plus >= 0.0) || !std::isfinite(b->sigma_plus))
            throw ValidationError("mobility.sigma_plus: must be finite and >= 0");
        if (!(b->sigma_minus >= 0.0) || !std::isfinite(b->sigma_minus))
            throw ValidationError("mobility.sigma_minus: must be finite and >= 0");
        check_velocity(b->drift_plus, grid, "drift_plus");
        check_velocity(b->drift_minus, grid, "drift_minus");
    }
}

// ---------------------------------------------------------------- parsing

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool known_section(const std::string& name) {
    if (name == "grid" || name == "mobility" || name == "solver" || name == "output") return true;
    if (name.rfind("density.", 0) == 0) {
        const std::string idx = name.substr(8);
        return !idx.empty() && std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; });
    }
    return false;
}

std::vector<Section> tokenize(const std::string& text) {
    std::vector<Section> sections;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!known_section(name)) throw ParseError(line_no, "unknown section [" + name + "]");
            if (!seen.insert(name).second) throw ParseError(line_no, "duplicate section [" + name + "]");
            sections.push_back({name, line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        if (sections.empty()) throw ParseError(line_no, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");
        auto& entries = sections.back().entries;
        if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
        entries.emplace(key, Entry{value, line_no, false});
    }
    return sections;
}

// Typed accessors over one section; every read marks the key as used.
class Reader {
public:
    explicit Reader(Section* s) : s_(s) {}

    bool has(const std::string& key) const { return s_ && s_->entries.count(key); }

    std::optional<std::string> text(const std::string& key) {
        if (!has(key)) return std::nullopt;
        auto& e = s_->entries.at(key);
        e.used = true;
        return e.value;
    }

    std::optional<double> number(const std::string& key) {
        auto t = text(key);
        if (!t) return std::nullopt;
        errno = 0;
        char* end = nullptr;
        const double x = std::strtod(t->c_str(), &end);
        if (end != t->c_str() + t->size() || errno == ERANGE || !std::isfinite(x))
            throw ParseError(line(key), "'" + key + "' is not a finite number: " + *t);
        return x;
    }

    std::optional<int> integer(const std::string& key) {
        auto x = number(key);
        if (!x) return std::nullopt;
        if (*x != std::floor(*x) || std::abs(*x) > 1e9)
            throw ParseError(line(key), "'" + key + "' is not an integer");
        return static_cast<int>(*x);
    }

    std::optional<bool> boolean(const std::string& key) {
        auto t = text(key);
        if (!t) return std::nullopt;
        if (*t == "true") return true;
        if (*t == "false") return false;
        throw ParseError(line(key), "'" + key + "' must be true or false");
    }

    int line(const std::string& key) const { return s_->entries.at(key).line; }

    void reject_unused() const {
        if (!s_) return;
        for (const auto& [key, e] : s_->entries)
            if (!e.used) throw ParseError(e.line, "unknown key '" + key + "' in [" + s_->name + "]");
    }

private:
    Section* s_;
};

VelocitySpec read_velocity(Reader& r, const std::string& prefix, const GridSpec& grid,
                           const std::filesystem::path& base_dir) {
    const auto kind = r.text(prefix).value_or("zero");
    if (kind == "zero") return ZeroVelocity{};
    if (kind == "linear_radial") return LinearRadialVelocity{};
    if (kind == "constant") {
        return ConstantVelocity{r.number(prefix + "_vx").value_or(0.0), r.number(prefix + "_vy").value_or(0.0)};
    }
    if (kind == "grid_sampled") {
        const auto u_file = r.text(prefix + "_u_file");
        if (!u_file) throw ValidationError("mobility." + prefix + "_u_file: missing");
        auto read = [&](const std::string& file, FaceAxis axis) {
            std::ifstream is(base_dir / file);
            if (!is) throw ValidationError("mobility: cannot open velocity file " + file);
            return read_face_csv(is, grid, axis);
        };
        std::vector<double> u = read(*u_file, FaceAxis::X);
        std::vector<double> v;
        std::string v_name;
        if (grid.dim == 2) {
            const auto v_file = r.text(prefix + "_v_file");
            if (!v_file) throw ValidationError("mobility." + prefix + "_v_file: missing");
            v = read(*v_file, FaceAxis::Y);
            v_name = *v_file;
        }
        return GridSampledVelocity{VectorField(grid, std::move(u), std::move(v)), *u_file, v_name};
    }
    throw ParseError(r.line(prefix), "unknown velocity kind '" + kind + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    std::vector<Section> sections = tokenize(text);
    auto find = [&](const std::string& name) -> Section* {
        for (auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    };

    Scenario s;

    Reader solver(find("solver"));
    s.alpha = solver.number("alpha").value_or(2.0);
    s.t_start = solver.number("t_start").value_or(0.0);
    s.t_end = solver.number("t_end").value_or(s.t_start);
    s.poisson_tol = solver.number("poisson_tol").value_or(1e-8);
    s.balance_tol = solver.number("balance_tol").value_or(1e-9);
    s.max_iter = solver.integer("max_iter").value_or(0);
    s.cfl = solver.number("cfl").value_or(0.9);
    s.capacity_k = solver.number("capacity_k").value_or(1.0);
    s.density.unbalanced_ok = solver.boolean("unbalanced_ok").value_or(false);

    std::vector<std::pair<int, Section*>> density_sections;
    for (auto& sec : sections)
        if (sec.name.rfind("density.", 0) == 0) density_sections.emplace_back(std::stoi(sec.name.substr(8)), &sec);
    std::sort(density_sections.begin(), density_sections.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (density_sections.empty() && !s.density.unbalanced_ok) throw ValidationError("density: missing");

    Section* grid_section = find("grid");
    if (!grid_section) throw ValidationError("grid: missing");
    Reader grid(grid_section);
    s.grid.dim = grid.integer("dim").value_or(1);
    if (s.grid.dim != 1 && s.grid.dim != 2) throw ValidationError("grid.dim: must be 1 or 2");
    const auto nx = grid.integer("nx");
    const auto lx = grid.number("lx");
    if (!nx) throw ValidationError("grid.nx: missing");
    if (!lx) throw ValidationError("grid.lx: missing");
    s.grid.nx = *nx;
    s.grid.x0 = grid.number("x0").value_or(0.0);
    if (*nx <= 0) throw ValidationError("grid.nx: must be >= 2");
    s.grid.dx = *lx / *nx;
    if (s.grid.dim == 2) {
        const auto ny = grid.integer("ny");
        const auto ly = grid.number("ly");
        if (!ny) throw ValidationError("grid.ny: missing");
        if (!ly) throw ValidationError("grid.ly: missing");
        if (*ny <= 0) throw ValidationError("grid.ny: must be >= 2");
        s.grid.ny = *ny;
        s.grid.y0 = grid.number("y0").value_or(0.0);
        s.grid.dy = *ly / *ny;
    } else {
        for (const char* key : {"ny", "ly", "y0"})
            if (grid.has(key)) throw ValidationError(std::string("grid.") + key + ": not allowed in 1D");
    }
    try {
        s.grid.validate();
    } catch (const ContractError& e) {
        throw ValidationError(e.what());
    }

    for (auto& [index, sec] : density_sections) {
        Reader d(sec);
        const auto kind = d.text("kind");
        if (!kind) throw ValidationError(sec->name + ".kind: missing");
        if (*kind == "gaussian") {
            GaussianBlob g;
            g.weight = d.number("weight").value_or(1.0);
            const auto cx = d.number("cx");
            if (!cx) throw ValidationError(sec->name + ".cx: missing");
            g.cx = *cx;
            g.cy = d.number("cy").value_or(0.0);
            g.width = d.number("width").value_or(1.0);
            g.normalized = d.boolean("normalized").value_or(false);
            g.origin_x = s.grid.x0;
            g.origin_y = s.grid.dim == 2 ? s.grid.y0 : 0.0;
            s.density.terms.emplace_back(g);
        } else if (*kind == "uniform") {
            UniformPatch p;
            const auto level = d.number("level");
            if (!level) throw ValidationError(sec->name + ".level: missing");
            p.level = *level;
            p.x_min = d.number("x_min").value_or(p.x_min);
            p.x_max = d.number("x_max").value_or(p.x_max);
            p.y_min = d.number("y_min").value_or(p.y_min);
            p.y_max = d.number("y_max").value_or(p.y_max);
            s.density.terms.emplace_back(p);
        } else {
            throw ParseError(d.line("kind"), "unknown density kind '" + *kind + "'");
        }
        d.reject_unused();
    }

    Reader mobility(find("mobility"));
    const auto model = mobility.text("model").value_or("static");
    if (model == "static") {
        s.mobility = StaticMobility{};
    } else if (model == "deterministic") {
        s.mobility = DeterministicMobility{read_velocity(mobility, "velocity", s.grid, base_dir)};
    } else if (model == "brownian") {
        BrownianMobility b;
        b.sigma_plus = mobility.number("sigma_plus").value_or(0.0);
        b.sigma_minus = mobility.number("sigma_minus").value_or(0.0);
        b.drift_plus = read_velocity(mobility, "drift_plus", s.grid, base_dir);
        b.drift_minus = read_velocity(mobility, "drift_minus", s.grid, base_dir);
        s.mobility = std::move(b);
    } else {
        throw ParseError(mobility.line("model"), "unknown mobility model '" + model + "'");
    }
    s.n_steps = solver.integer("n_steps").value_or(s.is_static() ? 0 : 1);

    Reader output(find("output"));
    s.output_dir = output.text("dir").value_or("");
    s.stride = output.integer("stride").value_or(1);

    grid.reject_unused();
    mobility.reject_unused();
    solver.reject_unused();
    output.reject_unused();

    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot read scenario file " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_scenario(buf.str(), path.parent_path());
}

// ---------------------------------------------------------------- rendering

namespace {

void write_velocity(std::ostream& os, const VelocitySpec& v, const std::string& prefix) {
    if (std::holds_alternative<ZeroVelocity>(v)) {
        os << prefix << " = zero\n";
    } else if (const auto* c = std::get_if<ConstantVelocity>(&v)) {
        os << prefix << " = constant\n";
        os << prefix << "_vx = " << format_number(c->vx) << "\n";
        os << prefix << "_vy = " << format_number(c->vy) << "\n";
    } else if (std::holds_alternative<LinearRadialVelocity>(v)) {
        os << prefix << " = linear_radial\n";
    } else {
        const auto& g = std::get<GridSampledVelocity>(v);
        os << prefix << " = grid_sampled\n";
        os << prefix << "_u_file = " << g.u_file << "\n";
        if (!g.v_file.empty()) os << prefix << "_v_file = " << g.v_file << "\n";
    }
}

}  // namespace

std::string to_text(const Scenario& s) {
    std::ostringstream os;
    const auto num = [](double x) { return format_number(x); };
    os << "[grid]\n";
    os << "dim = " << s.grid.dim << "\n";
    os << "nx = " << s.grid.nx << "\n";
    os << "x0 = " << num(s.grid.x0) << "\n";
    os << "lx = " << num(s.grid.lx()) << "\n";
    if (s.grid.dim == 2) {
        os << "ny = " << s.grid.ny << "\n";
        os << "y0 = " << num(s.grid.y0) << "\n";
        os << "ly = " << num(s.grid.ly()) << "\n";
    }
    int index = 1;
    for (const auto& term : s.density.terms) {
        os << "\n[density." << index++ << "]\n";
        if (const auto* g = std::get_if<GaussianBlob>(&term)) {
            os << "kind = gaussian\n";
            os << "weight = " << num(g->weight) << "\n";
            os << "cx = " << num(g->cx) << "\n";
            if (s.grid.dim == 2) os << "cy = " << num(g->cy) << "\n";
            os << "width = " << num(g->width) << "\n";
            os << "normalized = " << (g->normalized ? "true" : "false") << "\n";
        } else {
            const auto& p = std::get<UniformPatch>(term);
            os << "kind = uniform\n";
            os << "level = " << num(p.level) << "\n";
            if (std::isfinite(p.x_min)) os << "x_min = " << num(p.x_min) << "\n";
            if (std::isfinite(p.x_max)) os << "x_max = " << num(p.x_max) << "\n";
            if (std::isfinite(p.y_min)) os << "y_min = " << num(p.y_min) << "\n";
            if (std::isfinite(p.y_max)) os << "y_max = " << num(p.y_max) << "\n";
        }
    }
    os << "\n[mobility]\n";
    if (s.is_static()) {
        os << "model = static\n";
    } else if (const auto* d = std::get_if<DeterministicMobility>(&s.mobility)) {
        os << "model = deterministic\n";
        write_velocity(os, d->velocity, "velocity");
    } else {
        const auto& b = std::get<BrownianMobility>(s.mobility);
        os << "model = brownian\n";
        os << "sigma_plus = " << num(b.sigma_plus) << "\n";
        os << "sigma_minus = " << num(b.sigma_minus) << "\n";
        write_velocity(os, b.drift_plus, "drift_plus");
        write_velocity(os, b.drift_minus, "drift_minus");
    }
    os << "\n[solver]\n";
    os << "alpha = " << num(s.alpha) << "\n";
    os << "t_start = " << num(s.t_start) << "\n";
    os << "t_end = " << num(s.t_end) << "\n";
    os << "n_steps = " << s.n_steps << "\n";
    os << "poisson_tol = " << num(s.poisson_tol) << "\n";
    os << "balance_tol = " << num(s.balance_tol) << "\n";
    os << "max_iter = " << s.max_iter << "\n";
    os << "cfl = " << num(s.cfl) << "\n";
    os << "capacity_k = " << num(s.capacity_k) << "\n";
    os << "unbalanced_ok = " << (s.density.unbalanced_ok ? "true" : "false") << "\n";
    os << "\n[output]\n";
    if (!s.output_dir.empty()) os << "dir = " << s.output_dir << "\n";
    os << "stride = " << s.stride << "\n";
    return os.str();
}

}  // namespace magnetworks
