#include "mrlab/config.hpp"

#include "mrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace mrlab {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const ConfigFile& f, const std::string& key, const std::string& msg)
{
    const int line = f.line_of(key);
    std::string where = "config key '" + key + "'";
    if (line > 0) {
        where += " (line " + std::to_string(line) + ")";
    }
    throw ConfigError(where + ": " + msg, key, line);
}

double parse_double(const ConfigFile& f, const std::string& key, const std::string& text)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (trim(text.substr(pos)).empty() && std::isfinite(v)) {
            return v;
        }
    } catch (const std::exception&) {
    }
    fail(f, key, "expected a number, got '" + text + "'");
}

// Numbers separated by commas and/or whitespace.
std::vector<double> number_list(const ConfigFile& f, const std::string& key, std::string text)
{
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(parse_double(f, key, tok));
    }
    return out;
}

Point bbox_lower(const Mesh& m)
{
    Point p{m.vertex(0)[0], m.vertex(0)[1]};
    for (const auto& v : m.vertices()) {
        p[0] = std::min(p[0], v[0]);
        p[1] = std::min(p[1], v[1]);
    }
    return p;
}

Point bbox_upper(const Mesh& m)
{
    Point p{m.vertex(0)[0], m.vertex(0)[1]};
    for (const auto& v : m.vertices()) {
        p[0] = std::max(p[0], v[0]);
        p[1] = std::max(p[1], v[1]);
    }
    return p;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in)
{
    ConfigFile f;
    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) {
            continue;
        }
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3) {
                throw ConfigError("line " + std::to_string(line) + ": malformed section header", s, line);
            }
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", s, line);
        }
        const std::string name = trim(s.substr(0, eq));
        if (name.empty()) {
            throw ConfigError("line " + std::to_string(line) + ": empty key", s, line);
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(line) + ": key '" + name + "' outside any section", name, line);
        }
        const std::string key = section + "." + name;
        if (f.entries_.count(key) != 0) {
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'", key, line);
        }
        f.entries_[key] = {trim(s.substr(eq + 1)), line};
    }
    return f;
}

ConfigFile ConfigFile::parse_string(const std::string& text)
{
    std::istringstream in(text);
    return parse(in);
}

ConfigFile ConfigFile::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse(in);
}

const ConfigFile::Entry& ConfigFile::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError("missing config key '" + key + "'", key, 0);
    }
    used_.insert(key);
    return it->second;
}

std::string ConfigFile::text(const std::string& key, const std::string& fallback) const
{
    return has(key) ? get(key).value : fallback;
}

double ConfigFile::number(const std::string& key, double fallback) const
{
    return has(key) ? number(key) : fallback;
}

double ConfigFile::number(const std::string& key) const
{
    return parse_double(*this, key, get(key).value);
}

long long ConfigFile::integer(const std::string& key, long long fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 9e15) {
        fail(*this, key, "expected an integer");
    }
    return static_cast<long long>(v);
}

std::vector<double> ConfigFile::numbers(const std::string& key) const
{
    return number_list(*this, key, get(key).value);
}

void ConfigFile::reject_unknown() const
{
    for (const auto& [key, e] : entries_) {
        if (used_.count(key) == 0) {
            throw ConfigError("config key '" + key + "' (line " + std::to_string(e.line) + ") is not recognised",
                              key, e.line);
        }
    }
}

int ConfigFile::line_of(const std::string& key) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

RunConfig parse_run_config(const ConfigFile& f)
{
    RunConfig c;
    auto positive = [&](const std::string& key, double v) {
        if (!(v > 0.0)) {
            fail(f, key, "must be positive");
        }
    };
    auto one_of = [&](const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
        for (const char* a : allowed) {
            if (v == a) {
                return;
            }
        }
        std::string msg = "must be one of";
        for (const char* a : allowed) {
            msg += std::string(" ") + a;
        }
        fail(f, key, msg + ", got '" + v + "'");
    };

    c.mesh.kind = f.text("mesh.kind", c.mesh.kind);
    one_of("mesh.kind", c.mesh.kind, {"interval", "rect", "file"});
    if (c.mesh.kind == "interval") {
        c.mesh.nx = f.integer("mesh.cells", c.mesh.nx);
        c.mesh.lx = f.number("mesh.length", c.mesh.lx);
        if (c.mesh.nx < 1) {
            fail(f, "mesh.cells", "must be >= 1");
        }
        positive("mesh.length", c.mesh.lx);
    } else if (c.mesh.kind == "rect") {
        c.mesh.nx = f.integer("mesh.nx", c.mesh.nx);
        c.mesh.ny = f.integer("mesh.ny", c.mesh.ny);
        c.mesh.lx = f.number("mesh.lx", c.mesh.lx);
        c.mesh.ly = f.number("mesh.ly", c.mesh.ly);
        if (c.mesh.nx < 1) {
            fail(f, "mesh.nx", "must be >= 1");
        }
        if (c.mesh.ny < 1) {
            fail(f, "mesh.ny", "must be >= 1");
        }
        positive("mesh.lx", c.mesh.lx);
        positive("mesh.ly", c.mesh.ly);
    } else {
        c.mesh.path = f.get("mesh.path").value;
    }

    c.dirichlet = f.text("boundary.dirichlet", c.dirichlet);

    auto& co = c.coefficient;
    co.kind = f.text("coefficient.kind", co.kind);
    one_of("coefficient.kind", co.kind, {"constant", "piecewise", "moving_interface"});
    if (co.kind == "constant") {
        co.matrices.push_back(f.has("coefficient.matrix") ? f.numbers("coefficient.matrix") : std::vector<double>{});
    } else if (co.kind == "piecewise") {
        std::istringstream in(f.get("coefficient.matrices").value);
        std::string piece;
        while (std::getline(in, piece, ';')) {
            co.matrices.push_back(number_list(f, "coefficient.matrices", piece));
        }
        co.breakpoints = f.has("coefficient.breakpoints") ? f.numbers("coefficient.breakpoints") : std::vector<double>{};
        if (co.matrices.size() != co.breakpoints.size() + 1) {
            fail(f, "coefficient.matrices", "need exactly one more matrix than breakpoints");
        }
    } else {
        co.shape = f.text("coefficient.shape", co.shape);
        one_of("coefficient.shape", co.shape, {"interval", "disk", "rect"});
        co.center = f.numbers("coefficient.center");
        co.velocity = f.has("coefficient.velocity") ? f.numbers("coefficient.velocity") : std::vector<double>{};
        co.size = f.numbers("coefficient.size");
        co.inside = f.number("coefficient.inside", co.inside);
        co.outside = f.number("coefficient.outside", co.outside);
        positive("coefficient.inside", co.inside);
        positive("coefficient.outside", co.outside);
        for (double s : co.size) {
            positive("coefficient.size", s);
        }
    }

    c.horizon = f.number("time.T", c.horizon);
    positive("time.T", c.horizon);
    c.steps = f.integer("time.steps", c.steps);
    if (c.steps < 1) {
        fail(f, "time.steps", "must be >= 1");
    }
    if (f.has("time.extra_nodes")) {
        c.extra_nodes = f.numbers("time.extra_nodes");
        for (double t : c.extra_nodes) {
            if (!(t > 0.0 && t < c.horizon)) {
                fail(f, "time.extra_nodes", "nodes must lie inside (0, T)");
            }
        }
    }
    if (co.kind == "piecewise") {
        for (double t : co.breakpoints) {
            if (!(t > 0.0 && t < c.horizon)) {
                fail(f, "coefficient.breakpoints", "breakpoints must lie inside (0, T)");
            }
        }
    }

    c.forcing.profile = f.text("forcing.profile", c.forcing.profile);
    one_of("forcing.profile", c.forcing.profile, {"zero", "constant", "sine", "pulse", "random"});
    c.forcing.spatial = f.text("forcing.spatial", c.forcing.spatial);
    one_of("forcing.spatial", c.forcing.spatial, {"ones", "bump"});
    c.forcing.amplitude = f.number("forcing.amplitude", c.forcing.amplitude);
    c.forcing.seed = static_cast<std::uint64_t>(f.integer("forcing.seed", static_cast<long long>(c.forcing.seed)));

    c.r = f.number("analysis.r", c.r);
    c.q = f.number("analysis.q", c.q);
    if (!(c.r > 1.0)) {
        fail(f, "analysis.r", "must lie in (1, inf)");
    }
    if (!(c.q > 1.0)) {
        fail(f, "analysis.q", "must lie in (1, inf)");
    }
    c.shift = f.number("analysis.shift", c.shift);
    if (!(c.shift >= 0.0)) {
        fail(f, "analysis.shift", "must be nonnegative");
    }
    c.alpha = f.number("analysis.alpha", c.alpha);
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
        fail(f, "analysis.alpha", "must lie in (0, 1)");
    }
    c.probes = static_cast<int>(f.integer("analysis.probes", c.probes));
    if (c.probes < 1) {
        fail(f, "analysis.probes", "must be >= 1");
    }
    c.seed = static_cast<std::uint64_t>(f.integer("analysis.seed", static_cast<long long>(c.seed)));
    c.reference = f.text("analysis.reference", c.reference);
    one_of("analysis.reference", c.reference, {"duality", "field"});

    const bool any_fp = std::any_of(f.entries().begin(), f.entries().end(),
                                    [](const auto& e) { return e.first.rfind("fixed_point.", 0) == 0; });
    if (any_fp) {
        FixedPointConfig fp;
        fp.tolerance = f.number("fixed_point.tolerance", fp.tolerance);
        positive("fixed_point.tolerance", fp.tolerance);
        fp.max_iterations = static_cast<int>(f.integer("fixed_point.max_iterations", fp.max_iterations));
        if (fp.max_iterations < 1) {
            fail(f, "fixed_point.max_iterations", "must be >= 1");
        }
        fp.damping = f.number("fixed_point.damping", fp.damping);
        if (!(fp.damping > 0.0 && fp.damping <= 1.0)) {
            fail(f, "fixed_point.damping", "must lie in (0, 1]");
        }
        c.fixed_point = fp;
        c.sigma = f.text("fixed_point.sigma", c.sigma);
        one_of("fixed_point.sigma", c.sigma, {"constant", "tanh"});
        c.sigma_center = f.number("fixed_point.sigma_center", c.sigma_center);
        c.sigma_amplitude = f.number("fixed_point.sigma_amplitude", c.sigma_amplitude);
        if (!(c.sigma_center - std::abs(c.sigma == "tanh" ? c.sigma_amplitude : 0.0) > 0.0)) {
            fail(f, "fixed_point.sigma_center", "sigma must stay positive");
        }
    }

    c.output_dir = f.text("output.dir", c.output_dir);
    f.reject_unknown();
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    return parse_run_config(ConfigFile::load(path));
}

Mesh build_mesh(const MeshConfig& cfg)
{
    if (cfg.kind == "interval") {
        return build_interval_mesh(cfg.nx, cfg.lx);
    }
    if (cfg.kind == "rect") {
        return build_rect_mesh(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    }
    std::ifstream in(cfg.path);
    if (!in) {
        throw ConfigError("cannot open mesh file '" + cfg.path + "'", "mesh.path");
    }
    return read_mesh(in);
}

BoundaryPartition build_partition(const Mesh& mesh, const std::string& dirichlet)
{
    const Point lo = bbox_lower(mesh);
    const Point hi = bbox_upper(mesh);
    const double tol = 1e-12 * std::max({1.0, hi[0] - lo[0], hi[1] - lo[1]});
    std::vector<std::string> sides;
    std::istringstream in(dirichlet);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) {
            sides.push_back(tok);
        }
    }
    for (const auto& s : sides) {
        if (s != "all" && s != "none" && s != "left" && s != "right" && s != "bottom" && s != "top") {
            throw ConfigError("config key 'boundary.dirichlet': unknown side '" + s
                                  + "' (use all, none, left, right, bottom, top)",
                              "boundary.dirichlet");
        }
    }
    auto has = [&](const char* s) { return std::find(sides.begin(), sides.end(), s) != sides.end(); };
    return mark_dirichlet(mesh, [&](const Point& p) {
        if (has("all")) {
            return true;
        }
        return (has("left") && std::abs(p[0] - lo[0]) <= tol) || (has("right") && std::abs(p[0] - hi[0]) <= tol)
               || (mesh.dimension() == 2 && has("bottom") && std::abs(p[1] - lo[1]) <= tol)
               || (mesh.dimension() == 2 && has("top") && std::abs(p[1] - hi[1]) <= tol);
    });
}

namespace {

CoeffMatrix to_matrix(const std::vector<double>& v, int d)
{
    if (v.empty()) {
        return CoeffMatrix::Identity(d, d);
    }
    if (v.size() == 1) {
        return v[0] * CoeffMatrix::Identity(d, d);
    }
    if (static_cast<int>(v.size()) != d * d) {
        throw ConfigError("coefficient matrix needs 1 or d*d = " + std::to_string(d * d) + " entries",
                          "coefficient.matrix");
    }
    CoeffMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = v[static_cast<std::size_t>(i * d + j)];
        }
    }
    return m;
}

Point to_point(const std::vector<double>& v, int d, const char* key)
{
    if (v.empty()) {
        return {0.0, 0.0};
    }
    if (static_cast<int>(v.size()) != d) {
        throw ConfigError(std::string("config key '") + key + "' needs " + std::to_string(d) + " values", key);
    }
    return {v[0], d == 2 ? v[1] : 0.0};
}

}  // namespace

CoefficientField build_field(const CoefficientConfig& cfg, int dimension, const Mesh& mesh, double horizon)
{
    try {
        if (cfg.kind == "constant") {
            return constant_field(to_matrix(cfg.matrices.front(), dimension));
        }
        if (cfg.kind == "piecewise") {
            std::vector<CoefficientField> pieces;
            for (const auto& m : cfg.matrices) {
                pieces.push_back(constant_field(to_matrix(m, dimension)));
            }
            return piecewise_constant_in_time(std::move(pieces), cfg.breakpoints, horizon);
        }
        InterfaceSpec spec;
        spec.dimension = dimension;
        spec.inside = cfg.inside;
        spec.outside = cfg.outside;
        spec.domain = {bbox_lower(mesh), bbox_upper(mesh)};
        spec.center_path = linear_path(to_point(cfg.center, dimension, "coefficient.center"),
                                       to_point(cfg.velocity, dimension, "coefficient.velocity"));
        if (cfg.shape == "interval") {
            if (cfg.size.size() != 1) {
                throw ConfigError("config key 'coefficient.size' needs the half width", "coefficient.size");
            }
            spec.shape = IntervalInclusion{cfg.size[0]};
        } else if (cfg.shape == "disk") {
            if (cfg.size.size() != 1) {
                throw ConfigError("config key 'coefficient.size' needs the radius", "coefficient.size");
            }
            spec.shape = DiskInclusion{cfg.size[0]};
        } else {
            if (cfg.size.size() != 2) {
                throw ConfigError("config key 'coefficient.size' needs two half widths", "coefficient.size");
            }
            spec.shape = RectInclusion{cfg.size[0], cfg.size[1]};
        }
        return moving_interface_field(std::move(spec), horizon);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("coefficient section: ") + e.what(), "coefficient.kind");
    }
}

Forcing build_forcing(const ForcingConfig& cfg, const TimeGrid& grid, const P1Space& space)
{
    const double T = grid.horizon();
    const double a = cfg.amplitude;
    if (cfg.profile == "random") {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        Forcing f = zero_forcing(grid, space.num_dofs());
        for (std::size_t k = 1; k < f.size(); ++k) {
            for (Index i = 0; i < space.num_dofs(); ++i) {
                f[k][i] = a * normal(rng);
            }
        }
        return f;
    }
    std::function<double(double)> amp;
    if (cfg.profile == "zero") {
        amp = [](double) { return 0.0; };
    } else if (cfg.profile == "constant") {
        amp = [a](double) { return a; };
    } else if (cfg.profile == "sine") {
        amp = [a, T](double t) { return a * std::sin(std::numbers::pi * t / T); };
    } else {
        amp = [a, T](double t) { return (t >= 0.25 * T && t <= 0.75 * T) ? a : 0.0; };
    }
    const Point lo = bbox_lower(space.mesh());
    const Point hi = bbox_upper(space.mesh());
    const int d = space.dimension();
    std::function<double(const Point&)> prof;
    if (cfg.spatial == "ones") {
        prof = [](const Point&) { return 1.0; };
    } else {
        prof = [lo, hi, d](const Point& x) {
            double v = std::sin(std::numbers::pi * (x[0] - lo[0]) / (hi[0] - lo[0]));
            if (d == 2) {
                v *= std::sin(std::numbers::pi * (x[1] - lo[1]) / (hi[1] - lo[1]));
            }
            return v;
        };
    }
    return forcing_from_profile(grid, space, amp, prof);
}

SigmaFunction build_sigma(const RunConfig& cfg)
{
    if (cfg.sigma == "constant") {
        return constant_sigma(cfg.sigma_center);
    }
    return tanh_sigma(cfg.sigma_center, cfg.sigma_amplitude);
}

Problem build_problem(const RunConfig& cfg)
{
    Mesh mesh = build_mesh(cfg.mesh);
    BoundaryPartition part = build_partition(mesh, cfg.dirichlet);
    CoefficientField field = build_field(cfg.coefficient, mesh.dimension(), mesh, cfg.horizon);
    std::vector<double> extra = cfg.extra_nodes;
    extra.insert(extra.end(), field.jump_times().begin(), field.jump_times().end());
    TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.steps, extra);
    P1Space space(std::move(mesh), std::move(part));
    Forcing f = build_forcing(cfg.forcing, grid, space);
    return {std::move(space), std::move(field), std::move(grid), std::move(f)};
}

}  // namespace mrlab
