#include "psr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "psr/domain.hpp"
#include "psr/io.hpp"
#include "psr/random.hpp"

namespace psr::cli {

namespace {

using io::json;

struct RunConfig {
    std::uint64_t seed = 0;
    int starts = 0;
    int workers = 1;
    bool csv = false;
    std::optional<double> boundary_tolerance;
};

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    bool stdin_used = false;

    std::string read_stdin()
    {
        if (stdin_used)
            fail(ErrorKind::MalformedInput, "stdin can only be read once");
        stdin_used = true;
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

std::string slurp(const std::string& path, Streams& io)
{
    if (path == "-")
        return io.read_stdin();
    std::ifstream f(path);
    if (!f)
        fail(ErrorKind::MalformedInput, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json read_json(const std::string& path, bool use_stdin, Streams& io)
{
    if (use_stdin)
        return io::parse(io.read_stdin());
    if (path.empty())
        fail(ErrorKind::MalformedInput, "no input given (use --input FILE or --stdin)");
    return io::parse(slurp(path, io));
}

// A vector argument is an inline JSON array, a comma-separated list, or a file
// (or "-") holding a JSON array.
Vec read_vector(const std::string& arg, Streams& io)
{
    if (!arg.empty() && arg.front() == '[')
        return io::vector_from_json(io::parse(arg));
    if (arg == "-" || std::ifstream(arg).good())
        return io::vector_from_json(io::parse(slurp(arg, io)));
    std::vector<double> vals;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || tok.find_first_not_of(" \t", used) != std::string::npos)
            fail(ErrorKind::MalformedInput, "cannot read vector '" + arg + "'");
        vals.push_back(v);
    }
    if (vals.empty())
        fail(ErrorKind::MalformedInput, "empty vector");
    return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void emit(Streams& io, const json& j) { io.out << io::dump(j) << '\n'; }

std::string csv_row(const std::vector<std::string>& cells)
{
    std::string s;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i)
            s += ',';
        s += cells[i];
    }
    return s;
}

std::string fmt(double v) { return io::format_double(v); }

Position decide(double max_value, double tol)
{
    double d = max_value - sphere_bound();
    if (std::abs(d) <= tol)
        return Position::Boundary;
    return d < 0 ? Position::Interior : Position::Outside;
}

struct InputOpts {
    std::string path;
    bool use_stdin = false;
};

void add_input(CLI::App* sub, InputOpts& in)
{
    sub->add_option("--input", in.path, "input JSON file ('-' for stdin)");
    sub->add_flag("--stdin", in.use_stdin, "read the input JSON from stdin");
}

void add_seed(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--seed", cfg.seed, "random seed (default: $PSR_SEED or 0)");
}

void add_workers(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
}

int run_check(const InputOpts& in, const RunConfig& cfg, Streams& io)
{
    StandardCubic s = io::standard_from_json(read_json(in.path, in.use_stdin, io));
    MembershipReport r = classify(s.p3(), cfg.seed, cfg.starts, cfg.workers);
    if (cfg.boundary_tolerance) {
        r.generating_set_position = decide(r.sphere_max.max_value, *cfg.boundary_tolerance);
        r.singular_at_infinity = r.generating_set_position == Position::Boundary;
        r.regular_boundary = r.generating_set_position == Position::Interior;
        r.is_closed_ccpsr = r.generating_set_position != Position::Outside;
    }
    if (cfg.csv) {
        io.out << "max_value,kkt_residual,starts_used,converged,is_closed_ccpsr,singular_at_infinity,"
                  "regular_boundary,generating_set_position\n";
        io.out << csv_row({fmt(r.sphere_max.max_value), fmt(r.sphere_max.kkt_residual),
                           std::to_string(r.sphere_max.starts_used), r.sphere_max.converged ? "true" : "false",
                           r.is_closed_ccpsr ? "true" : "false", r.singular_at_infinity ? "true" : "false",
                           r.regular_boundary ? "true" : "false", position_name(r.generating_set_position)})
               << '\n';
    } else {
        emit(io, io::to_json(r));
    }
    switch (r.generating_set_position) {
    case Position::Interior:
        return 0;
    case Position::Boundary:
        return 1;
    default:
        return 2;
    }
}

int run_standard_form(const InputOpts& in, const std::string& point, bool no_rescale, Streams& io)
{
    json j = read_json(in.path, in.use_stdin, io);
    AmbientCubic h = io::any_ambient_from_json(j);
    Vec p;
    if (!point.empty()) {
        p = read_vector(point, io);
    } else if (j.is_object() && j.contains("A")) {
        p = io::matrix_from_json(j.at("A")).col(0);
    } else {
        p = Vec::Unit(h.m(), 0);
    }
    emit(io, io::to_json(standard_form_at(h, p, !no_rescale)));
    return 0;
}

int run_domain(const InputOpts& in, int k, const RunConfig& cfg, Streams& io)
{
    StandardCubic s = io::standard_from_json(read_json(in.path, in.use_stdin, io));
    const int n = s.n();
    std::vector<std::string> head;
    for (int i = 0; i < n; ++i)
        head.push_back("d" + std::to_string(i + 1));
    for (const char* c : {"c", "t_pos", "t_neg", "alpha_at_boundary"})
        head.push_back(c);
    io.out << csv_row(head) << '\n';
    Rng rng(cfg.seed);
    for (int i = 0; i < k; ++i) {
        Vec d(n);
        if (n == 1) {
            d[0] = i % 2 == 0 ? 1.0 : -1.0;
        } else if (n == 2) {
            double th = 2.0 * std::numbers::pi * i / k;
            d << std::cos(th), std::sin(th);
        } else {
            d = random_unit(rng, n);
        }
        RayRoots r = ray_roots(s.p3(), d);
        std::vector<std::string> row;
        for (int q = 0; q < n; ++q)
            row.push_back(fmt(r.direction[q]));
        row.push_back(fmt(r.c));
        row.push_back(fmt(r.t_pos));
        row.push_back(fmt(r.t_neg));
        row.push_back(fmt(alpha(s, r.t_pos * r.direction)));
        io.out << csv_row(row) << '\n';
    }
    return 0;
}

int run_curvature(const InputOpts& in, const std::string& at, const std::vector<std::string>& plane, int tau,
                  Streams& io)
{
    StandardCubic s = io::standard_from_json(read_json(in.path, in.use_stdin, io));
    Vec z = at.empty() ? Vec(Vec::Zero(s.n())) : read_vector(at, io);
    require_dim(z.size(), s.n(), "--at");
    CurvatureReport r = curvature_report(s, z, tau);
    json j = io::to_json(r);
    if (!plane.empty()) {
        Vec v = read_vector(plane[0], io);
        Vec w = read_vector(plane[1], io);
        require_dim(v.size(), s.n(), "--plane");
        require_dim(w.size(), s.n(), "--plane");
        j["sectional"] = r.sectional(v, w);
    }
    emit(io, j);
    return 0;
}

struct GeodesicArgs {
    std::string z0, v0;
    double tmax = 0.0;
    double dt = 1e-3;
    int sample_every = 0;
    bool no_clamp = false;
    bool json_out = false;
};

int run_geodesic(const InputOpts& in, const GeodesicArgs& a, Streams& io)
{
    StandardCubic s = io::standard_from_json(read_json(in.path, in.use_stdin, io));
    const int n = s.n();
    Vec z0 = a.z0.empty() ? Vec(Vec::Zero(n)) : read_vector(a.z0, io);
    Vec v0 = read_vector(a.v0, io);
    require_dim(z0.size(), n, "--z0");
    require_dim(v0.size(), n, "--v0");
    GeodesicOptions opts;
    opts.sample_every = a.sample_every;
    opts.clamp_to_generating_set = !a.no_clamp;
    GeodesicPath path = geodesic(s, z0, v0, a.tmax, a.dt, opts);
    if (a.json_out) {
        json samples = json::array();
        for (const auto& g : path.samples)
            samples.push_back({{"t", g.t}, {"chart", g.chart}, {"z", io::to_json(g.z)}, {"zdot", io::to_json(g.zdot)}});
        emit(io, {{"arc_length", path.arc_length},
                  {"exited", path.exited},
                  {"min_beta", path.min_beta},
                  {"max_speed_drift", path.max_speed_drift},
                  {"recenterings", path.recenterings},
                  {"clamps", path.clamps},
                  {"samples", samples}});
        return 0;
    }
    std::vector<std::string> head{"t", "chart"};
    for (int i = 0; i < n; ++i)
        head.push_back("z" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i)
        head.push_back("zdot" + std::to_string(i + 1));
    io.out << csv_row(head) << '\n';
    for (const auto& g : path.samples) {
        std::vector<std::string> row{fmt(g.t), std::to_string(g.chart)};
        for (int i = 0; i < n; ++i)
            row.push_back(fmt(g.z[i]));
        for (int i = 0; i < n; ++i)
            row.push_back(fmt(g.zdot[i]));
        io.out << csv_row(row) << '\n';
    }
    io.err << "arc_length=" << fmt(path.arc_length) << " exited=" << (path.exited ? "true" : "false")
           << " max_speed_drift=" << fmt(path.max_speed_drift) << " recenterings=" << path.recenterings << '\n';
    return 0;
}

int run_deform(const std::string& a_path, const std::string& b_path, bool use_stdin, int k, const RunConfig& cfg,
               Streams& io)
{
    std::string ap = a_path.empty() && use_stdin ? "-" : a_path;
    std::string bp = b_path.empty() && use_stdin && ap != "-" ? "-" : b_path;
    if (ap.empty() || bp.empty())
        fail(ErrorKind::MalformedInput, "deform needs --a and --b");
    StandardCubic a = io::standard_from_json(io::parse(slurp(ap, io)));
    StandardCubic b = io::standard_from_json(io::parse(slurp(bp, io)));
    DeformationCurve c = deform(a, b, k, cfg.seed);
    if (!cfg.csv) {
        emit(io, io::to_json(c));
        return 0;
    }
    const auto& ts = triples(a.n());
    std::vector<std::string> head{"t", "sphere_max", "is_closed_ccpsr", "generating_set_position"};
    for (const Triple& t : ts)
        head.push_back("c" + std::to_string(t[0] + 1) + std::to_string(t[1] + 1) + std::to_string(t[2] + 1));
    io.out << csv_row(head) << '\n';
    for (const auto& smp : c.samples) {
        std::vector<std::string> row{fmt(smp.t), fmt(smp.report.sphere_max.max_value),
                                     smp.report.is_closed_ccpsr ? "true" : "false",
                                     position_name(smp.report.generating_set_position)};
        for (double v : smp.form.p3().coefficients())
            row.push_back(fmt(v));
        io.out << csv_row(row) << '\n';
    }
    return 0;
}

int run_homog(const InputOpts& in, Streams& io)
{
    StandardCubic s = io::standard_from_json(read_json(in.path, in.use_stdin, io));
    emit(io, io::to_json(homogeneity_test(s.p3())));
    return 0;
}

int run_bounds(int n, int budget, const RunConfig& cfg, Streams& io)
{
    BoundsEstimate b = curvature_bounds_estimate(n, budget, cfg.seed, cfg.workers);
    json j = {{"n", n}, {"budget", budget}, {"seed", cfg.seed}};
    j.update(io::to_json(b));
    emit(io, j);
    return 0;
}

int run_fixtures(const std::string& kind, std::optional<double> b, Streams& io)
{
    FixtureKind k;
    try {
        k = parse_fixture_kind(kind);
    } catch (const Error& e) {
        io.err << "psr: " << e.what() << '\n';
        return kExitUsage;
    }
    emit(io, io::to_json(surface_fixture(k, k == FixtureKind::F ? std::optional<double>(b.value_or(0.0)) : b)));
    return 0;
}

std::optional<std::uint64_t> env_seed()
{
    const char* s = std::getenv("PSR_SEED");
    if (!s || !*s)
        return std::nullopt;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0' || s[0] == '-')
        fail(ErrorKind::InvalidArgument, "PSR_SEED must be a non-negative integer");
    return v;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    Streams io{in, out, err};
    RunConfig cfg;
    cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    try {
        if (auto s = env_seed())
            cfg.seed = *s;
    } catch (const Error& e) {
        err << "psr: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App app{"Hyperbolic cubic forms and their PSR hypersurfaces", "psr"};
    app.set_version_flag("--version", std::string("psr ") + kVersion);
    app.require_subcommand(1);

    InputOpts input;
    bool json_flag = false;

    auto* check = app.add_subcommand("check", "classify P3 against the sphere-max bound");
    add_input(check, input);
    add_seed(check, cfg);
    add_workers(check, cfg);
    check->add_option("--starts", cfg.starts, "multistart count (default max(64, 16 n^2))");
    check->add_option("--boundary-tol", cfg.boundary_tolerance, "override the boundary tolerance");
    check->add_flag("--json", json_flag, "JSON output (default)");
    check->add_flag("--csv", cfg.csv, "CSV output");

    std::string point;
    bool no_rescale = false;
    auto* sf = app.add_subcommand("standard-form", "reduce an ambient cubic to standard form at a point");
    add_input(sf, input);
    sf->add_option("--point", point, "point of the hypersurface (default: first column of A, or e1)");
    sf->add_flag("--no-rescale", no_rescale, "require h(p) = 1 instead of rescaling p");

    int directions = 16;
    auto* dom = app.add_subcommand("domain", "ray roots of dom(H) as CSV");
    add_input(dom, input);
    add_seed(dom, cfg);
    dom->add_option("--directions", directions, "number of directions")->check(CLI::PositiveNumber);

    std::string at;
    std::vector<std::string> plane;
    int tau = 3;
    auto* curv = app.add_subcommand("curvature", "curvature report at a point");
    add_input(curv, input);
    curv->add_option("--at", at, "chart point z (default 0)");
    curv->add_option("--plane", plane, "two tangent vectors spanning a plane")->expected(2);
    curv->add_option("--tau", tau, "degree parameter (>= 3)");

    GeodesicArgs geo;
    auto* geod = app.add_subcommand("geodesic", "integrate a geodesic, CSV samples");
    add_input(geod, input);
    geod->add_option("--z0", geo.z0, "start point (default 0)");
    geod->add_option("--v0", geo.v0, "initial velocity")->required();
    geod->add_option("--tmax", geo.tmax, "final time")->required()->check(CLI::NonNegativeNumber);
    geod->add_option("--dt", geo.dt, "RK4 step")->check(CLI::PositiveNumber);
    geod->add_option("--sample-every", geo.sample_every, "record every k-th step");
    geod->add_flag("--no-clamp", geo.no_clamp, "do not pull chart forms back onto the generating set");
    geod->add_flag("--json", geo.json_out, "JSON output");

    std::string a_path, b_path;
    int samples = 101;
    auto* def = app.add_subcommand("deform", "classify the segment between two standard forms");
    def->add_option("--a", a_path, "first form ('-' for stdin)");
    def->add_option("--b", b_path, "second form ('-' for stdin)");
    def->add_flag("--stdin", input.use_stdin, "read whichever of --a/--b is missing from stdin");
    def->add_option("--samples", samples, "sample count")->check(CLI::Range(2, 1000000));
    add_seed(def, cfg);
    def->add_flag("--csv", cfg.csv, "CSV output");

    auto* hom = app.add_subcommand("homog", "homogeneity test");
    add_input(hom, input);

    int bn = 2, budget = 10000;
    auto* bnd = app.add_subcommand("bounds", "estimate scalar-curvature bounds over the generating set");
    bnd->add_option("--n", bn, "dimension")->check(CLI::Range(1, 16));
    bnd->add_option("--budget", budget, "candidate count")->check(CLI::PositiveNumber);
    add_seed(bnd, cfg);
    add_workers(bnd, cfg);

    std::string kind;
    std::optional<double> bparam;
    auto* fix = app.add_subcommand("fixtures", "surface fixtures a..f");
    fix->add_option("--kind", kind, "a, b, c, d, e or f")->required();
    fix->add_option("--b", bparam, "parameter of family f, in (-1, 1)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (check->parsed())
            return run_check(input, cfg, io);
        if (sf->parsed())
            return run_standard_form(input, point, no_rescale, io);
        if (dom->parsed())
            return run_domain(input, directions, cfg, io);
        if (curv->parsed())
            return run_curvature(input, at, plane, tau, io);
        if (geod->parsed())
            return run_geodesic(input, geo, io);
        if (def->parsed())
            return run_deform(a_path, b_path, input.use_stdin, samples, cfg, io);
        if (hom->parsed())
            return run_homog(input, io);
        if (bnd->parsed())
            return run_bounds(bn, budget, cfg, io);
        if (fix->parsed())
            return run_fixtures(kind, bparam, io);
    } catch (const Error& e) {
        err << "psr: " << e.what() << '\n';
        return e.kind() == ErrorKind::MalformedInput ? kExitMalformed : kExitComputation;
    } catch (const std::exception& e) {
        err << "psr: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitUsage;
}

} // namespace psr::cli
