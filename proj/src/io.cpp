#include "psr/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace psr::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { fail(ErrorKind::MalformedInput, what); }

const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        malformed(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const char* what)
{
    if (!j.is_number())
        malformed(std::string(what) + " must be a number");
    return j.get<double>();
}

int positive_int(const json& j, const char* what)
{
    if (!j.is_number_integer() || j.get<long>() < 1 || j.get<long>() > 1000)
        malformed(std::string(what) + " must be a positive integer");
    return j.get<int>();
}

json coeff_list(const SymCubic& p)
{
    json arr = json::array();
    const auto& ts = triples(p.n());
    for (size_t t = 0; t < ts.size(); ++t) {
        double c = p.coefficients()[t];
        if (c == 0.0)
            continue;
        arr.push_back({{"idx", {ts[t][0] + 1, ts[t][1] + 1, ts[t][2] + 1}}, {"c", c}});
    }
    return arr;
}

SymCubic read_coeffs(int n, const json& list)
{
    if (!list.is_array())
        malformed("'coeffs' must be an array");
    std::set<Triple> seen;
    std::vector<std::pair<Triple, double>> terms;
    for (const json& e : list) {
        const json& idx = field(e, "idx");
        if (!idx.is_array() || idx.size() != 3)
            malformed("'idx' must hold three indices");
        Triple t;
        for (int q = 0; q < 3; ++q) {
            if (!idx[q].is_number_integer())
                malformed("indices must be integers");
            long v = idx[q].get<long>();
            if (v < 1 || v > n)
                malformed("index out of range");
            t[q] = static_cast<int>(v) - 1;
        }
        if (!(t[0] <= t[1] && t[1] <= t[2]))
            malformed("indices must be ascending");
        if (!seen.insert(t).second)
            malformed("duplicate index triple");
        terms.push_back({t, number(field(e, "c"), "'c'")});
    }
    return SymCubic::from_monomials(n, terms);
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_into(const json& j, int depth, std::string& out)
{
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
    case json::value_t::number_float: {
        double v = j.get<double>();
        out += std::isfinite(v) ? format_double(v) : "null";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (size_t i = 0; i < j.size(); ++i) {
            out += pad;
            dump_into(j[i], depth + 1, out);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
        return;
    }
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad + json(it.key()).dump() + ": ";
            dump_into(it.value(), depth + 1, out);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

std::string dump(const json& j)
{
    std::string out;
    dump_into(j, 0, out);
    return out;
}

json parse(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
}

json to_json(const SymCubic& p) { return {{"n", p.n()}, {"coeffs", coeff_list(p)}}; }

json to_json(const AmbientCubic& h) { return {{"m", h.m()}, {"coeffs", coeff_list(h.tensor())}}; }

json to_json(const Mat& m)
{
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json to_json(const Vec& v)
{
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i)
        arr.push_back(v[i]);
    return arr;
}

json to_json(const ReductionResult& r)
{
    return {{"A", to_json(r.change.matrix())},
            {"p", to_json(r.base_point)},
            {"p3", to_json(r.standard.p3())},
            {"rescaled", r.rescaled}};
}

json to_json(const SphereMaxResult& r)
{
    return {{"max_value", r.max_value},
            {"argmax", to_json(r.argmax)},
            {"kkt_residual", r.kkt_residual},
            {"starts_used", r.starts_used},
            {"converged", r.converged}};
}

json to_json(const MembershipReport& r)
{
    return {{"sphere_max", to_json(r.sphere_max)},
            {"is_closed_ccpsr", r.is_closed_ccpsr},
            {"singular_at_infinity", r.singular_at_infinity},
            {"regular_boundary", r.regular_boundary},
            {"generating_set_position", position_name(r.generating_set_position)}};
}

json to_json(const CurvatureReport& r)
{
    const int n = static_cast<int>(r.point.size());
    json gam = json::array();
    for (int k = 0; k < n; ++k) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = r.christoffels(k, i, j);
        gam.push_back(to_json(m));
    }
    return {{"tau", r.tau},
            {"point", to_json(r.point)},
            {"scalar", r.scalar},
            {"ricci", to_json(r.ricci)},
            {"christoffels", gam},
            {"base_p3", to_json(r.base_p3)}};
}

json to_json(const HomogeneityResult& r)
{
    json gens = json::array();
    for (const Mat& g : r.db0.generators())
        gens.push_back(to_json(g));
    return {{"is_homogeneous", r.is_homogeneous}, {"residual", r.residual}, {"dB0", gens}};
}

json to_json(const BoundsEstimate& b)
{
    return {{"l_hat", b.l_hat},
            {"u_hat", b.u_hat},
            {"witness_lower", to_json(b.witness_lower)},
            {"witness_upper", to_json(b.witness_upper)},
            {"candidates", b.candidates}};
}

json to_json(const SurfaceFixture& f)
{
    json j = {{"kind", fixture_kind_name(f.kind)}};
    j["b_param"] = f.b_param ? json(*f.b_param) : json(nullptr);
    j["ambient"] = to_json(f.ambient);
    j["A"] = to_json(f.change.matrix());
    j["standard"] = to_json(f.standard.p3());
    return j;
}

json to_json(const DeformationCurve& c)
{
    json samples = json::array();
    for (const auto& s : c.samples)
        samples.push_back({{"t", s.t},
                           {"p3", to_json(s.form.p3())},
                           {"sphere_max", s.report.sphere_max.max_value},
                           {"is_closed_ccpsr", s.report.is_closed_ccpsr},
                           {"generating_set_position", position_name(s.report.generating_set_position)}});
    return {{"from", to_json(c.from.p3())}, {"to", to_json(c.to.p3())}, {"all_closed", c.all_closed},
            {"samples", samples}};
}

SymCubic sym_cubic_from_json(const json& j)
{
    return read_coeffs(positive_int(field(j, "n"), "'n'"), field(j, "coeffs"));
}

AmbientCubic ambient_from_json(const json& j)
{
    return AmbientCubic(read_coeffs(positive_int(field(j, "m"), "'m'"), field(j, "coeffs")));
}

Mat matrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty() || !j[0].is_array())
        malformed("matrix must be a non-empty array of rows");
    Mat m(j.size(), j[0].size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != j[0].size())
            malformed("matrix rows must have equal length");
        for (size_t k = 0; k < j[i].size(); ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number(j[i][k], "matrix entry");
    }
    return m;
}

Vec vector_from_json(const json& j)
{
    if (!j.is_array())
        malformed("vector must be an array");
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = number(j[i], "vector entry");
    return v;
}

ReductionResult reduction_from_json(const json& j)
{
    ReductionResult r;
    try {
        r.change = LinearChange(matrix_from_json(field(j, "A")));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::MalformedInput)
            throw;
        malformed(e.what());
    }
    r.base_point = vector_from_json(field(j, "p"));
    r.standard = StandardCubic(sym_cubic_from_json(field(j, "p3")));
    const json& res = field(j, "rescaled");
    if (!res.is_boolean())
        malformed("'rescaled' must be a boolean");
    r.rescaled = res.get<bool>();
    return r;
}

SurfaceFixture fixture_from_json(const json& j)
{
    SurfaceFixture f;
    const json& kind = field(j, "kind");
    if (!kind.is_string())
        malformed("'kind' must be a string");
    try {
        f.kind = parse_fixture_kind(kind.get<std::string>());
        f.change = LinearChange(matrix_from_json(field(j, "A")));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::MalformedInput)
            throw;
        malformed(e.what());
    }
    if (j.contains("b_param") && !j.at("b_param").is_null())
        f.b_param = number(j.at("b_param"), "'b_param'");
    f.ambient = ambient_from_json(field(j, "ambient"));
    f.standard = StandardCubic(sym_cubic_from_json(field(j, "standard")));
    return f;
}

StandardCubic standard_from_json(const json& j)
{
    if (!j.is_object())
        malformed("expected a JSON object");
    if (j.contains("standard"))
        return standard_from_json(j.at("standard"));
    if (j.contains("p3"))
        return standard_from_json(j.at("p3"));
    if (j.contains("n"))
        return StandardCubic(sym_cubic_from_json(j));
    if (j.contains("m")) {
        AmbientCubic h = ambient_from_json(j);
        try {
            return StandardCubic::from_ambient(h);
        } catch (const Error& e) {
            malformed("ambient cubic is not in standard form; reduce it with standard-form first");
        }
    }
    malformed("no cubic found in input");
}

AmbientCubic any_ambient_from_json(const json& j)
{
    if (!j.is_object())
        malformed("expected a JSON object");
    if (j.contains("ambient"))
        return ambient_from_json(j.at("ambient"));
    if (j.contains("m"))
        return ambient_from_json(j);
    return standard_from_json(j).to_ambient();
}

} // namespace psr::io
