#include "ellq/ellq.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "ellq/families.hpp"
#include "ellq/heegner.hpp"
#include "ellq/heights.hpp"
#include "ellq/l_series.hpp"
#include "ellq/local_data.hpp"
#include "ellq/modular.hpp"
#include "ellq/numtheory.hpp"
#include "ellq/registry.hpp"
#include "ellq/sl2.hpp"
#include "ellq/torsion.hpp"

struct ellq_registry
{
    ellq::Registry registry;
};

struct ellq_curve
{
    ellq::Curve curve;
};

namespace
{

using ojson = nlohmann::ordered_json;
using namespace ellq;

thread_local std::string last_error;

ellq_status fail(ellq_status code, std::string const &msg)
{
    last_error = msg;
    return code;
}

template <class F> ellq_status guarded(F &&f)
{
    try {
        return f();
    } catch (std::domain_error const &e) {
        return fail(ELLQ_E_DOMAIN, e.what());
    } catch (std::invalid_argument const &e) {
        return fail(ELLQ_E_USAGE, e.what());
    } catch (std::out_of_range const &e) {
        return fail(ELLQ_E_USAGE, e.what());
    } catch (std::exception const &e) {
        return fail(ELLQ_E_INTERNAL, e.what());
    } catch (...) {
        return fail(ELLQ_E_INTERNAL, "unknown error");
    }
}

void require(bool ok, char const *msg)
{
    if (!ok)
        throw std::invalid_argument(msg);
}

char *dup(std::string const &s)
{
    char *p = static_cast<char *>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

ellq_status emit(char **out, std::string const &s, ellq_status status = ELLQ_OK)
{
    *out = dup(s);
    if (status == ELLQ_E_INCONCLUSIVE)
        last_error = "result is inconclusive";
    return status;
}

std::string dump(ojson const &j) { return j.dump(2) + "\n"; }

double r12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

ojson num(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v == 0 ? 0.0 : r12(v);
}

ojson num(long double v) { return num(static_cast<double>(v)); }

// 12 significant digits, keeping a decimal point on integral values.
std::string text(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0 ? 0.0 : v);
    std::string s = buf;
    if (s.find_first_of(".e") == std::string::npos)
        s += ".0";
    return s;
}

std::string exact(mpq_class q)
{
    q.canonicalize();
    return q.get_str();
}

std::string exact(mpz_class const &z) { return z.get_str(); }

template <class C> ojson cplx_json(C const &z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

ojson point_json(Point const &p)
{
    if (p.is_infinity())
        return {{"infinity", true}};
    return {{"infinity", false}, {"x", exact(p.x())}, {"y", exact(p.y())}};
}

ojson coefficients_json(Curve const &E)
{
    ojson a = ojson::array();
    for (auto const &c : E.coefficients())
        a.push_back(exact(c));
    return a;
}

ojson complex_point_json(ComplexPoint const &p)
{
    if (p.infinity)
        return {{"infinity", true}};
    return {{"infinity", false}, {"x", cplx_json(p.x)}, {"y", cplx_json(p.y)}};
}

Registry const &registry_of(ellq_registry const *r) { return r ? r->registry : Registry::builtin(); }

struct Conductor
{
    long long N = 0;
    std::string source;
};

std::optional<Conductor> resolve_conductor(Curve const &E, Registry const &reg, long long given, bool heuristic)
{
    if (given < 0)
        throw std::invalid_argument("conductor must be positive");
    if (given > 0)
        return Conductor{given, "flag"};
    if (RegistryEntry const *e = reg.find_curve(E))
        if (e->conductor)
            return Conductor{*e->conductor, "registry"};
    if (heuristic) {
        if (auto found = conductor_search(E))
            return Conductor{found->N, "search"};
        mpz_class N = heuristic_conductor(minimal_model(E));
        if (!N.fits_slong_p())
            throw domain_error("heuristic conductor does not fit in 64 bits");
        return Conductor{N.get_si(), "heuristic"};
    }
    return std::nullopt;
}

Conductor need_conductor(Curve const &E, Registry const &reg, long long given, bool heuristic)
{
    auto c = resolve_conductor(E, reg, given, heuristic);
    if (!c)
        throw domain_error("conductor unknown: pass --conductor or use a registry curve");
    return *c;
}

int format_or(int format, int fallback)
{
    if (format < ELLQ_FORMAT_DEFAULT || format > ELLQ_FORMAT_TEXT)
        throw std::invalid_argument("unknown output format");
    return format == ELLQ_FORMAT_DEFAULT ? fallback : format;
}

void only_formats(int format, std::initializer_list<int> allowed)
{
    for (int f : allowed)
        if (f == format)
            return;
    throw std::invalid_argument("output format not supported for this command");
}

double parse_double(std::string const &s)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (std::exception const &) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

// Decimal ("-0.25", "3e-2") or fraction ("1/4") input as an exact rational.
mpq_class parse_exact(std::string const &s)
{
    if (s.find('/') != std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0 || q.get_den() == 0)
            throw std::invalid_argument("malformed rational '" + s + "'");
        q.canonicalize();
        return q;
    }
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        neg = s[i++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_point)
                --scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit)
        throw std::invalid_argument("malformed number '" + s + "'");
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E')
            throw std::invalid_argument("malformed number '" + s + "'");
        std::string e = s.substr(i + 1);
        std::size_t used = 0;
        long ev = 0;
        try {
            ev = std::stol(e, &used);
        } catch (std::exception const &) {
            used = 0;
        }
        if (used == 0 || used != e.size() || std::labs(ev) > 10000)
            throw std::invalid_argument("malformed exponent in '" + s + "'");
        scale += ev;
    }
    mpq_class q{mpz_class(digits, 10)};
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
    if (scale >= 0)
        q *= p;
    else
        q /= p;
    if (neg)
        q = -q;
    q.canonicalize();
    return q;
}

} // namespace

extern "C" {

const char *ellq_version(void) { return ELLQ_VERSION; }

const char *ellq_last_error(void) { return last_error.c_str(); }

void ellq_string_free(char *s) { std::free(s); }

ellq_status ellq_registry_builtin(ellq_registry **out)
{
    return guarded([&] {
        require(out, "null output pointer");
        *out = new ellq_registry{Registry::builtin()};
        return ELLQ_OK;
    });
}

ellq_status ellq_registry_load(const char *path, ellq_registry **out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = new ellq_registry{Registry::load(path)};
        return ELLQ_OK;
    });
}

void ellq_registry_free(ellq_registry *registry) { delete registry; }

ellq_status ellq_registry_list(const ellq_registry *registry, int format, char **out)
{
    return guarded([&] {
        require(out, "null output pointer");
        int f = format_or(format, ELLQ_FORMAT_JSON);
        only_formats(f, {ELLQ_FORMAT_JSON, ELLQ_FORMAT_TEXT});
        Registry const &reg = registry_of(registry);
        if (f == ELLQ_FORMAT_TEXT) {
            std::string s;
            for (auto const &e : reg.entries())
                s += e.name + "\n";
            return emit(out, s);
        }
        ojson list = ojson::array();
        for (auto const &e : reg.entries()) {
            ojson gens = ojson::array();
            for (auto const &P : e.generators)
                gens.push_back(point_json(P));
            ojson row = {{"name", e.name},
                         {"coefficients", coefficients_json(e.curve)},
                         {"conductor", e.conductor ? ojson(*e.conductor) : ojson(nullptr)},
                         {"epsilon", e.epsilon == 0 ? ojson(nullptr) : ojson(e.epsilon)},
                         {"generators", gens}};
            if (e.base) {
                row["base"] = coefficients_json(*e.base);
                row["twist"] = e.twist;
            }
            list.push_back(row);
        }
        return emit(out, dump(list));
    });
}

ellq_status ellq_curve_parse(const char *spec, const ellq_registry *registry, ellq_curve **out)
{
    return guarded([&] {
        require(spec && out, "null argument");
        *out = new ellq_curve{parse_curve(spec, registry_of(registry))};
        return ELLQ_OK;
    });
}

void ellq_curve_free(ellq_curve *curve) { delete curve; }

ellq_status ellq_curve_describe(const ellq_curve *curve, char **out)
{
    return guarded([&] {
        require(curve && out, "null argument");
        Curve const &E = curve->curve;
        Curve S = to_short_form(E);
        ojson j = {{"coefficients", coefficients_json(E)},
                   {"short_model", {exact(S.a4()), exact(S.a6())}},
                   {"discriminant", exact(E.discriminant())},
                   {"disc_core", exact(disc_core(E))},
                   {"curve_height", exact(curve_height(E))},
                   {"j_invariant", exact(E.j_invariant())}};
        return emit(out, dump(j));
    });
}

ellq_status ellq_torsion(const ellq_curve *curve, char **out)
{
    return guarded([&] {
        require(curve && out, "null argument");
        TorsionGroup g = torsion_subgroup(curve->curve);
        ojson gens = ojson::array();
        for (auto const &P : g.generators)
            gens.push_back(point_json(P));
        ojson j = {{"structure", to_string(g.structure)}, {"order", g.order()}, {"generators", gens}};
        return emit(out, dump(j));
    });
}

ellq_status ellq_ap(const ellq_curve *curve, uint64_t pmax, int format, char **out)
{
    return guarded([&] {
        require(curve && out, "null argument");
        require(pmax >= 2 && pmax <= 100000000, "pmax must lie in [2, 1e8]");
        int f = format_or(format, ELLQ_FORMAT_JSON);
        only_formats(f, {ELLQ_FORMAT_CSV, ELLQ_FORMAT_JSON});
        auto rows = local_data_up_to(curve->curve, pmax);
        if (f == ELLQ_FORMAT_CSV) {
            std::ostringstream s;
            s << "p,a_p,kind\n";
            for (auto const &r : rows)
                s << r.p << ',' << r.ap << ',' << to_string(r.kind) << '\n';
            return emit(out, s.str());
        }
        ojson list = ojson::array();
        for (auto const &r : rows)
            list.push_back({{"p", r.p}, {"a_p", r.ap}, {"kind", to_string(r.kind)}});
        return emit(out, dump({{"pmax", pmax}, {"rows", list}}));
    });
}

ellq_status ellq_lseries(const ellq_curve *curve, double s_re, double s_im, size_t terms, char **out)
{
    return guarded([&] {
        require(curve && out, "null argument");
        require(terms >= 1 && terms <= 10000000, "terms must lie in [1, 1e7]");
        auto d = dirichlet_partial(curve->curve, {s_re, s_im}, terms);
        ojson j = {{"s", {{"re", num(s_re)}, {"im", num(s_im)}}},
                   {"cutoff", d.cutoff},
                   {"value", cplx_json(d.value)},
                   {"tail_bound", num(d.tail_bound)}};
        return emit(out, dump(j));
    });
}

void ellq_lvalue_options_init(ellq_lvalue_options *opts)
{
    if (opts)
        *opts = ellq_lvalue_options{0, 0, 0, 0, 0};
}

ellq_status ellq_lvalue(const ellq_curve *curve, const ellq_registry *registry, const ellq_lvalue_options *opts,
                        char **out)
{
    return guarded([&] {
        require(curve && opts && out, "null argument");
        require(opts->epsilon == 0 || opts->epsilon == 1 || opts->epsilon == -1, "epsilon must be +1, -1 or 0");
        Registry const &reg = registry_of(registry);
        Curve const &input = curve->curve;
        Conductor N = need_conductor(input, reg, opts->conductor, opts->heuristic_conductor != 0);
        Curve E = log_abs(input.discriminant()) > 60 * std::log(10.0L) ? input : minimal_model(input);
        LSeriesConfig cfg;
        cfg.conductor = N.N;
        cfg.epsilon = opts->epsilon;
        cfg.cutoff = opts->cutoff;
        CentralValue v = central_value(E, cfg);
        ojson j = {{"conductor", N.N},
                   {"conductor_source", N.source},
                   {"model", coefficients_json(E)},
                   {"epsilon", v.epsilon == 0 ? ojson(nullptr) : ojson(v.epsilon)},
                   {"detected", v.detected},
                   {"inconclusive", v.inconclusive},
                   {"L1", num(v.L1)},
                   {"L1prime", num(v.L1prime)},
                   {"drift_plus", num(v.drift_plus)},
                   {"drift_minus", num(v.drift_minus)},
                   {"cutoff", v.cutoff}};
        if (N.source == "heuristic")
            j["warning"] = "HEURISTIC conductor; unreliable at 2 and 3";
        else if (N.source == "search")
            j["warning"] = "HEURISTIC conductor chosen by functional-equation stability over exponents at 2 and 3";
        if (opts->leading && !v.inconclusive) {
            std::vector<Point> gens;
            if (RegistryEntry const *e = reg.find_curve(E); e && e->curve == E)
                gens = e->generators;
            auto r = leading_coefficient_report(E, cfg, gens);
            j["leading"] = {{"rank", r.rank},
                            {"regulator", num(r.regulator)},
                            {"torsion_order", r.torsion_order},
                            {"omega", num(r.omega)},
                            {"real_components", r.real_components},
                            {"c0", r.c0 ? num(*r.c0) : ojson(nullptr)},
                            {"residual_ratio", r.residual_ratio ? num(*r.residual_ratio) : ojson(nullptr)}};
        }
        return emit(out, dump(j), v.inconclusive ? ELLQ_E_INCONCLUSIVE : ELLQ_OK);
    });
}

ellq_status ellq_bsd_test(const ellq_curve *curve, uint64_t xmax, unsigned jobs, int format, char **out,
                          char **summary)
{
    return guarded([&] {
        require(curve && out, "null argument");
        require(xmax >= 100 && xmax <= 1000000000ULL, "xmax must lie in [100, 1e9]");
        int f = format_or(format, ELLQ_FORMAT_JSON);
        only_formats(f, {ELLQ_FORMAT_CSV, ELLQ_FORMAT_JSON});
        BsdProductTrace t = bsd_product(curve->curve, xmax, std::max(1u, jobs));
        ojson sum = {{"xmax", xmax}, {"checkpoints", t.x.size()}, {"slope", num(t.slope)}, {"C", num(t.constant)}};
        if (summary)
            *summary = dup(sum.dump() + "\n");
        if (f == ELLQ_FORMAT_CSV) {
            std::string s = "x,product,loglog_x\n";
            for (std::size_t i = 0; i < t.x.size(); ++i)
                s += text(t.x[i]) + "," + text(t.product[i]) + "," + text(t.loglog[i]) + "\n";
            return emit(out, s);
        }
        ojson rows = ojson::array();
        for (std::size_t i = 0; i < t.x.size(); ++i)
            rows.push_back({{"x", num(t.x[i])}, {"product", num(t.product[i])}, {"loglog_x", num(t.loglog[i])}});
        sum["rows"] = rows;
        return emit(out, dump(sum));
    });
}

ellq_status ellq_height(const ellq_curve *curve, const char *point, char **out)
{
    return guarded([&] {
        require(curve && point && out, "null argument");
        Curve const &E = curve->curve;
        Point P = parse_point(point);
        E.require_on_curve(P);
        int order = torsion_order(E, P);
        double h = order != 0 ? 0.0 : canonical_height(E, P);
        ojson j = {{"point", point_json(P)},
                   {"naive", num(point_height(P))},
                   {"canonical", num(h)},
                   {"torsion_order", order == 0 ? ojson(nullptr) : ojson(order)}};
        return emit(out, dump(j));
    });
}

void ellq_heegner_options_init(ellq_heegner_options *opts)
{
    if (opts)
        *opts = ellq_heegner_options{0, 0, -1, 0, -1, 0, 0};
}

ellq_status ellq_heegner(const ellq_curve *curve, const ellq_registry *registry, const ellq_heegner_options *opts,
                         char **out)
{
    return guarded([&] {
        require(curve && opts && out, "null argument");
        require(opts->disc < 0, "--disc must be a negative discriminant");
        Curve const &E = curve->curve;
        Conductor N = need_conductor(E, registry_of(registry), opts->conductor, false);
        long long r = opts->res;
        if (r < 0) {
            auto res = heegner_residue(N.N, opts->disc);
            if (!res)
                throw domain_error("D is not a square modulo 4N");
            r = *res;
        }
        HeegnerResult h = heegner_point(E, N.N, opts->disc, r, opts->terms);
        ojson forms = ojson::array();
        for (auto const &q : h.system.forms)
            forms.push_back(q.to_string());
        ojson j = {{"conductor", N.N},
                   {"disc", opts->disc},
                   {"res", r},
                   {"class_number", h.system.class_number()},
                   {"u", h.system.u},
                   {"forms", forms},
                   {"w", cplx_json(h.w)},
                   {"complex", complex_point_json(h.point)},
                   {"snapped", h.snapped ? point_json(*h.snapped) : ojson(nullptr)},
                   {"height", h.snapped ? num(h.height) : ojson(nullptr)},
                   {"torsion", h.torsion}};
        return emit(out, dump(j), h.snapped ? ELLQ_OK : ELLQ_E_INCONCLUSIVE);
    });
}

ellq_status ellq_gz_test(const ellq_curve *curve, const ellq_registry *registry, const ellq_heegner_options *opts,
                         char **out)
{
    return guarded([&] {
        require(curve && opts && out, "null argument");
        require(opts->disc < 0 && opts->disc2 < 0, "--disc and --disc2 must be negative discriminants");
        require(opts->epsilon == 0 || opts->epsilon == 1 || opts->epsilon == -1, "epsilon must be +1, -1 or 0");
        Curve const &E = curve->curve;
        Registry const &reg = registry_of(registry);
        Conductor N = need_conductor(E, reg, opts->conductor, false);
        auto residue = [&](long long D, long long given) {
            if (given >= 0)
                return given;
            auto res = heegner_residue(N.N, D);
            if (!res)
                throw domain_error("D = " + std::to_string(D) + " is not a square modulo 4N");
            return *res;
        };
        long long r1 = residue(opts->disc, opts->res), r2 = residue(opts->disc2, opts->res2);
        int eps = opts->epsilon;
        if (eps == 0)
            if (RegistryEntry const *e = reg.find_curve(E); e && e->conductor == N.N)
                eps = e->epsilon;
        if (eps == 0) {
            LSeriesConfig cfg;
            cfg.conductor = N.N;
            CentralValue v = central_value(E, cfg);
            if (v.inconclusive)
                throw domain_error("root number not detected; pass --eps");
            eps = v.epsilon;
        }
        GrossZagierOptions gopts;
        gopts.terms = opts->terms;
        GrossZagierReport g = gross_zagier_ratio_test(E, N.N, eps, opts->disc, r1, opts->disc2, r2, gopts);
        auto side = [](GrossZagierSide const &s) {
            return ojson{{"disc", s.D},
                         {"res", s.r},
                         {"u", s.u},
                         {"twisted_L1", num(s.twisted_L1)},
                         {"height", num(s.height)},
                         {"point", s.point ? point_json(*s.point) : ojson(nullptr)}};
        };
        ojson j = {{"conductor", N.N},
                   {"epsilon", eps},
                   {"first", side(g.first)},
                   {"second", side(g.second)},
                   {"lhs", num(g.lhs)},
                   {"rhs", num(g.rhs)},
                   {"discrepancy", num(g.discrepancy)},
                   {"collinearity", num(g.collinearity)},
                   {"vacuous", g.vacuous},
                   {"note", g.note}};
        return emit(out, dump(j), g.vacuous ? ELLQ_E_INCONCLUSIVE : ELLQ_OK);
    });
}

ellq_status ellq_family_scan(uint64_t X, const char *stat, uint64_t xmax, unsigned jobs, int format, char **out,
                             char **summary)
{
    return guarded([&] {
        require(stat && out, "null argument");
        require(X >= 4 && X <= 100000000000ULL, "X must lie in [4, 1e11]");
        int f = format_or(format, ELLQ_FORMAT_JSON);
        only_formats(f, {ELLQ_FORMAT_CSV, ELLQ_FORMAT_JSON});
        FamilyStat st = parse_family_stat(stat, std::max<uint64_t>(xmax, 100));
        FamilySlice slice = enumerate_family(X);
        if (slice.curves.empty())
            throw domain_error("empty family slice");
        std::vector<double> values = evaluate(slice, st.phi, std::max(1u, jobs));
        std::vector<mpz_class> heights;
        for (auto const &E : slice.curves)
            heights.push_back(curve_height(E));

        std::vector<uint64_t> cutoffs;
        for (uint64_t c = 100; c < X; c *= 10)
            cutoffs.push_back(c);
        cutoffs.push_back(X);
        ojson seq = ojson::array();
        double total = 0;
        for (uint64_t c : cutoffs) {
            mpz_class bound(std::to_string(c));
            std::size_t count = 0;
            double sum = 0;
            for (std::size_t i = 0; i < values.size(); ++i)
                if (heights[i] < bound) {
                    ++count;
                    sum += values[i];
                }
            if (count == 0)
                continue;
            seq.push_back({{"X", c}, {"count", count}, {"average", num(sum / static_cast<double>(count))}});
            if (c == X)
                total = sum;
        }
        ojson sum = {{"X", X},
                     {"stat", st.name},
                     {"count", slice.curves.size()},
                     {"average", num(total / static_cast<double>(slice.curves.size()))},
                     {"sequence", seq}};
        if (summary)
            *summary = dup(sum.dump() + "\n");
        if (f == ELLQ_FORMAT_CSV) {
            std::string s = "A,B,height,value\n";
            for (std::size_t i = 0; i < values.size(); ++i)
                s += exact(slice.curves[i].a4()) + "," + exact(slice.curves[i].a6()) + "," + exact(heights[i]) +
                     "," + text(values[i]) + "\n";
            return emit(out, s);
        }
        ojson rows = ojson::array();
        for (std::size_t i = 0; i < values.size(); ++i)
            rows.push_back({{"A", exact(slice.curves[i].a4())},
                            {"B", exact(slice.curves[i].a6())},
                            {"height", exact(heights[i])},
                            {"value", num(values[i])}});
        sum["rows"] = rows;
        return emit(out, dump(sum));
    });
}

void ellq_orbit_options_init(ellq_orbit_options *opts)
{
    if (opts)
        *opts = ellq_orbit_options{100, 1, 0, 0, 1};
}

ellq_status ellq_orbit(const char *op, const char *const *args, size_t nargs, const ellq_orbit_options *opts,
                       int format, char **out)
{
    return guarded([&] {
        require(op && opts && out && (nargs == 0 || args), "null argument");
        std::string o = op;
        std::vector<std::string> a;
        for (size_t i = 0; i < nargs; ++i) {
            require(args[i], "null argument");
            a.emplace_back(args[i]);
        }
        auto want = [&](std::size_t n) {
            if (a.size() != n)
                throw std::invalid_argument("orbit " + o + " takes " + std::to_string(n) + " numbers");
        };
        auto lie = [&] {
            want(3);
            return LieD{parse_double(a[0]), parse_double(a[1]), parse_double(a[2])};
        };
        bool sampled = o == "sample-cone" || o == "image-set";
        int f = format_or(format, sampled ? ELLQ_FORMAT_JSON : ELLQ_FORMAT_TEXT);

        if (o == "classify") {
            only_formats(f, {ELLQ_FORMAT_TEXT, ELLQ_FORMAT_JSON});
            want(3);
            LieQ F{parse_exact(a[0]), parse_exact(a[1]), parse_exact(a[2])};
            auto c = classify(F);
            if (f == ELLQ_FORMAT_TEXT)
                return emit(out, to_string(c.tag) + " " + exact(c.delta) + "\n");
            return emit(out, dump({{"tag", to_string(c.tag)}, {"delta", exact(c.delta)}}));
        }
        if (o == "exp") {
            only_formats(f, {ELLQ_FORMAT_TEXT, ELLQ_FORMAT_JSON});
            GroupD g = exp_map(lie());
            if (f == ELLQ_FORMAT_TEXT)
                return emit(out, text(g.a) + " " + text(g.b) + " " + text(g.c) + " " + text(g.d) + "\n");
            return emit(out, dump({{"matrix", {num(g.a), num(g.b), num(g.c), num(g.d)}}, {"det", num(g.det())}}));
        }
        if (o == "omega") {
            only_formats(f, {ELLQ_FORMAT_TEXT, ELLQ_FORMAT_JSON});
            cplxd t = omega(lie());
            if (f == ELLQ_FORMAT_TEXT)
                return emit(out, text(t.real()) + " " + text(t.imag()) + "\n");
            return emit(out, dump(cplx_json(t)));
        }
        if (o == "omega-inv") {
            only_formats(f, {ELLQ_FORMAT_TEXT, ELLQ_FORMAT_JSON});
            want(2);
            OmegaInverse inv = omega_inverse_nilpotent({parse_double(a[0]), parse_double(a[1])}, opts->branch);
            LieD const &F = inv.element;
            if (f == ELLQ_FORMAT_TEXT)
                return emit(out, text(F.x) + " " + text(F.y) + " " + text(F.z) + "\n");
            return emit(out, dump({{"x", num(F.x)},
                                   {"y", num(F.y)},
                                   {"z", num(F.z)},
                                   {"residual", num(inv.residual)},
                                   {"branch", inv.branch}}));
        }
        if (sampled) {
            only_formats(f, {ELLQ_FORMAT_CSV, ELLQ_FORMAT_JSON});
            want(0);
            require(opts->n >= 1 && opts->n <= 10000000, "--n must lie in [1, 1e7]");
            std::vector<std::pair<std::string, ConeSample>> rows;
            if (o == "sample-cone") {
                for (auto const &s : sample_cone(opts->n, opts->seed, opts->sign))
                    rows.emplace_back("", s);
            } else {
                auto sets = cone_sets(opts->k);
                char const *names[3] = {"X", "Y", "Z"};
                for (int i = 0; i < 3; ++i)
                    for (auto const &s : image_sample(sets[i], opts->n, opts->seed))
                        rows.emplace_back(names[i], s);
            }
            bool labelled = o == "image-set";
            if (f == ELLQ_FORMAT_CSV) {
                std::string s = labelled ? "set,x,y,z,re_omega,im_omega\n" : "x,y,z,re_omega,im_omega\n";
                for (auto const &[name, r] : rows)
                    s += (labelled ? name + "," : std::string()) + text(r.element.x) + "," + text(r.element.y) +
                         "," + text(r.element.z) + "," + text(r.image.real()) + "," + text(r.image.imag()) + "\n";
                return emit(out, s);
            }
            ojson list = ojson::array();
            for (auto const &[name, r] : rows) {
                ojson row;
                if (labelled)
                    row["set"] = name;
                row["x"] = num(r.element.x);
                row["y"] = num(r.element.y);
                row["z"] = num(r.element.z);
                row["omega"] = cplx_json(r.image);
                list.push_back(row);
            }
            return emit(out, dump({{"op", o}, {"seed", opts->seed}, {"rows", list}}));
        }
        throw std::invalid_argument("unknown orbit operation '" + o + "'");
    });
}

ellq_status ellq_cm_verify(size_t terms, int format, char **out)
{
    return guarded([&] {
        require(out, "null argument");
        require(terms >= 1 && terms <= 1000, "terms must lie in [1, 1000]");
        int f = format_or(format, ELLQ_FORMAT_TEXT);
        only_formats(f, {ELLQ_FORMAT_TEXT, ELLQ_FORMAT_JSON});
        CMTableReport rep = cm_table_verify(terms);
        ellq_status st = rep.pass ? ELLQ_OK : ELLQ_E_INCONCLUSIVE;
        if (f == ELLQ_FORMAT_TEXT) {
            std::string s;
            for (auto const &r : rep.rows)
                s += std::string(r.pass ? "PASS" : "FAIL") + " alpha_" + std::to_string(r.point.index) +
                     " tau=" + r.point.tau_string() + " j=" + r.point.j_string() +
                     " computed=" + text(static_cast<double>(r.computed.real())) +
                     (r.absolute ? " abs_error=" : " rel_error=") + text(r.error) + "\n";
            return emit(out, s, st);
        }
        ojson rows = ojson::array();
        for (auto const &r : rep.rows)
            rows.push_back({{"index", r.point.index},
                            {"tau", r.point.tau_string()},
                            {"j", exact(r.point.j)},
                            {"j_factored", r.point.j_string()},
                            {"computed", cplx_json(r.computed)},
                            {"error", num(r.error)},
                            {"tail_bound", num(r.tail)},
                            {"absolute", r.absolute},
                            {"pass", r.pass}});
        ojson j = {{"terms", rep.terms},
                   {"relative_tolerance", num(rep.relative_tolerance)},
                   {"absolute_tolerance", num(rep.absolute_tolerance)},
                   {"pass", rep.pass},
                   {"rows", rows}};
        return emit(out, dump(j), st);
    });
}

ellq_status ellq_jj(double tau_re, double tau_im, size_t terms, char **out)
{
    return guarded([&] {
        require(out, "null argument");
        require(terms >= 1 && terms <= 1000, "terms must lie in [1, 1000]");
        require(tau_im > 0, "tau must lie in the upper half plane");
        cplxl tau(tau_re, tau_im);
        JValue v = j_value(tau, terms);
        ojson j = {{"tau", cplx_json(tau)},
                   {"reduced_tau", cplx_json(reduce_to_fundamental(tau))},
                   {"j", cplx_json(v.value)},
                   {"terms", v.terms},
                   {"tail_bound", num(v.tail)}};
        return emit(out, dump(j));
    });
}

void ellq_conjecture_options_init(ellq_conjecture_options *opts)
{
    if (opts)
        *opts = ellq_conjecture_options{1, 100000, 1, 0, 10000, 1e-8};
}

ellq_status ellq_conjecture(int k, const char *set, size_t budget, const ellq_registry *registry,
                            const ellq_conjecture_options *opts, int format, char **out)
{
    return guarded([&] {
        require(set && opts && out, "null argument");
        require(budget >= 1 && budget <= 100000, "budget must lie in [1, 1e5]");
        require(opts->max_den >= 1 && opts->residual > 0, "max_den and residual must be positive");
        std::string sname = set;
        HarnessSet hs;
        if (sname == "orbit")
            hs = HarnessSet::orbit;
        else if (sname == "X")
            hs = HarnessSet::X;
        else if (sname == "Y")
            hs = HarnessSet::Y;
        else if (sname == "Z")
            hs = HarnessSet::Z;
        else
            throw std::invalid_argument("--set must be orbit, X, Y or Z");
        int f = format_or(format, ELLQ_FORMAT_JSON);
        only_formats(f, {ELLQ_FORMAT_CSV, ELLQ_FORMAT_JSON});
        Registry const &reg = registry_of(registry);
        HarnessOptions h;
        h.seed = opts->seed;
        h.xmax = opts->xmax;
        h.jobs = std::max(1u, opts->jobs);
        h.twists = opts->twists != 0;
        h.max_den = opts->max_den;
        h.residual = opts->residual;
        h.conductor_lookup = [&reg](Curve const &E) -> std::optional<long long> {
            if (RegistryEntry const *e = reg.find_curve(E))
                return e->conductor;
            return std::nullopt;
        };
        HarnessReport rep = conjecture_harness(k, hs, budget, h);
        bool undecided = rep.evidence.empty();
        for (auto const &e : rep.evidence)
            if (e.verdict == Verdict::inconclusive)
                undecided = true;
        ellq_status st = undecided ? ELLQ_E_INCONCLUSIVE : ELLQ_OK;

        if (f == ELLQ_FORMAT_CSV) {
            std::string s = "sample,tau_re,tau_im,j_re,j_im,snapped\n";
            for (std::size_t i = 0; i < rep.samples.size(); ++i) {
                auto const &smp = rep.samples[i];
                s += std::to_string(i) + "," + text(smp.tau.real()) + "," + text(smp.tau.imag()) + "," +
                     text(static_cast<double>(smp.j.real())) + "," + text(static_cast<double>(smp.j.imag())) + "," +
                     (smp.snapped ? exact(*smp.snapped) : std::string()) + "\n";
            }
            return emit(out, s, st);
        }
        ojson samples = ojson::array();
        for (auto const &smp : rep.samples)
            samples.push_back({{"tau", cplx_json(smp.tau)},
                               {"j", cplx_json(smp.j)},
                               {"snapped", smp.snapped ? ojson(exact(*smp.snapped)) : ojson(nullptr)},
                               {"snap_residual", smp.snapped ? num(smp.snap_residual) : ojson(nullptr)}});
        ojson evidence = ojson::array();
        for (auto const &e : rep.evidence) {
            ojson c = nullptr;
            if (e.central)
                c = {{"L1", num(e.central->L1)},
                     {"L1prime", num(e.central->L1prime)},
                     {"epsilon", e.central->epsilon == 0 ? ojson(nullptr) : ojson(e.central->epsilon)}};
            evidence.push_back(
                {{"sample", e.sample},
                 {"twist", e.twist},
                 {"j", exact(e.j)},
                 {"coefficients", coefficients_json(e.curve)},
                 {"torsion", e.torsion ? ojson(to_string(*e.torsion)) : ojson(nullptr)},
                 {"slope", e.slope ? num(*e.slope) : ojson(nullptr)},
                 {"conductor", e.conductor ? ojson(e.conductor->N) : ojson(nullptr)},
                 {"conductor_source", e.conductor ? ojson(e.conductor->source) : ojson(nullptr)},
                 {"central", c},
                 {"analytic_rank", e.analytic_rank ? ojson(*e.analytic_rank) : ojson(nullptr)},
                 {"rank_is_lower_bound", e.rank_is_lower_bound},
                 {"verdict", to_string(e.verdict)},
                 {"note", e.note}});
        }
        ojson j = {{"header", rep.header},
                   {"interpretation", rep.interpretation},
                   {"k", rep.index},
                   {"set", to_string(rep.set)},
                   {"budget", rep.budget},
                   {"seed", opts->seed},
                   {"samples", samples},
                   {"evidence", evidence}};
        return emit(out, dump(j), st);
    });
}

} // extern "C"
