#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ellq/ellq.h"

namespace
{

struct Globals
{
    bool csv = false;
    bool json = false;
    bool strict = false;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::string registry;
};

Globals g;

int format()
{
    if (g.csv)
        return ELLQ_FORMAT_CSV;
    if (g.json)
        return ELLQ_FORMAT_JSON;
    return ELLQ_FORMAT_DEFAULT;
}

struct Owned
{
    void operator()(char *s) const { ellq_string_free(s); }
};

using OwnedString = std::unique_ptr<char, Owned>;

// Accepts integral counts in scientific notation such as 1e6.
CLI::Validator const Count(
    [](std::string &s) -> std::string {
        if (s.find_first_of("eE") == std::string::npos)
            return "";
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (std::exception const &) {
            return "not a count: " + s;
        }
        if (used != s.size() || !(v >= 0) || v > 9007199254740992.0 || v != std::floor(v))
            return "not a count: " + s;
        s = std::to_string(static_cast<std::uint64_t>(v));
        return "";
    },
    "COUNT");

int report_error(ellq_status st)
{
    std::fprintf(stderr, "ellq: %s\n", ellq_last_error());
    return st == ELLQ_E_INTERNAL ? 4 : st;
}

// Prints the output of a command and maps its status to an exit code.
int finish(ellq_status st, char **out, char **summary = nullptr)
{
    OwnedString o(*out), s(summary ? *summary : nullptr);
    if (st != ELLQ_OK && st != ELLQ_E_INCONCLUSIVE)
        return report_error(st);
    if (o)
        std::fputs(o.get(), stdout);
    if (s && g.csv)
        std::fputs(s.get(), stderr);
    if (st == ELLQ_E_INCONCLUSIVE) {
        std::fprintf(stderr, "ellq: result inconclusive\n");
        return g.strict ? ELLQ_E_INCONCLUSIVE : 0;
    }
    return 0;
}

struct Handles
{
    ellq_registry *registry = nullptr;
    ellq_curve *curve = nullptr;
    ~Handles()
    {
        ellq_curve_free(curve);
        ellq_registry_free(registry);
    }
};

ellq_status open_registry(Handles &h)
{
    if (g.registry.empty())
        return ellq_registry_builtin(&h.registry);
    return ellq_registry_load(g.registry.c_str(), &h.registry);
}

ellq_status open_curve(Handles &h, std::string const &spec)
{
    ellq_status st = open_registry(h);
    if (st != ELLQ_OK)
        return st;
    return ellq_curve_parse(spec.c_str(), h.registry, &h.curve);
}

bool split_pair(std::string const &text, double &a, double &b)
{
    std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        return false;
    try {
        std::size_t u1 = 0, u2 = 0;
        std::string l = text.substr(0, comma), r = text.substr(comma + 1);
        a = std::stod(l, &u1);
        b = std::stod(r, &u2);
        return u1 == l.size() && u2 == r.size();
    } catch (std::exception const &) {
        return false;
    }
}

int usage(char const *msg)
{
    std::fprintf(stderr, "ellq: %s\n", msg);
    return 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Elliptic curves over Q: arithmetic, L-series, Heegner points, SL(2,R) orbits and CM values"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ellq_version()));
    app.add_flag("--csv", g.csv, "CSV output");
    app.add_flag("--json", g.json, "JSON output");
    app.add_flag("--strict", g.strict, "exit 3 when a result is inconclusive");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--registry", g.registry, "registry file replacing the built-in one");

    std::function<int()> run;
    std::string curve;
    auto curve_arg = [&](CLI::App *sub) {
        sub->add_option("curve", curve, "\"A,B\", \"a1,a2,a3,a4,a6\" or @name")->required();
    };

    auto *torsion = app.add_subcommand("torsion", "torsion subgroup");
    curve_arg(torsion);
    torsion->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            char *out = nullptr;
            return finish(ellq_torsion(h.curve, &out), &out);
        };
    });

    std::uint64_t pmax = 100;
    auto *ap = app.add_subcommand("ap", "a_p and reduction type for p <= pmax");
    curve_arg(ap);
    ap->add_option("--pmax", pmax, "largest prime");
    ap->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            char *out = nullptr;
            return finish(ellq_ap(h.curve, pmax, format(), &out), &out);
        };
    });

    std::string s_text = "2,0";
    std::size_t terms = 0;
    auto *lseries = app.add_subcommand("lseries", "Dirichlet partial sum of L(E,s) for Re s > 3/2");
    curve_arg(lseries);
    lseries->add_option("--s", s_text, "re,im");
    lseries->add_option("--terms", terms, "number of a_n terms (default 1000)");
    lseries->callback([&] {
        run = [&] {
            double re = 0, im = 0;
            if (!split_pair(s_text, re, im))
                return usage("--s must be re,im");
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            char *out = nullptr;
            return finish(ellq_lseries(h.curve, re, im, terms == 0 ? 1000 : terms, &out), &out);
        };
    });

    long long conductor = 0;
    int eps = 0;
    bool heuristic = false, leading = false;
    auto *lvalue = app.add_subcommand("lvalue", "smoothed L(E,1) and L'(E,1)");
    curve_arg(lvalue);
    lvalue->add_option("--conductor", conductor, "conductor (default: registry)");
    lvalue->add_option("--eps", eps, "root number +1 or -1 (default: detect)");
    lvalue->add_option("--terms", terms, "cutoff (default: from the conductor)");
    lvalue->add_flag("--heuristic-conductor", heuristic, "fall back to the bad-prime heuristic");
    lvalue->add_flag("--leading", leading, "leading-coefficient ingredients");
    lvalue->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            ellq_lvalue_options o;
            ellq_lvalue_options_init(&o);
            o.conductor = conductor;
            o.epsilon = eps;
            o.cutoff = terms;
            o.heuristic_conductor = heuristic;
            o.leading = leading;
            char *out = nullptr;
            return finish(ellq_lvalue(h.curve, h.registry, &o, &out), &out);
        };
    });

    std::uint64_t xmax = 100000;
    auto *bsd = app.add_subcommand("bsd-test", "product of (N(p)+1)/p against log log x");
    curve_arg(bsd);
    bsd->add_option("--xmax", xmax, "largest prime bound")->transform(Count);
    bsd->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            char *out = nullptr, *summary = nullptr;
            st = ellq_bsd_test(h.curve, xmax, g.jobs, format(), &out, &summary);
            return finish(st, &out, &summary);
        };
    });

    std::string point;
    auto *height = app.add_subcommand("height", "naive and canonical height of a point");
    curve_arg(height);
    height->add_option("point", point, "x,y with rational coordinates")->required();
    height->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            char *out = nullptr;
            return finish(ellq_height(h.curve, point.c_str(), &out), &out);
        };
    });

    ellq_heegner_options hopts;
    ellq_heegner_options_init(&hopts);
    auto heegner_flags = [&](CLI::App *sub) {
        sub->add_option("--conductor", hopts.conductor, "conductor (default: registry)");
        sub->add_option("--disc", hopts.disc, "negative discriminant")->required();
        sub->add_option("--res", hopts.res, "residue r with r^2 = D mod 4N (default: smallest)");
        sub->add_option("--terms", hopts.terms, "q-expansion terms (default: automatic)");
    };
    auto *heegner = app.add_subcommand("heegner", "Heegner point for a discriminant");
    curve_arg(heegner);
    heegner_flags(heegner);
    heegner->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            char *out = nullptr;
            return finish(ellq_heegner(h.curve, h.registry, &hopts, &out), &out);
        };
    });

    auto *gz = app.add_subcommand("gz-test", "Gross-Zagier ratio test across two discriminants");
    curve_arg(gz);
    heegner_flags(gz);
    gz->add_option("--disc2", hopts.disc2, "second negative discriminant")->required();
    gz->add_option("--res2", hopts.res2, "residue for the second discriminant");
    gz->add_option("--eps", hopts.epsilon, "root number (default: registry or detection)");
    gz->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_curve(h, curve);
            if (st != ELLQ_OK)
                return report_error(st);
            char *out = nullptr;
            return finish(ellq_gz_test(h.curve, h.registry, &hopts, &out), &out);
        };
    });

    std::uint64_t X = 1000;
    std::string stat = "torsion";
    std::uint64_t family_xmax = 10000;
    auto *family = app.add_subcommand("family-scan", "statistics over curves of height below X");
    family->add_option("--X", X, "height bound")->transform(Count);
    family->add_option("--stat", stat, "torsion, ap:<p> or slope");
    family->add_option("--xmax", family_xmax, "prime bound for the slope statistic")->transform(Count);
    family->callback([&] {
        run = [&] {
            char *out = nullptr, *summary = nullptr;
            ellq_status st = ellq_family_scan(X, stat.c_str(), family_xmax, g.jobs, format(), &out, &summary);
            return finish(st, &out, &summary);
        };
    });

    std::string op;
    std::vector<std::string> numbers;
    ellq_orbit_options oopts;
    ellq_orbit_options_init(&oopts);
    auto *orbit = app.add_subcommand("orbit", "sl(2,R) elements: classify, exp, omega, omega-inv, sample-cone, "
                                              "image-set");
    orbit->add_option("op", op, "operation")->required();
    orbit->add_option("numbers", numbers, "x y z, or re im for omega-inv");
    orbit->add_option("--n", oopts.n, "samples");
    orbit->add_option("--branch", oopts.branch, "omega-inv root: +1 or -1 (default: smaller |x|)");
    orbit->add_option("--sign", oopts.sign, "sample-cone: +1 or -1 for one cone");
    orbit->add_option("--k", oopts.k, "image-set: CM point index");
    orbit->callback([&] {
        run = [&] {
            oopts.seed = g.seed;
            std::vector<char const *> args;
            for (auto const &n : numbers)
                args.push_back(n.c_str());
            char *out = nullptr;
            return finish(ellq_orbit(op.c_str(), args.data(), args.size(), &oopts, format(), &out), &out);
        };
    });

    std::size_t cm_terms = 40;
    auto *cm = app.add_subcommand("cm-verify", "j at the thirteen class-number-one CM points");
    cm->add_option("--terms", cm_terms, "q-expansion terms");
    cm->callback([&] {
        run = [&] {
            char *out = nullptr;
            return finish(ellq_cm_verify(cm_terms, format(), &out), &out);
        };
    });

    std::string tau_text;
    std::size_t j_terms = 60;
    auto *jj = app.add_subcommand("jj", "j(tau) from its q-expansion");
    jj->add_option("--tau", tau_text, "re,im")->required();
    jj->add_option("--terms", j_terms, "q-expansion terms");
    jj->callback([&] {
        run = [&] {
            double re = 0, im = 0;
            if (!split_pair(tau_text, re, im))
                return usage("--tau must be re,im");
            char *out = nullptr;
            return finish(ellq_jj(re, im, j_terms, &out), &out);
        };
    });

    int k = 1;
    std::string set = "orbit";
    std::size_t budget = 8;
    ellq_conjecture_options copts;
    ellq_conjecture_options_init(&copts);
    bool twists = false;
    auto *conj = app.add_subcommand("conjecture", "evidence harness over orbits and image sets of CM points");
    conj->add_option("--k", k, "CM point index 1..13");
    conj->add_option("--set", set, "orbit, X, Y or Z");
    conj->add_option("--budget", budget, "number of sampled tau");
    conj->add_option("--xmax", copts.xmax, "prime bound for the product estimate")->transform(Count);
    conj->add_option("--max-den", copts.max_den, "largest denominator when snapping j");
    conj->add_option("--residual", copts.residual, "relative residual when snapping j");
    conj->add_flag("--twists", twists, "also test twists by -1, 2, -2, 3, -3");
    conj->callback([&] {
        run = [&] {
            Handles h;
            ellq_status st = open_registry(h);
            if (st != ELLQ_OK)
                return report_error(st);
            copts.seed = g.seed;
            copts.jobs = g.jobs;
            copts.twists = twists;
            char *out = nullptr;
            return finish(ellq_conjecture(k, set.c_str(), budget, h.registry, &copts, format(), &out), &out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const &e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const &e) {
        return app.exit(e);
    } catch (CLI::CallForVersion const &e) {
        return app.exit(e);
    } catch (CLI::ParseError const &e) {
        app.exit(e);
        return 1;
    }
    if (g.csv && g.json)
        return usage("--csv and --json are exclusive");
    return run ? run() : usage("no subcommand");
}
