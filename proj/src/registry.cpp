#include "ellq/registry.hpp"

#include <fstream>
#include <sstream>

#include "ellq/heegner.hpp"
#include "ellq/numtheory.hpp"
#include "registry_data.hpp"

namespace ellq
{

namespace
{

std::string trim(std::string_view s)
{
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos)
        return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

long long parse_ll(std::string const &text, std::string const &what)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (std::exception const &) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw std::invalid_argument("registry: malformed " + what + " '" + text + "'");
    return v;
}

std::vector<Point> parse_points(std::string const &text)
{
    std::vector<Point> out;
    std::size_t pos = 0;
    while ((pos = text.find('(', pos)) != std::string::npos) {
        std::size_t end = text.find(')', pos);
        if (end == std::string::npos)
            throw std::invalid_argument("registry: unbalanced generator list");
        out.push_back(parse_point(text.substr(pos, end - pos + 1)));
        pos = end + 1;
    }
    return out;
}

RegistryEntry parse_record(std::string const &line)
{
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("registry: missing ':' in '" + line + "'");
    RegistryEntry e;
    e.name = trim(std::string_view(line).substr(0, colon));
    if (e.name.empty())
        throw std::invalid_argument("registry: empty name");
    std::vector<std::string> fields;
    std::stringstream ss(line.substr(colon + 1));
    std::string f;
    while (std::getline(ss, f, ';'))
        fields.push_back(trim(f));
    if (fields.empty())
        throw std::invalid_argument("registry: no coefficients for " + e.name);
    Curve model = parse_coefficients(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
        std::string const &fld = fields[i];
        std::size_t eq = fld.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("registry: malformed field '" + fld + "' for " + e.name);
        std::string key = trim(std::string_view(fld).substr(0, eq)), value = trim(std::string_view(fld).substr(eq + 1));
        if (key == "N") {
            long long N = parse_ll(value, "conductor");
            if (N <= 0)
                throw std::invalid_argument("registry: conductor must be positive for " + e.name);
            e.conductor = N;
        } else if (key == "eps") {
            long long s = parse_ll(value, "sign");
            if (s != 1 && s != -1)
                throw std::invalid_argument("registry: eps must be +1 or -1 for " + e.name);
            e.epsilon = static_cast<int>(s);
        } else if (key == "gens") {
            e.generators = parse_points(value);
        } else if (key == "twist") {
            e.twist = parse_ll(value, "twist");
            if (e.twist == 0)
                throw std::invalid_argument("registry: twist must be nonzero for " + e.name);
        } else {
            throw std::invalid_argument("registry: unknown field '" + key + "' for " + e.name);
        }
    }
    if (e.twist != 1) {
        e.base = model;
        e.curve = minimal_model(twist(model, e.twist));
    } else {
        e.curve = model;
    }
    for (auto const &P : e.generators)
        e.curve.require_on_curve(P);
    return e;
}

} // namespace

Registry Registry::parse(std::string_view text)
{
    Registry r;
    std::stringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) {
        std::string t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        RegistryEntry e = parse_record(t);
        if (r.find(e.name))
            throw std::invalid_argument("registry: duplicate name " + e.name);
        r.entries_.push_back(std::move(e));
    }
    return r;
}

Registry Registry::load(std::string const &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("registry: cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Registry const &Registry::builtin()
{
    static Registry const r = parse(builtin_registry_text);
    return r;
}

RegistryEntry const *Registry::find(std::string_view name) const
{
    for (auto const &e : entries_)
        if (e.name == name)
            return &e;
    return nullptr;
}

RegistryEntry const *Registry::find_curve(Curve const &E) const
{
    for (auto const &e : entries_)
        if (e.curve == E)
            return &e;
    if (log_abs(E.discriminant()) > 60 * std::log(10.0L))
        return nullptr;
    Curve m = minimal_model(E);
    mpq_class j = E.j_invariant();
    for (auto const &e : entries_)
        if (e.curve.j_invariant() == j && log_abs(e.curve.discriminant()) <= 60 * std::log(10.0L) &&
            minimal_model(e.curve) == m)
            return &e;
    return nullptr;
}

Curve parse_curve(std::string_view spec, Registry const &registry)
{
    std::string s = trim(spec);
    if (!s.empty() && s.front() == '@') {
        RegistryEntry const *e = registry.find(std::string_view(s).substr(1));
        if (!e)
            throw std::invalid_argument("unknown curve name '" + s.substr(1) + "'");
        return e->curve;
    }
    return parse_coefficients(s);
}

} // namespace ellq
