#include "ghom/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "ghom/errors.hpp"

namespace ghom {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_int(std::int64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

using Store = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string::npos ? pos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& tok, const std::string& key) {
    const std::string t = trim(tok);
    if (t == "inf") return kInf;
    if (t == "-inf") return -kInf;
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("config: " + key + ": cannot parse number '" + t + "'");
    return v;
}

std::int64_t parse_int(const std::string& tok, const std::string& key) {
    const std::string t = trim(tok);
    std::int64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("config: " + key + ": cannot parse integer '" + t + "'");
    return v;
}

int store_dim(const Store& store) {
    const auto it = store.find("grid.dimension");
    return static_cast<int>(parse_int(it->second, "grid.dimension"));
}

std::string canon_vector(const std::string& raw, const std::string& key, int dim) {
    const std::vector<std::string> toks = split(raw, ',');
    if (static_cast<int>(toks.size()) != dim)
        throw ConfigError("config: " + key + ": expected " + format_int(dim) +
                          " components, got " + format_int(static_cast<std::int64_t>(toks.size())));
    std::string out;
    for (int a = 0; a < dim; ++a) {
        if (a) out += ',';
        out += format_double(parse_double(toks[static_cast<std::size_t>(a)], key));
    }
    return out;
}

std::string zeros_vector(int dim, double fill) {
    std::string out;
    for (int a = 0; a < dim; ++a) {
        if (a) out += ',';
        out += format_double(fill);
    }
    return out;
}

std::string unit_vector(int dim) {
    std::string out = "1";
    for (int a = 1; a < dim; ++a) out += ",0";
    return out;
}

// term grammar: func:mode[:coef], e.g. "sin:1" or "cos:2:0.5"
std::string canon_profile(const std::string& raw, const std::string& key) {
    const std::vector<std::string> terms = split(raw, ',');
    if (terms.empty()) throw ConfigError("config: " + key + ": empty profile");
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::vector<std::string> f = split(terms[i], ':');
        if (f.size() != 2 && f.size() != 3)
            throw ConfigError("config: " + key + ": term '" + terms[i] +
                              "' is not func:mode[:coef]");
        if (f[0] != "sin" && f[0] != "cos")
            throw ConfigError("config: " + key + ": unknown function '" + f[0] + "'");
        const std::int64_t mode = parse_int(f[1], key);
        if (mode < 0 || (f[0] == "sin" && mode == 0))
            throw ConfigError("config: " + key + ": mode " + format_int(mode) + " in '" +
                              terms[i] + "' is invalid");
        const double coef = f.size() == 3 ? parse_double(f[2], key) : 1.0;
        if (i) out += ',';
        out += f[0] + ':' + format_int(mode) + ':' + format_double(coef);
    }
    return out;
}

// term grammar: comp:func:k1,..,kd:coef, terms joined by ';'
std::string canon_terms(const std::string& raw, const std::string& key, int dim) {
    const std::vector<std::string> terms = split(raw, ';');
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::vector<std::string> f = split(terms[i], ':');
        if (f.size() != 4)
            throw ConfigError("config: " + key + ": term '" + terms[i] +
                              "' is not comp:func:modes:coef");
        const std::int64_t comp = parse_int(f[0], key);
        if (comp < 0 || comp >= dim)
            throw ConfigError("config: " + key + ": component " + f[0] + " out of range");
        if (f[1] != "sin" && f[1] != "cos")
            throw ConfigError("config: " + key + ": unknown function '" + f[1] + "'");
        const std::vector<std::string> modes = split(f[2], ',');
        if (static_cast<int>(modes.size()) != dim)
            throw ConfigError("config: " + key + ": expected " + format_int(dim) + " modes");
        std::string mv;
        for (int a = 0; a < dim; ++a) {
            if (a) mv += ',';
            mv += format_int(parse_int(modes[static_cast<std::size_t>(a)], key));
        }
        if (i) out += ';';
        out += f[0] + ':' + f[1] + ':' + mv + ':' + format_double(parse_double(f[3], key));
    }
    return out;
}

struct KeyDef {
    const char* name;
    std::function<std::string(const Store&)> fallback;
    std::function<std::string(const std::string&, const Store&)> canon;
};

std::function<std::string(const std::string&, const Store&)> canon_enum(
    std::vector<std::string> choices) {
    return [choices](const std::string& raw, const Store&) {
        const std::string t = trim(raw);
        if (std::find(choices.begin(), choices.end(), t) == choices.end()) {
            std::string msg = "expected one of {";
            for (std::size_t i = 0; i < choices.size(); ++i)
                msg += (i ? ", " : "") + choices[i];
            throw ConfigError("config: got '" + t + "', " + msg + "}");
        }
        return t;
    };
}

std::function<std::string(const std::string&, const Store&)> canon_int_range(
    const char* key, std::int64_t lo, std::int64_t hi) {
    const std::string k = key;
    return [k, lo, hi](const std::string& raw, const Store&) {
        const std::int64_t v = parse_int(raw, k);
        if (v < lo || v > hi)
            throw ConfigError("config: " + k + "=" + format_int(v) + " outside [" +
                              format_int(lo) + ", " + format_int(hi) + "]");
        return format_int(v);
    };
}

std::function<std::string(const std::string&, const Store&)> canon_double_range(
    const char* key, double lo, double hi, bool open_lo, bool open_hi) {
    const std::string k = key;
    return [k, lo, hi, open_lo, open_hi](const std::string& raw, const Store&) {
        const double v = parse_double(raw, k);
        const bool bad_lo = open_lo ? !(v > lo) : !(v >= lo);
        const bool bad_hi = open_hi ? !(v < hi) : !(v <= hi);
        if (bad_lo || bad_hi || std::isnan(v))
            throw ConfigError("config: " + k + "=" + format_double(v) + " outside " +
                              (open_lo ? "(" : "[") + format_double(lo) + ", " +
                              format_double(hi) + (open_hi ? ")" : "]"));
        return format_double(v);
    };
}

std::function<std::string(const std::string&, const Store&)> canon_list(
    const char* key, double lo, double hi, bool allow_empty) {
    const std::string k = key;
    return [k, lo, hi, allow_empty](const std::string& raw, const Store&) {
        const std::vector<std::string> toks = split(raw, ',');
        if (toks.empty()) {
            if (allow_empty) return std::string();
            throw ConfigError("config: " + k + " must not be empty");
        }
        std::string out;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const double v = parse_double(toks[i], k);
            if (!(v >= lo && v <= hi))
                throw ConfigError("config: " + k + " entry " + format_double(v) +
                                  " outside [" + format_double(lo) + ", " + format_double(hi) +
                                  "]");
            if (i) out += ',';
            out += format_double(v);
        }
        return out;
    };
}

std::function<std::string(const std::string&, const Store&)> canon_vec_list(const char* key) {
    const std::string k = key;
    return [k](const std::string& raw, const Store& store) {
        const int dim = store_dim(store);
        const std::vector<std::string> vecs = split(raw, ';');
        if (vecs.empty()) throw ConfigError("config: " + k + " must not be empty");
        std::string out;
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            if (i) out += ';';
            out += canon_vector(vecs[i], k, dim);
        }
        return out;
    };
}

const std::vector<KeyDef>& schema() {
    static const std::vector<KeyDef> defs = {
        {"command", [](const Store&) { return std::string(); },
         [](const std::string& raw, const Store&) { return trim(raw); }},
        {"grid.dimension", [](const Store&) { return std::string("2"); },
         canon_int_range("grid.dimension", 1, kMaxDim)},
        {"grid.resolution", [](const Store&) { return std::string("64"); },
         canon_int_range("grid.resolution", 2, 4096)},
        {"assumptions.chi",
         [](const Store& s) { return format_double(default_chi(store_dim(s))); },
         canon_double_range("assumptions.chi", 0.0, kInf, true, true)},
        {"field.kind", [](const Store&) { return std::string("constant"); },
         canon_enum({"constant", "shear", "cellular", "sink", "trig_poly"})},
        {"field.value", [](const Store& s) { return zeros_vector(store_dim(s), 0.0); },
         [](const std::string& raw, const Store& s) {
             return canon_vector(raw, "field.value", store_dim(s));
         }},
        {"field.axis", [](const Store&) { return std::string("0"); },
         [](const std::string& raw, const Store& s) {
             const std::int64_t v = parse_int(raw, "field.axis");
             if (v < 0 || v >= store_dim(s))
                 throw ConfigError("config: field.axis=" + format_int(v) +
                                   " outside [0, grid.dimension)");
             return format_int(v);
         }},
        {"field.amplitude", [](const Store&) { return std::string("1"); },
         canon_double_range("field.amplitude", -kInf, kInf, true, true)},
        {"field.profile", [](const Store&) { return std::string("sin:1:1"); },
         [](const std::string& raw, const Store&) { return canon_profile(raw, "field.profile"); }},
        {"field.center", [](const Store& s) { return zeros_vector(store_dim(s), 0.5); },
         [](const std::string& raw, const Store& s) {
             return canon_vector(raw, "field.center", store_dim(s));
         }},
        {"field.terms", [](const Store&) { return std::string(); },
         [](const std::string& raw, const Store& s) {
             return canon_terms(raw, "field.terms", store_dim(s));
         }},
        {"metric.stencil_radius", [](const Store&) { return std::string("3"); },
         canon_int_range("metric.stencil_radius", 1, 6)},
        {"metric.eta", [](const Store&) { return std::string("0.1"); },
         canon_double_range("metric.eta", 0.0, 1.0, true, true)},
        {"metric.level", [](const Store&) { return std::string("1"); },
         canon_double_range("metric.level", 0.0, kInf, false, true)},
        {"metric.tilt", [](const Store& s) { return zeros_vector(store_dim(s), 0.0); },
         [](const std::string& raw, const Store& s) {
             return canon_vector(raw, "metric.tilt", store_dim(s));
         }},
        {"metric.truncation", [](const Store&) { return std::string("0"); },
         canon_int_range("metric.truncation", 0, 1 << 20)},
        {"metric.source", [](const Store&) { return std::string("0"); },
         canon_int_range("metric.source", 0, std::numeric_limits<std::int64_t>::max())},
        {"sigma.q", [](const Store& s) { return unit_vector(store_dim(s)); },
         canon_vec_list("sigma.q")},
        {"effective.P", [](const Store& s) { return unit_vector(store_dim(s)); },
         canon_vec_list("effective.P")},
        {"effective.tol", [](const Store&) { return std::string("0.01"); },
         canon_double_range("effective.tol", 0.0, kInf, true, true)},
        {"effective.k_max", [](const Store&) { return std::string("32"); },
         canon_int_range("effective.k_max", 1, 1 << 20)},
        {"effective.directions", [](const Store&) { return std::string("16"); },
         canon_int_range("effective.directions", 8, 65536)},
        {"effective.audit", [](const Store&) { return std::string("false"); },
         canon_enum({"true", "false"})},
        {"solver.epsilon", [](const Store&) { return std::string("0.25"); },
         canon_list("solver.epsilon", 1e-6, 1.0, false)},
        {"solver.T", [](const Store&) { return std::string("0.5"); },
         canon_double_range("solver.T", 0.0, kInf, true, true)},
        {"solver.cfl", [](const Store&) { return std::string("0.5"); },
         canon_double_range("solver.cfl", 0.0, 1.0, true, true)},
        {"solver.resolution", [](const Store&) { return std::string("256"); },
         canon_int_range("solver.resolution", 8, 4096)},
        {"solver.domain", [](const Store&) { return std::string("1"); },
         canon_int_range("solver.domain", 1, 16)},
        {"solver.initial", [](const Store&) { return std::string("cone"); },
         canon_enum({"cone", "smooth", "plateau"})},
        {"solver.centers", [](const Store& s) { return zeros_vector(store_dim(s), 0.5); },
         canon_vec_list("solver.centers")},
        {"solver.cap", [](const Store&) { return std::string("0.25"); },
         canon_double_range("solver.cap", 0.0, kInf, true, false)},
        {"solver.times", [](const Store&) { return std::string(); },
         canon_list("solver.times", 0.0, kInf, true)},
        {"output.directory", [](const Store&) { return std::string("out"); },
         [](const std::string& raw, const Store&) {
             const std::string t = trim(raw);
             if (t.empty()) throw ConfigError("config: output.directory must not be empty");
             return t;
         }},
        {"output.format", [](const Store&) { return std::string("csv"); },
         canon_enum({"csv", "json"})},
        {"output.snapshots", [](const Store&) { return std::string("false"); },
         canon_enum({"true", "false"})},
    };
    return defs;
}

std::vector<TrigTerm> parse_profile_terms(const std::string& canonical, int axis) {
    std::vector<TrigTerm> terms;
    for (const std::string& tok : split(canonical, ',')) {
        const std::vector<std::string> f = split(tok, ':');
        TrigTerm t;
        t.comp = axis;
        t.is_sin = f[0] == "sin";
        t.k = IVec{};
        t.k[0] = parse_int(f[1], "field.profile");
        t.coef = parse_double(f[2], "field.profile");
        terms.push_back(t);
    }
    return terms;
}

std::vector<TrigTerm> parse_poly_terms(const std::string& canonical, int dim) {
    std::vector<TrigTerm> terms;
    for (const std::string& tok : split(canonical, ';')) {
        const std::vector<std::string> f = split(tok, ':');
        TrigTerm t;
        t.comp = static_cast<int>(parse_int(f[0], "field.terms"));
        t.is_sin = f[1] == "sin";
        t.k = IVec{};
        const std::vector<std::string> modes = split(f[2], ',');
        for (int a = 0; a < dim; ++a)
            t.k[a] = parse_int(modes[static_cast<std::size_t>(a)], "field.terms");
        t.coef = parse_double(f[3], "field.terms");
        terms.push_back(t);
    }
    return terms;
}

}  // namespace

void RunConfig::load_text(const std::string& text, const std::string& origin) {
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + origin + ":" + format_int(lineno) +
                              ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: " + origin + ":" + format_int(lineno) + ": empty key");
        if (!seen.insert(key).second)
            throw ConfigError("config: " + origin + ":" + format_int(lineno) +
                              ": duplicate key '" + key + "'");
        store_[key] = value;
    }
    resolved_ = false;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    load_text(buf.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    if (k.empty()) throw ConfigError("config: empty key in override");
    store_[k] = trim(value);
    resolved_ = false;
}

void RunConfig::resolve() {
    std::set<std::string> known;
    for (const KeyDef& def : schema()) {
        known.insert(def.name);
        const auto it = store_.find(def.name);
        if (it == store_.end())
            store_[def.name] = def.fallback(store_);
        else
            it->second = def.canon(it->second, store_);
    }
    std::string unknown;
    for (const auto& [key, value] : store_)
        if (!known.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    if (!unknown.empty()) throw ConfigError("config: unknown keys: " + unknown);
    resolved_ = true;
}

const std::string& RunConfig::raw(const std::string& key) const {
    const auto it = store_.find(key);
    if (it == store_.end()) throw ConfigError("config: no such key '" + key + "'");
    return it->second;
}

std::string RunConfig::get_string(const std::string& key) const { return raw(key); }

bool RunConfig::get_bool(const std::string& key) const { return raw(key) == "true"; }

std::int64_t RunConfig::get_int(const std::string& key) const {
    return parse_int(raw(key), key);
}

double RunConfig::get_double(const std::string& key) const {
    return parse_double(raw(key), key);
}

Vec RunConfig::get_vec(const std::string& key) const {
    const int dim = dimension();
    const std::vector<std::string> toks = split(raw(key), ',');
    Vec v{};
    for (int a = 0; a < dim; ++a) v[a] = parse_double(toks[static_cast<std::size_t>(a)], key);
    return v;
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& tok : split(raw(key), ',')) out.push_back(parse_double(tok, key));
    return out;
}

std::vector<Vec> RunConfig::get_vec_list(const std::string& key) const {
    const int dim = dimension();
    std::vector<Vec> out;
    for (const std::string& vec : split(raw(key), ';')) {
        const std::vector<std::string> toks = split(vec, ',');
        Vec v{};
        for (int a = 0; a < dim; ++a) v[a] = parse_double(toks[static_cast<std::size_t>(a)], key);
        out.push_back(v);
    }
    return out;
}

int RunConfig::dimension() const { return static_cast<int>(get_int("grid.dimension")); }

std::string RunConfig::serialize(const std::string& command) const {
    if (!resolved_) throw ConfigError("config: serialize before resolve");
    std::string out = "# ghom resolved configuration\n";
    for (const KeyDef& def : schema()) {
        const std::string value =
            std::string(def.name) == "command" ? command : store_.at(def.name);
        out += def.name;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

VectorFieldSpec RunConfig::make_field() const {
    const int dim = dimension();
    const std::string kind = get_string("field.kind");
    if (kind == "constant") return VectorFieldSpec::constant(dim, get_vec("field.value"));
    if (kind == "shear") {
        const int axis = static_cast<int>(get_int("field.axis"));
        return VectorFieldSpec::shear(dim, axis, get_double("field.amplitude"),
                                      parse_profile_terms(raw("field.profile"), axis));
    }
    if (kind == "cellular") {
        if (dim != 2) throw ConfigError("config: cellular field requires grid.dimension=2");
        return VectorFieldSpec::cellular(get_double("field.amplitude"));
    }
    if (kind == "sink")
        return VectorFieldSpec::sink(dim, get_double("field.amplitude"), get_vec("field.center"));
    if (raw("field.terms").empty())
        throw ConfigError("config: field.kind=trig_poly requires field.terms");
    return VectorFieldSpec::trig_poly(dim, parse_poly_terms(raw("field.terms"), dim));
}

TorusGrid RunConfig::make_grid() const {
    const int dim = dimension();
    const std::int64_t res = get_int("grid.resolution");
    return TorusGrid(dim, std::vector<std::int64_t>(static_cast<std::size_t>(dim), res));
}

std::vector<std::string> RunConfig::schema_keys() {
    std::vector<std::string> keys;
    for (const KeyDef& def : schema()) keys.push_back(def.name);
    return keys;
}

}  // namespace ghom
