#include "frontlab/config.hpp"

#include "frontlab/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace frontlab {

const TomlValue* TomlTable::find(const std::string& key) const {
    for (const auto& [k, v] : items)
        if (k == key) return &v;
    return nullptr;
}

void TomlTable::set(const std::string& key, TomlValue val) {
    for (auto& [k, v] : items)
        if (k == key) { v = std::move(val); return; }
    items.emplace_back(key, std::move(val));
}

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Splits a line at the first '#' not inside a string literal.
std::string drop_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

TomlValue parse_scalar(const std::string& tok, int line) {
    if (tok == "true") return TomlValue{true};
    if (tok == "false") return TomlValue{false};
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return TomlValue{tok.substr(1, tok.size() - 2)};
    try {
        std::size_t pos = 0;
        const double d = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return TomlValue{d};
    } catch (const std::exception&) {
        throw ConfigError("cannot parse value '" + tok + "'", line);
    }
}

std::vector<std::string> split_csv(const std::string& body) {
    std::vector<std::string> out;
    std::string cur;
    bool in_str = false;
    for (char ch : body) {
        if (ch == '"') in_str = !in_str;
        if (ch == ',' && !in_str) {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    const std::string last = strip(cur);
    if (!last.empty()) out.push_back(last);
    return out;
}

} // namespace

TomlTable toml_parse(const std::string& text) {
    TomlTable t;
    std::istringstream in(text);
    std::string line, prefix;
    int lineno = 0;
    // Multi-line arrays: accumulate until brackets balance.
    std::string pending;
    int pending_line = 0;
    auto bracket_balance = [](const std::string& s) {
        int bal = 0;
        bool in_str = false;
        for (char ch : s) {
            if (ch == '"') in_str = !in_str;
            if (in_str) continue;
            if (ch == '[') ++bal;
            if (ch == ']') --bal;
        }
        return bal;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(drop_comment(line));
        if (!pending.empty()) {
            pending += " " + s;
            if (bracket_balance(pending) > 0) continue;
            s = pending;
            pending.clear();
            lineno = pending_line;
        }
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated table header", lineno);
            prefix = strip(s.substr(1, s.size() - 2));
            if (prefix.empty()) throw ConfigError("empty table name", lineno);
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
        const std::string key = strip(s.substr(0, eq));
        std::string val = strip(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", lineno);
        if (!val.empty() && val.front() == '[' && bracket_balance(s) > 0) {
            pending = s;
            pending_line = lineno;
            continue;
        }
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']') throw ConfigError("unterminated array", lineno);
            const auto toks = split_csv(val.substr(1, val.size() - 2));
            bool strings = false;
            for (const auto& tk : toks)
                if (!tk.empty() && tk.front() == '"') strings = true;
            if (strings) {
                std::vector<std::string> arr;
                for (const auto& tk : toks) {
                    if (tk.size() < 2 || tk.front() != '"' || tk.back() != '"')
                        throw ConfigError("mixed array element types", lineno);
                    arr.push_back(tk.substr(1, tk.size() - 2));
                }
                t.set(full, TomlValue{arr});
            } else {
                std::vector<double> arr;
                for (const auto& tk : toks)
                    arr.push_back(std::get<double>(parse_scalar(tk, lineno).v));
                t.set(full, TomlValue{arr});
            }
        } else {
            t.set(full, parse_scalar(val, lineno));
        }
    }
    if (!pending.empty()) throw ConfigError("unterminated array at end of file", pending_line);
    return t;
}

TomlTable toml_parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return toml_parse(ss.str());
}

namespace {

std::string fmt_double(double d) {
    if (d == std::floor(d) && std::fabs(d) < 1e15) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f", d);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

} // namespace

std::string toml_serialize(const TomlTable& t) {
    // Group flattened keys by table prefix, preserving first-seen order.
    std::vector<std::string> prefixes;
    auto prefix_of = [](const std::string& k) {
        const auto dot = k.rfind('.');
        return dot == std::string::npos ? std::string() : k.substr(0, dot);
    };
    for (const auto& [k, v] : t.items) {
        const std::string p = prefix_of(k);
        bool seen = false;
        for (const auto& q : prefixes) seen = seen || q == p;
        if (!seen) prefixes.push_back(p);
    }
    std::string out;
    for (const auto& p : prefixes) {
        if (!p.empty()) out += "[" + p + "]\n";
        for (const auto& [k, v] : t.items) {
            if (prefix_of(k) != p) continue;
            const std::string leaf = p.empty() ? k : k.substr(p.size() + 1);
            out += leaf + " = ";
            if (std::holds_alternative<bool>(v.v)) {
                out += std::get<bool>(v.v) ? "true" : "false";
            } else if (std::holds_alternative<double>(v.v)) {
                out += fmt_double(std::get<double>(v.v));
            } else if (std::holds_alternative<std::string>(v.v)) {
                out += "\"" + std::get<std::string>(v.v) + "\"";
            } else if (std::holds_alternative<std::vector<double>>(v.v)) {
                out += "[";
                const auto& arr = std::get<std::vector<double>>(v.v);
                for (std::size_t i = 0; i < arr.size(); ++i)
                    out += (i ? ", " : "") + fmt_double(arr[i]);
                out += "]";
            } else {
                out += "[";
                const auto& arr = std::get<std::vector<std::string>>(v.v);
                for (std::size_t i = 0; i < arr.size(); ++i)
                    out += (i ? ", \"" : "\"") + arr[i] + "\"";
                out += "]";
            }
            out += "\n";
        }
        out += "\n";
    }
    return out;
}

// ---- RunConfig ----

namespace {

double num_or(const TomlTable& t, const std::string& key, double dflt) {
    const TomlValue* v = t.find(key);
    if (!v) return dflt;
    if (!v->is_number()) throw ConfigError("expected number for " + key);
    return std::get<double>(v->v);
}

std::string str_or(const TomlTable& t, const std::string& key, const std::string& dflt) {
    const TomlValue* v = t.find(key);
    if (!v) return dflt;
    if (!std::holds_alternative<std::string>(v->v))
        throw ConfigError("expected string for " + key);
    return std::get<std::string>(v->v);
}

std::vector<double> arr_or(const TomlTable& t, const std::string& key,
                           std::vector<double> dflt) {
    const TomlValue* v = t.find(key);
    if (!v) return dflt;
    if (!std::holds_alternative<std::vector<double>>(v->v))
        throw ConfigError("expected numeric array for " + key);
    return std::get<std::vector<double>>(v->v);
}

} // namespace

RunConfig config_from_toml(const TomlTable& t) {
    RunConfig c;
    c.term.kind = str_or(t, "term.kind", c.term.kind);
    c.term.breakpoints = arr_or(t, "term.breakpoints", {});
    // custom pieces: term.coeffs_0, term.coeffs_1, ...
    for (int k = 0;; ++k) {
        const TomlValue* v = t.find("term.coeffs_" + std::to_string(k));
        if (!v) break;
        c.term.coeffs.push_back(std::get<std::vector<double>>(v->v));
    }
    c.mesh.dim = static_cast<int>(num_or(t, "mesh.dim", c.mesh.dim));
    const auto interval = arr_or(t, "mesh.interval", {c.mesh.y_a, c.mesh.y_b});
    if (interval.size() == 2) { c.mesh.y_a = interval[0]; c.mesh.y_b = interval[1]; }
    c.mesh.n_nodes = static_cast<int>(num_or(t, "mesh.n_nodes", c.mesh.n_nodes));
    c.mesh.bc_left = str_or(t, "mesh.bc_left", c.mesh.bc_left);
    c.mesh.bc_right = str_or(t, "mesh.bc_right", c.mesh.bc_right);

    c.grid.dz = num_or(t, "grid.dz", c.grid.dz);
    c.grid.left_lengths = num_or(t, "grid.left_lengths", c.grid.left_lengths);
    c.grid.right_lengths = num_or(t, "grid.right_lengths", c.grid.right_lengths);
    if (t.find("grid.z_min")) c.grid.z_min = num_or(t, "grid.z_min", 0.0);
    if (t.find("grid.z_max")) c.grid.z_max = num_or(t, "grid.z_max", 0.0);

    const auto br = arr_or(t, "speeds.bracket", {c.speeds.bracket_lo, c.speeds.bracket_hi});
    if (br.size() == 2) { c.speeds.bracket_lo = br[0]; c.speeds.bracket_hi = br[1]; }
    c.speeds.tol = num_or(t, "speeds.tol", c.speeds.tol);
    const auto dbr = arr_or(t, "speeds.dag_bracket",
                            {c.speeds.dag_bracket_lo, c.speeds.dag_bracket_hi});
    if (dbr.size() == 2) { c.speeds.dag_bracket_lo = dbr[0]; c.speeds.dag_bracket_hi = dbr[1]; }
    c.speeds.dag_tol = num_or(t, "speeds.dag_tol", c.speeds.dag_tol);
    c.speeds.probe_dz = num_or(t, "speeds.probe_dz", c.speeds.probe_dz);
    c.speeds.probe_z_lo = num_or(t, "speeds.probe_z_lo", c.speeds.probe_z_lo);
    c.speeds.probe_z_hi = num_or(t, "speeds.probe_z_hi", c.speeds.probe_z_hi);

    c.front.c = num_or(t, "front.c", c.front.c);
    const auto band = arr_or(t, "front.band", {c.front.band_lo, c.front.band_hi});
    if (band.size() == 2) { c.front.band_lo = band[0]; c.front.band_hi = band[1]; }
    c.front.w_boundary_scale = num_or(t, "front.w_boundary_scale", c.front.w_boundary_scale);
    c.front.spg_tol = num_or(t, "front.spg_tol", c.front.spg_tol);
    c.front.max_iter = static_cast<int>(num_or(t, "front.max_iter", c.front.max_iter));

    c.census.c_values = arr_or(t, "census.c_values", c.census.c_values);
    c.census.dz = num_or(t, "census.dz", c.census.dz);
    c.census.bscan_samples = static_cast<int>(num_or(t, "census.bscan_samples",
                                                     c.census.bscan_samples));

    c.stability.c = num_or(t, "stability.c", c.stability.c);
    c.stability.c_prime = num_or(t, "stability.c_prime", c.stability.c_prime);
    c.stability.dt = num_or(t, "stability.dt", c.stability.dt);
    c.stability.t_end = num_or(t, "stability.t_end", c.stability.t_end);
    c.stability.amplitude = num_or(t, "stability.amplitude", c.stability.amplitude);
    c.stability.bump_center = num_or(t, "stability.bump_center", c.stability.bump_center);
    c.stability.bump_width = num_or(t, "stability.bump_width", c.stability.bump_width);

    c.out_dir = str_or(t, "output.dir", c.out_dir);
    c.seed = static_cast<long>(num_or(t, "seed", static_cast<double>(c.seed)));
    return c;
}

RunConfig load_config(const std::string& path) { return config_from_toml(toml_parse_file(path)); }

TomlTable config_to_toml(const RunConfig& c) {
    TomlTable t;
    t.set("seed", TomlValue{static_cast<double>(c.seed)});
    t.set("term.kind", TomlValue{c.term.kind});
    if (!c.term.breakpoints.empty()) t.set("term.breakpoints", TomlValue{c.term.breakpoints});
    for (std::size_t k = 0; k < c.term.coeffs.size(); ++k)
        t.set("term.coeffs_" + std::to_string(k), TomlValue{c.term.coeffs[k]});
    t.set("mesh.dim", TomlValue{static_cast<double>(c.mesh.dim)});
    t.set("mesh.interval", TomlValue{std::vector<double>{c.mesh.y_a, c.mesh.y_b}});
    t.set("mesh.n_nodes", TomlValue{static_cast<double>(c.mesh.n_nodes)});
    t.set("mesh.bc_left", TomlValue{c.mesh.bc_left});
    t.set("mesh.bc_right", TomlValue{c.mesh.bc_right});
    t.set("grid.dz", TomlValue{c.grid.dz});
    t.set("grid.left_lengths", TomlValue{c.grid.left_lengths});
    t.set("grid.right_lengths", TomlValue{c.grid.right_lengths});
    if (c.grid.z_min) t.set("grid.z_min", TomlValue{*c.grid.z_min});
    if (c.grid.z_max) t.set("grid.z_max", TomlValue{*c.grid.z_max});
    t.set("speeds.bracket", TomlValue{std::vector<double>{c.speeds.bracket_lo, c.speeds.bracket_hi}});
    t.set("speeds.tol", TomlValue{c.speeds.tol});
    t.set("speeds.dag_bracket",
          TomlValue{std::vector<double>{c.speeds.dag_bracket_lo, c.speeds.dag_bracket_hi}});
    t.set("speeds.dag_tol", TomlValue{c.speeds.dag_tol});
    t.set("speeds.probe_dz", TomlValue{c.speeds.probe_dz});
    t.set("speeds.probe_z_lo", TomlValue{c.speeds.probe_z_lo});
    t.set("speeds.probe_z_hi", TomlValue{c.speeds.probe_z_hi});
    t.set("front.c", TomlValue{c.front.c});
    t.set("front.band", TomlValue{std::vector<double>{c.front.band_lo, c.front.band_hi}});
    t.set("front.w_boundary_scale", TomlValue{c.front.w_boundary_scale});
    t.set("front.spg_tol", TomlValue{c.front.spg_tol});
    t.set("front.max_iter", TomlValue{static_cast<double>(c.front.max_iter)});
    t.set("census.c_values", TomlValue{c.census.c_values});
    t.set("census.dz", TomlValue{c.census.dz});
    t.set("census.bscan_samples", TomlValue{static_cast<double>(c.census.bscan_samples)});
    t.set("stability.c", TomlValue{c.stability.c});
    t.set("stability.c_prime", TomlValue{c.stability.c_prime});
    t.set("stability.dt", TomlValue{c.stability.dt});
    t.set("stability.t_end", TomlValue{c.stability.t_end});
    t.set("stability.amplitude", TomlValue{c.stability.amplitude});
    t.set("stability.bump_center", TomlValue{c.stability.bump_center});
    t.set("stability.bump_width", TomlValue{c.stability.bump_width});
    t.set("output.dir", TomlValue{c.out_dir});
    return t;
}

ReactionTerm make_term(const TermSpec& spec) {
    if (spec.kind == "example61") return ReactionTerm::example61();
    if (spec.kind == "kpp") return ReactionTerm::kpp();
    if (spec.kind == "logistic_half") return ReactionTerm::logistic_half();
    if (spec.kind == "custom") {
        if (spec.breakpoints.size() < 2 || spec.coeffs.size() + 1 != spec.breakpoints.size())
            throw ConfigError("custom term needs n+1 breakpoints for n coefficient rows");
        std::vector<Piece> pieces;
        for (std::size_t k = 0; k < spec.coeffs.size(); ++k)
            pieces.push_back(Piece{spec.breakpoints[k], spec.breakpoints[k + 1],
                                   Polynomial{spec.coeffs[k]}, {}});
        return ReactionTerm(std::move(pieces));
    }
    throw ConfigError("unknown term kind: " + spec.kind);
}

CrossSectionMesh make_mesh(const MeshSpec& spec) {
    if (spec.dim == 0) return CrossSectionMesh::point();
    auto tag = [](const std::string& s) {
        if (s == "dirichlet") return BoundaryTag::Dirichlet;
        if (s == "neumann") return BoundaryTag::Neumann;
        throw ConfigError("boundary tag must be dirichlet or neumann, got " + s);
    };
    return CrossSectionMesh::interval(spec.y_a, spec.y_b, static_cast<std::size_t>(spec.n_nodes),
                                      tag(spec.bc_left), tag(spec.bc_right));
}

} // namespace frontlab
