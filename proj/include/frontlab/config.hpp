#pragma once

#include "frontlab/cross_section.hpp"
#include "frontlab/nonlinearity.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace frontlab {

// Minimal TOML subset: [tables], key = value with strings, integers, floats,
// booleans, flat arrays, and '#' comments. Enough for run configs while
// keeping parse -> serialize -> parse an identity.
struct TomlValue {
    std::variant<bool, double, std::string, std::vector<double>, std::vector<std::string>> v;
    bool is_number() const { return std::holds_alternative<double>(v); }
};

struct TomlTable {
    // insertion-ordered keys, "table.key" flattened
    std::vector<std::pair<std::string, TomlValue>> items;
    const TomlValue* find(const std::string& key) const;
    void set(const std::string& key, TomlValue val);
};

TomlTable toml_parse(const std::string& text);
TomlTable toml_parse_file(const std::string& path);
std::string toml_serialize(const TomlTable& t);

// ---- run configuration ----

struct TermSpec {
    std::string kind = "example61";  // example61 | kpp | logistic_half | custom
    std::vector<double> breakpoints;             // custom: piece edges incl 0 and 1
    std::vector<std::vector<double>> coeffs;     // custom: ascending coefficients per piece
    bool operator==(const TermSpec&) const = default;
};

struct MeshSpec {
    int dim = 0;
    double y_a = 0.0, y_b = 1.0;
    int n_nodes = 65;
    std::string bc_left = "dirichlet";
    std::string bc_right = "dirichlet";
    bool operator==(const MeshSpec&) const = default;
};

struct GridSpec {
    double dz = 0.02;
    double left_lengths = 40.0;
    double right_lengths = 40.0;
    std::optional<double> z_min;
    std::optional<double> z_max;
    bool operator==(const GridSpec&) const = default;
};

struct SpeedsSpec {
    double bracket_lo = 1.2, bracket_hi = 3.6;
    double tol = 0.05;
    double dag_bracket_lo = 2.2, dag_bracket_hi = 3.4;
    double dag_tol = 0.01;
    double probe_dz = 0.025;
    double probe_z_lo = -25.0, probe_z_hi = 60.0;
    bool operator==(const SpeedsSpec&) const = default;
};

struct FrontSpec {
    double c = 2.25;
    double band_lo = 0.0, band_hi = 1.0;
    double w_boundary_scale = 1.0;
    double spg_tol = 1e-8;
    int max_iter = 200000;
    bool operator==(const FrontSpec&) const = default;
};

struct CensusSpec {
    std::vector<double> c_values{2.25};
    double dz = 0.02;
    int bscan_samples = 96;
    bool operator==(const CensusSpec&) const = default;
};

struct StabilitySpec {
    double c = 6.0;
    double c_prime = 0.0;  // 0: use c
    double dt = 0.0;       // 0: 0.25 dz^2
    double t_end = 2.0;
    double amplitude = 1e-3;
    double bump_center = 0.0;
    double bump_width = 2.0;
    bool operator==(const StabilitySpec&) const = default;
};

struct RunConfig {
    TermSpec term;
    MeshSpec mesh;
    GridSpec grid;
    SpeedsSpec speeds;
    FrontSpec front;
    CensusSpec census;
    StabilitySpec stability;
    std::string out_dir = "out";
    long seed = 0;

    bool operator==(const RunConfig&) const = default;
};

RunConfig config_from_toml(const TomlTable& t);
RunConfig load_config(const std::string& path);
TomlTable config_to_toml(const RunConfig& c);

ReactionTerm make_term(const TermSpec& spec);
CrossSectionMesh make_mesh(const MeshSpec& spec);

} // namespace frontlab
