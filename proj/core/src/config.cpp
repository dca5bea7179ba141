#include "vbwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vbwave/assembly.hpp"
#include "vbwave/error.hpp"
#include "vbwave/io.hpp"

namespace vbwave {

double ScalingLayer::time_scale() const {
    return dimensional ? std::sqrt(h0 / g) : 1.0;
}

double ScalingLayer::speed_scale() const {
    return dimensional ? std::sqrt(g * h0) : 1.0;
}

double ScalingLayer::to_model(double value, Unit unit) const {
    switch (unit) {
        case Unit::Length: return value / length_scale();
        case Unit::Time: return value / time_scale();
        case Unit::Speed: return value / speed_scale();
        case Unit::InverseLength: return value * length_scale();
        case Unit::None: break;
    }
    return value;
}

double ScalingLayer::to_physical(double value, Unit unit) const {
    switch (unit) {
        case Unit::Length: return value * length_scale();
        case Unit::Time: return value * time_scale();
        case Unit::Speed: return value * speed_scale();
        case Unit::InverseLength: return value / length_scale();
        case Unit::None: break;
    }
    return value;
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Propagation: return "propagation";
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::Steepness: return "steepness";
    }
    return "?";
}

namespace {

enum class Type { Number, Integer, String, Bool, Choice, NumberList, IntList, ChoiceList };

struct Field {
    const char* section;
    const char* key;
    Type type;
    const char* default_value;  // nullptr: no default
    Unit unit;
    const char* choices;        // comma separated, for Choice types
    const char* doc;
};

// Sections whose fields are only filled in (and echoed) when the section
// appears in the file.
const std::set<std::string> kOptionalSections = {"scaling", "amplitude", "reflection", "crest_track", "shoaling",
                                                 "residual", "runup",   "crests",     "reference",   "convergence",
                                                 "steepness"};

const std::vector<Field>& schema() {
    static const std::vector<Field> fields = {
        {"experiment", "name", Type::String, nullptr, Unit::None, nullptr, "identifier, also the default output directory"},
        {"experiment", "kind", Type::Choice, "propagation", Unit::None, "propagation,convergence,steepness",
         "runner"},
        {"experiment", "description", Type::String, "", Unit::None, nullptr, "free text"},

        {"model", "kind", Type::Choice, "cb", Unit::None, "sw,cb,cbw,cbs", "equation system"},
        {"model", "epsilon", Type::Number, "1", Unit::None, nullptr, "nonlinearity parameter"},
        {"model", "mu", Type::Number, "1", Unit::None, nullptr, "dispersion parameter (ignored by sw)"},
        {"model", "quadrature_points", Type::Integer, "3", Unit::None, nullptr, "Gauss points per element"},

        {"domain", "a", Type::Number, "0", Unit::Length, nullptr, "left end"},
        {"domain", "b", Type::Number, nullptr, Unit::Length, nullptr, "right end"},
        {"domain", "elements", Type::Integer, nullptr, Unit::None, nullptr, "number of uniform elements N"},

        {"bathymetry", "profile", Type::Choice, "flat", Unit::None,
         "flat,uniform_slope,shelf_ramp,sine_shelf,beach_wall,sine_bottom,hump,depression_step", "bottom shape"},
        {"bathymetry", "alpha", Type::Number, nullptr, Unit::None, nullptr, "slope (uniform_slope, shelf_ramp)"},
        {"bathymetry", "x_b", Type::Number, nullptr, Unit::Length, nullptr, "toe of the slope (shelf_ramp, beach_wall)"},
        {"bathymetry", "h1", Type::Number, nullptr, Unit::Length, nullptr, "shelf depth (shelf_ramp)"},
        {"bathymetry", "slope", Type::Number, nullptr, Unit::None, nullptr, "beach slope (beach_wall)"},
        {"bathymetry", "center", Type::Number, nullptr, Unit::Length, nullptr, "bridge centre (sine_shelf, depression_step)"},
        {"bathymetry", "beta", Type::Number, nullptr, Unit::None, nullptr, "bottom variation amplitude"},
        {"bathymetry", "width", Type::Number, nullptr, Unit::Length, nullptr, "bridge width"},
        {"bathymetry", "wavenumber", Type::Number, nullptr, Unit::InverseLength, nullptr, "sine_bottom wavenumber"},
        {"bathymetry", "left", Type::Number, nullptr, Unit::Length, nullptr, "hump rising bridge centre"},
        {"bathymetry", "right", Type::Number, nullptr, Unit::Length, nullptr, "hump falling bridge centre"},

        {"initial", "type", Type::Choice, "cb_solitary", Unit::None, "kdv_pulse,cb_solitary,manufactured,rest",
         "initial data"},
        {"initial", "amplitude", Type::Number, nullptr, Unit::Length, nullptr, "wave amplitude"},
        {"initial", "speed", Type::Number, nullptr, Unit::Speed, nullptr, "cb_solitary speed (instead of amplitude)"},
        {"initial", "center", Type::Number, nullptr, Unit::Length, nullptr, "crest position"},
        {"initial", "velocity", Type::Choice, "flat", Unit::None, "flat,slope,zero", "kdv_pulse velocity formula"},
        {"initial", "u_projection", Type::Choice, nullptr, Unit::None, "l2,elliptic",
         "projection of u0 (default l2 for kdv_pulse, elliptic otherwise)"},
        {"initial", "points", Type::Integer, "1024", Unit::None, nullptr, "cb_solitary collocation points"},

        {"boundary", "left", Type::Choice, "reflective", Unit::None, "reflective,absorbing", "left end"},
        {"boundary", "right", Type::Choice, "reflective", Unit::None, "reflective,absorbing", "right end"},
        {"boundary", "allow_sloping_absorbing", Type::Bool, "false", Unit::None, nullptr,
         "absorbing end over a sloping bottom"},
        {"boundary", "allow_shoreline", Type::Bool, "false", Unit::None, nullptr, "dry reflecting endpoint"},

        {"time", "T", Type::Number, nullptr, Unit::Time, nullptr, "final time"},
        {"time", "courant", Type::Number, nullptr, Unit::None, nullptr,
         "k/h (default 1/4 for convergence, 1/2 otherwise)"},

        {"output", "dir", Type::String, nullptr, Unit::None, nullptr, "output directory (default: name)"},
        {"output", "snapshots", Type::NumberList, "", Unit::Time, nullptr, "snapshot times"},
        {"output", "gauges", Type::NumberList, "", Unit::Length, nullptr, "gauge positions"},
        {"output", "gauge_every", Type::Integer, "1", Unit::None, nullptr, "gauge sampling stride in steps"},
        {"output", "mass_every", Type::Integer, "1", Unit::None, nullptr, "mass trace stride in steps"},

        {"scaling", "h0", Type::Number, nullptr, Unit::None, nullptr, "reference depth in meters"},
        {"scaling", "g", Type::Number, "9.80665", Unit::None, nullptr, "gravity in m/s^2"},

        {"amplitude", "times", Type::NumberList, nullptr, Unit::Time, nullptr, "record max zeta at these times"},

        {"reflection", "time", Type::Number, nullptr, Unit::Time, nullptr, "measurement time"},
        {"reflection", "lo", Type::Number, nullptr, Unit::Length, nullptr, "window left end"},
        {"reflection", "hi", Type::Number, nullptr, Unit::Length, nullptr, "window right end"},
        {"reflection", "theta", Type::Number, "0.8", Unit::None, nullptr, "superlevel fraction"},

        {"crest_track", "start", Type::Number, nullptr, Unit::Time, nullptr, "first sample time"},
        {"crest_track", "end", Type::Number, nullptr, Unit::Time, nullptr, "last sample time"},
        {"crest_track", "every", Type::Number, "0.5", Unit::Time, nullptr, "sampling interval"},

        {"shoaling", "x_start", Type::Number, nullptr, Unit::Length, nullptr, "curve starts when the crest gets here"},
        {"shoaling", "stop_ratio", Type::Number, "0.6", Unit::None, nullptr, "stop when max zeta/eta_b reaches this"},
        {"shoaling", "reference_amplitude", Type::Number, nullptr, Unit::Length, nullptr,
         "a0 for zeta_max/a0 (default initial.amplitude)"},
        {"shoaling", "green_min_depth", Type::Number, "0.5", Unit::None, nullptr,
         "Green's law comparison for depths above this"},

        {"residual", "lo", Type::Number, nullptr, Unit::Length, nullptr, "window left end (default domain.a)"},
        {"residual", "hi", Type::Number, nullptr, Unit::Length, nullptr, "window right end (default domain.b)"},

        {"runup", "x", Type::Number, nullptr, Unit::Length, nullptr, "wall position (default domain.b)"},

        {"crests", "fraction", Type::Number, "0.25", Unit::None, nullptr, "count crests above fraction*max at T"},

        {"reference", "file", Type::String, nullptr, Unit::None, nullptr, "CSV with columns t,zeta"},
        {"reference", "gauge", Type::Integer, "0", Unit::None, nullptr, "index into output.gauges"},
        {"reference", "max_shift", Type::Number, "0", Unit::Time, nullptr, "time-shift search range"},

        {"convergence", "levels", Type::IntList, "64,128,256,512", Unit::None, nullptr, "mesh sizes N"},

        {"steepness", "betas", Type::NumberList, nullptr, Unit::None, nullptr, "bottom variation values"},
        {"steepness", "models", Type::ChoiceList, "cbw,cbs", Unit::None, "sw,cb,cbw,cbs", "models compared"},
        {"steepness", "jobs", Type::Integer, "0", Unit::None, nullptr, "worker threads (0: hardware)"},
    };
    return fields;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : schema()) {
        if (section == f.section && key == f.key) {
            return &f;
        }
    }
    return nullptr;
}

bool known_section(const std::string& section) {
    return std::any_of(schema().begin(), schema().end(), [&](const Field& f) { return section == f.section; });
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) {
        out.push_back(trim(cur));
    }
    return out;
}

double parse_factor(const std::string& t) {
    if (t == "pi") {
        return std::numbers::pi;
    }
    double v = 0.0;
    const char* first = t.data();
    const char* last = first + t.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, v);
    if (t.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw ConfigError("not a number: '" + t + "'");
    }
    return v;
}

std::string field_name(const Field& f) {
    return std::string(f.section) + "." + f.key;
}

// Checks a raw value against the field type and returns its canonical text.
std::string normalize(const Field& f, const std::string& raw) {
    const std::string v = trim(raw);
    auto fail = [&](const std::string& msg) -> ConfigError {
        return ConfigError("field '" + field_name(f) + "': " + msg);
    };
    auto check_choice = [&](const std::string& c) {
        for (const auto& opt : split(f.choices, ',')) {
            if (c == opt) {
                return;
            }
        }
        throw fail("'" + c + "' is not one of " + f.choices);
    };
    try {
        switch (f.type) {
            case Type::String: return v;
            case Type::Number: return format_double(parse_number(v));
            case Type::Integer: {
                const double d = parse_number(v);
                if (d != std::floor(d) || std::abs(d) > 1e9) {
                    throw fail("expected an integer, got '" + v + "'");
                }
                return std::to_string(static_cast<long>(d));
            }
            case Type::Bool:
                if (v == "true" || v == "1" || v == "yes") return "true";
                if (v == "false" || v == "0" || v == "no") return "false";
                throw fail("expected true or false, got '" + v + "'");
            case Type::Choice: check_choice(v); return v;
            case Type::NumberList:
            case Type::IntList:
            case Type::ChoiceList: {
                if (v.empty()) {
                    return "";
                }
                std::string out;
                for (const auto& item : split(v, ',')) {
                    std::string norm;
                    if (f.type == Type::NumberList) {
                        norm = format_double(parse_number(item));
                    } else if (f.type == Type::IntList) {
                        const double d = parse_number(item);
                        if (d != std::floor(d)) throw fail("expected integers, got '" + item + "'");
                        norm = std::to_string(static_cast<long>(d));
                    } else {
                        check_choice(item);
                        norm = item;
                    }
                    out += (out.empty() ? "" : ",") + norm;
                }
                return out;
            }
        }
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind("field '", 0) == 0) {
            throw;
        }
        throw fail(what);
    }
    return v;
}

struct RawEntry {
    std::string value;
    std::string where;
};

struct Raw {
    std::map<std::string, RawEntry> entries;
    std::set<std::string> sections;
};

void set_entry(Raw& raw, const std::string& section, const std::string& key, const std::string& value,
               const std::string& where, bool allow_replace) {
    const Field* f = find_field(section, key);
    if (!f) {
        if (!known_section(section)) {
            throw ConfigError(where + ": unknown section '" + section + "'");
        }
        throw ConfigError(where + ": unknown key '" + key + "' in section [" + section + "]");
    }
    const std::string name = section + "." + key;
    if (!allow_replace && raw.entries.count(name)) {
        throw ConfigError(where + ": duplicate key '" + name + "'");
    }
    try {
        raw.entries[name] = RawEntry{normalize(*f, value), where};
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    raw.sections.insert(section);
}

Raw read_raw(const std::string& text, const std::string& origin, const std::vector<std::string>& overrides) {
    Raw raw;
    std::stringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        // Comments start with '#' at the beginning or after whitespace.
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.erase(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(where + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section)) {
                throw ConfigError(where + ": unknown section '" + section + "'");
            }
            raw.sections.insert(section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError(where + ": key outside of any section");
        }
        set_entry(raw, section, trim(line.substr(0, eq)), line.substr(eq + 1), where, false);
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        const auto dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw ConfigError("override '" + ov + "': expected section.key=value");
        }
        set_entry(raw, trim(ov.substr(0, dot)), trim(ov.substr(dot + 1, eq - dot - 1)), ov.substr(eq + 1),
                  "override '" + ov + "'", true);
    }
    return raw;
}

class Reader {
public:
    explicit Reader(const ConfigMap& m) : m_(m) {}
    [[nodiscard]] bool has(const std::string& k) const { return m_.count(k) > 0; }
    [[nodiscard]] const std::string& str(const std::string& k) const {
        const auto it = m_.find(k);
        if (it == m_.end()) {
            throw ConfigError("field '" + k + "' is required");
        }
        return it->second;
    }
    [[nodiscard]] double num(const std::string& k) const { return parse_number(str(k)); }
    [[nodiscard]] double num_or(const std::string& k, double d) const { return has(k) ? num(k) : d; }
    [[nodiscard]] int integer(const std::string& k) const { return static_cast<int>(num(k)); }
    [[nodiscard]] bool flag(const std::string& k) const { return str(k) == "true"; }
    [[nodiscard]] std::vector<double> nums(const std::string& k) const {
        std::vector<double> out;
        if (!has(k) || str(k).empty()) return out;
        for (const auto& item : split(str(k), ',')) out.push_back(parse_number(item));
        return out;
    }
    [[nodiscard]] std::vector<std::string> words(const std::string& k) const {
        if (!has(k) || str(k).empty()) return {};
        return split(str(k), ',');
    }

private:
    const ConfigMap& m_;
};

void require_positive(double v, const std::string& name) {
    if (!(v > 0.0)) {
        throw ConfigError("field '" + name + "' must be positive");
    }
}

ProfileSpec build_profile(const Reader& r, ConfigMap& m) {
    const std::string profile = r.str("bathymetry.profile");
    static const std::map<std::string, std::vector<std::string>> kKeys = {
        {"flat", {}},
        {"uniform_slope", {"alpha"}},
        {"shelf_ramp", {"x_b", "alpha", "h1"}},
        {"sine_shelf", {"center", "beta", "width"}},
        {"beach_wall", {"x_b", "slope"}},
        {"sine_bottom", {"beta", "wavenumber"}},
        {"hump", {"left", "right", "width", "beta"}},
        {"depression_step", {"center", "width", "beta"}},
    };
    const auto& needed = kKeys.at(profile);
    if (profile == "sine_shelf" && !r.has("bathymetry.width")) {
        m["bathymetry.width"] = "3";
    }
    for (const auto& f : schema()) {
        if (std::string(f.section) != "bathymetry" || std::string(f.key) == "profile") continue;
        const bool used = std::find(needed.begin(), needed.end(), f.key) != needed.end();
        if (used && !r.has(field_name(f))) {
            throw ConfigError("field '" + field_name(f) + "' is required by profile " + profile);
        }
        if (!used && r.has(field_name(f))) {
            throw ConfigError("field '" + field_name(f) + "' is not used by profile " + profile);
        }
    }
    auto v = [&](const char* key) { return r.num(std::string("bathymetry.") + key); };
    if (profile == "flat") return FlatBottom{};
    if (profile == "uniform_slope") return UniformSlope{v("alpha")};
    if (profile == "shelf_ramp") return ShelfRamp{v("x_b"), v("alpha"), v("h1")};
    if (profile == "sine_shelf") return SineShelf{v("center"), v("beta"), v("width")};
    if (profile == "beach_wall") return BeachWall{v("x_b"), v("slope")};
    if (profile == "sine_bottom") return SineBottom{v("beta"), v("wavenumber")};
    if (profile == "hump") return Hump{v("left"), v("right"), v("width"), v("beta")};
    return DepressionStep{v("center"), v("width"), v("beta")};
}

// Profile with lengths converted to model units.
ProfileSpec scale_profile(const ProfileSpec& spec, const ScalingLayer& s) {
    auto L = [&](double x) { return s.to_model(x, Unit::Length); };
    return std::visit(
        [&](const auto& p) -> ProfileSpec {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, FlatBottom> || std::is_same_v<P, UniformSlope>) {
                return p;
            } else if constexpr (std::is_same_v<P, ShelfRamp>) {
                return ShelfRamp{L(p.x_b), p.alpha, L(p.h1)};
            } else if constexpr (std::is_same_v<P, SineShelf>) {
                return SineShelf{L(p.center), p.beta, L(p.width)};
            } else if constexpr (std::is_same_v<P, BeachWall>) {
                return BeachWall{L(p.x_b), p.slope};
            } else if constexpr (std::is_same_v<P, SineBottom>) {
                return SineBottom{p.beta, s.to_model(p.wavenumber, Unit::InverseLength)};
            } else if constexpr (std::is_same_v<P, Hump>) {
                return Hump{L(p.left), L(p.right), L(p.width), p.beta};
            } else {
                return DepressionStep{L(p.center), L(p.width), p.beta};
            }
        },
        spec);
}

ExperimentConfig build(const Raw& raw) {
    ConfigMap m;
    for (const auto& [k, e] : raw.entries) {
        m[k] = e.value;
    }
    // Defaults for every always-present section and for optional sections in use.
    for (const auto& f : schema()) {
        const bool optional = kOptionalSections.count(f.section) > 0;
        if (optional && !raw.sections.count(f.section)) continue;
        if (f.default_value && !m.count(field_name(f))) {
            m[field_name(f)] = f.default_value;
        }
    }
    Reader r(m);
    ExperimentConfig c;
    c.name = r.str("experiment.name");
    if (c.name.empty()) {
        throw ConfigError("field 'experiment.name' must not be empty");
    }
    c.description = r.str("experiment.description");
    const std::string kind = r.str("experiment.kind");
    c.kind = kind == "convergence" ? ExperimentKind::Convergence
             : kind == "steepness" ? ExperimentKind::Steepness
                                   : ExperimentKind::Propagation;

    c.model.kind = parse_model_kind(r.str("model.kind"));
    c.model.epsilon = r.num("model.epsilon");
    c.model.mu = r.num("model.mu");
    require_positive(c.model.epsilon, "model.epsilon");
    if (c.model.mu < 0.0) {
        throw ConfigError("field 'model.mu' must be non-negative");
    }
    c.quadrature_points = r.integer("model.quadrature_points");
    if (c.quadrature_points < 2 || c.quadrature_points > 10) {
        throw ConfigError("field 'model.quadrature_points' must lie in [2, 10]");
    }

    if (raw.sections.count("scaling")) {
        c.scaling.dimensional = true;
        c.scaling.h0 = r.num("scaling.h0");
        c.scaling.g = r.num("scaling.g");
        require_positive(c.scaling.h0, "scaling.h0");
        require_positive(c.scaling.g, "scaling.g");
    }

    c.a = r.num("domain.a");
    c.b = r.num("domain.b");
    if (!(c.b > c.a)) {
        throw ConfigError("field 'domain.b' must exceed domain.a");
    }
    c.elements = r.integer("domain.elements");
    if (c.elements < 2) {
        throw ConfigError("field 'domain.elements' must be at least 2");
    }

    c.bathymetry = build_profile(r, m);

    if (c.kind == ExperimentKind::Convergence) {
        if (!raw.entries.count("initial.type")) {
            m["initial.type"] = "manufactured";
        } else if (m["initial.type"] != "manufactured") {
            throw ConfigError("field 'initial.type': convergence experiments use manufactured data");
        }
    }
    const std::string itype = r.str("initial.type");
    c.initial.kind = itype == "kdv_pulse"      ? InitialKind::KdvPulse
                     : itype == "manufactured" ? InitialKind::Manufactured
                     : itype == "rest"         ? InitialKind::Rest
                                               : InitialKind::CbSolitary;
    c.initial.amplitude = r.num_or("initial.amplitude", 0.0);
    c.initial.speed = r.num_or("initial.speed", 0.0);
    c.initial.center = r.num_or("initial.center", 0.5 * (c.a + c.b));
    const std::string vel = r.str("initial.velocity");
    c.initial.velocity = vel == "slope" ? PulseVelocity::Slope : vel == "zero" ? PulseVelocity::Zero : PulseVelocity::Flat;
    if (!m.count("initial.u_projection")) {
        m["initial.u_projection"] = c.initial.kind == InitialKind::KdvPulse ? "l2" : "elliptic";
    }
    c.initial.elliptic_u = r.str("initial.u_projection") == "elliptic";
    c.initial.points = r.integer("initial.points");
    if (c.initial.kind == InitialKind::KdvPulse && !r.has("initial.amplitude")) {
        throw ConfigError("field 'initial.amplitude' is required by kdv_pulse");
    }
    if (c.initial.kind == InitialKind::CbSolitary) {
        if (r.has("initial.amplitude") == r.has("initial.speed")) {
            throw ConfigError("cb_solitary needs exactly one of initial.amplitude and initial.speed");
        }
        if (c.initial.points < 64 || c.initial.points % 2) {
            throw ConfigError("field 'initial.points' must be even and at least 64");
        }
    }
    if (c.initial.velocity == PulseVelocity::Slope && !std::holds_alternative<UniformSlope>(c.bathymetry)) {
        throw ConfigError("field 'initial.velocity': slope requires the uniform_slope profile");
    }

    c.boundary.left = parse_boundary_kind(r.str("boundary.left"));
    c.boundary.right = parse_boundary_kind(r.str("boundary.right"));
    c.boundary.allow_sloping_absorbing = r.flag("boundary.allow_sloping_absorbing");
    c.boundary.allow_shoreline = r.flag("boundary.allow_shoreline");

    if (!m.count("time.courant")) {
        m["time.courant"] = c.kind == ExperimentKind::Convergence ? "0.25" : "0.5";
    }
    c.T = r.num("time.T");
    c.courant = r.num("time.courant");
    require_positive(c.T, "time.T");
    require_positive(c.courant, "time.courant");

    if (!m.count("output.dir")) {
        m["output.dir"] = c.name;
    }
    c.output_dir = r.str("output.dir");
    c.snapshots = r.nums("output.snapshots");
    c.gauges = r.nums("output.gauges");
    c.gauge_every = r.integer("output.gauge_every");
    c.mass_every = r.integer("output.mass_every");
    if (c.gauge_every < 1 || c.mass_every < 1) {
        throw ConfigError("output strides must be at least 1");
    }
    for (double t : c.snapshots) {
        if (t < 0.0 || t > c.T) throw ConfigError("field 'output.snapshots': time outside [0, T]");
    }
    for (double x : c.gauges) {
        if (x < c.a || x > c.b) throw ConfigError("field 'output.gauges': position outside the domain");
    }

    if (raw.sections.count("amplitude")) {
        c.amplitude_times = r.nums("amplitude.times");
    }
    if (raw.sections.count("reflection")) {
        c.reflection = ReflectionProbe{r.num("reflection.time"), r.num("reflection.lo"), r.num("reflection.hi"),
                                       r.num("reflection.theta")};
        if (!(c.reflection->hi > c.reflection->lo) || c.reflection->theta <= 0.0 || c.reflection->theta >= 1.0) {
            throw ConfigError("section [reflection]: need lo < hi and 0 < theta < 1");
        }
    }
    if (raw.sections.count("crest_track")) {
        c.crest_track = CrestTrack{r.num("crest_track.start"), r.num("crest_track.end"), r.num("crest_track.every")};
        if (!(c.crest_track->end > c.crest_track->start) || !(c.crest_track->every > 0.0)) {
            throw ConfigError("section [crest_track]: need start < end and every > 0");
        }
    }
    if (raw.sections.count("shoaling")) {
        if (!m.count("shoaling.reference_amplitude")) {
            m["shoaling.reference_amplitude"] = format_double(c.initial.amplitude);
        }
        c.shoaling = ShoalingProbe{r.num("shoaling.x_start"), r.num("shoaling.stop_ratio"),
                                   r.num("shoaling.reference_amplitude"), r.num("shoaling.green_min_depth")};
        require_positive(c.shoaling->reference_amplitude, "shoaling.reference_amplitude");
    }
    if (raw.sections.count("residual")) {
        if (!m.count("residual.lo")) m["residual.lo"] = format_double(c.a);
        if (!m.count("residual.hi")) m["residual.hi"] = format_double(c.b);
        c.residual = ResidualProbe{r.num("residual.lo"), r.num("residual.hi")};
    }
    if (raw.sections.count("runup")) {
        if (!m.count("runup.x")) m["runup.x"] = format_double(c.b);
        c.runup = RunupProbe{r.num("runup.x")};
    }
    if (raw.sections.count("crests")) {
        c.crest_fraction = r.num("crests.fraction");
    }
    if (raw.sections.count("reference")) {
        c.reference = ReferenceSeries{r.str("reference.file"), r.integer("reference.gauge"),
                                      r.num("reference.max_shift")};
        if (c.reference->gauge < 0 || c.reference->gauge >= static_cast<int>(c.gauges.size())) {
            throw ConfigError("field 'reference.gauge' does not name an output gauge");
        }
    }
    if (c.kind == ExperimentKind::Convergence) {
        if (!raw.sections.count("convergence")) {
            m["convergence.levels"] = "64,128,256,512";
        }
        for (double n : Reader(m).nums("convergence.levels")) {
            c.levels.push_back(static_cast<int>(n));
        }
        if (c.levels.size() < 2) {
            throw ConfigError("field 'convergence.levels' needs at least two mesh sizes");
        }
    }
    if (c.kind == ExperimentKind::Steepness) {
        if (!raw.sections.count("steepness")) {
            throw ConfigError("steepness experiments need a [steepness] section");
        }
        c.betas = r.nums("steepness.betas");
        for (const auto& w : r.words("steepness.models")) {
            c.sweep_models.push_back(parse_model_kind(w));
        }
        c.jobs = r.integer("steepness.jobs");
        if (!std::holds_alternative<SineShelf>(c.bathymetry)) {
            throw ConfigError("steepness experiments use the sine_shelf profile");
        }
        if (c.betas.empty() || c.sweep_models.size() != 2) {
            throw ConfigError("section [steepness]: need betas and exactly two models");
        }
    }

    // Positivity and, for CBs, coercivity of the mass form.
    try {
        const Bathymetry bathy = model_bathymetry(c);
        if (c.model.kind == ModelKind::CBs) {
            const CoercivityReport rep = coercivity_check(bathy, c.model.mu);
            const bool endpoint = rep.argmin_c1 == bathy.a() || rep.argmin_c1 == bathy.b();
            const bool shoreline_ok = c.boundary.allow_shoreline && rep.c1 == 0.0 && endpoint && rep.c2 >= 0.0;
            if (!rep.satisfied && !shoreline_ok) {
                throw ConfigError("bathymetry: CBs mass form is not coercive (min eta_b = " + format_double(rep.c1) +
                                  " at x = " + format_double(rep.argmin_c1) + ", min eta_b - mu/2 eta_b^2 eta_b'' = " +
                                  format_double(rep.c2) + " at x = " + format_double(rep.argmin_c2) + ")");
            }
        }
        const auto check_end = [&](BoundaryKind kind, double x, bool flat, const char* side) {
            if (bathy.depth(x) <= 0.0 && (kind == BoundaryKind::Absorbing || !c.boundary.allow_shoreline)) {
                throw ConfigError(std::string("bathymetry: dry ") + side +
                                  " endpoint needs a reflective end and boundary.allow_shoreline = true");
            }
            if (kind == BoundaryKind::Absorbing && !flat && !c.boundary.allow_sloping_absorbing) {
                throw ConfigError(std::string("boundary: absorbing ") + side +
                                  " end over a sloping bottom needs boundary.allow_sloping_absorbing = true");
            }
        };
        const double flat_width = std::min(1.0, 0.25 * (bathy.b() - bathy.a()));
        check_end(c.boundary.left, bathy.a(), bathy.flat_near_left(flat_width), "left");
        check_end(c.boundary.right, bathy.b(), bathy.flat_near_right(flat_width), "right");
        for (const auto& beta : c.betas) {
            ExperimentConfig probe = c;
            std::get<SineShelf>(probe.bathymetry).beta = beta;
            (void)model_bathymetry(probe);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("bathymetry: ") + e.what());
    }

    c.values = std::move(m);
    return c;
}

}  // namespace

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    const auto slash = t.find('/');
    if (slash != std::string::npos) {
        const double den = parse_number(t.substr(slash + 1));
        if (den == 0.0) {
            throw ConfigError("division by zero in '" + t + "'");
        }
        return parse_number(t.substr(0, slash)) / den;
    }
    const auto star = t.find('*');
    if (star != std::string::npos) {
        return parse_factor(trim(t.substr(0, star))) * parse_factor(trim(t.substr(star + 1)));
    }
    return parse_factor(t);
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin,
                                   const std::vector<std::string>& overrides) {
    return build(read_raw(text, origin, overrides));
}

ExperimentConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path, overrides);
}

std::string echo_config(const ExperimentConfig& config) {
    std::string out;
    std::string section;
    for (const auto& f : schema()) {
        const auto it = config.values.find(field_name(f));
        if (it == config.values.end()) {
            continue;
        }
        if (section != f.section) {
            if (!section.empty()) out += '\n';
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += std::string(f.key) + " = " + it->second + '\n';
    }
    return out;
}

std::string describe_schema() {
    std::string out;
    std::string section;
    for (const auto& f : schema()) {
        if (section != f.section) {
            section = f.section;
            out += "[" + section + "]" + (kOptionalSections.count(section) ? "  (optional)" : "") + "\n";
        }
        std::string type;
        switch (f.type) {
            case Type::Number: type = "number"; break;
            case Type::Integer: type = "integer"; break;
            case Type::String: type = "string"; break;
            case Type::Bool: type = "bool"; break;
            case Type::Choice: type = std::string("one of ") + f.choices; break;
            case Type::NumberList: type = "number list"; break;
            case Type::IntList: type = "integer list"; break;
            case Type::ChoiceList: type = std::string("list of ") + f.choices; break;
        }
        out += "  " + std::string(f.key) + " : " + type;
        if (f.default_value) {
            out += std::string(" = ") + (*f.default_value ? f.default_value : "(empty)");
        }
        out += "  -- " + std::string(f.doc) + "\n";
    }
    return out;
}

Bathymetry model_bathymetry(const ExperimentConfig& config) {
    const ScalingLayer& s = config.scaling;
    return Bathymetry::make(scale_profile(config.bathymetry, s), s.to_model(config.a, Unit::Length),
                            s.to_model(config.b, Unit::Length));
}

}  // namespace vbwave
