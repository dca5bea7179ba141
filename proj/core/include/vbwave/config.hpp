#pragma once

// Experiment configuration: a sectioned key=value text format checked
// against a fixed schema.
//
//   # comment
//   [section]
//   key = value
//
// Numbers accept p/q fractions and the token `pi` (e.g. `1/30`, `pi`,
// `2*pi`). Lists are comma separated. Unknown sections or keys are errors.
// The full schema is printed by describe_schema() and documented in
// docs/FORMATS.md.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vbwave/bathymetry.hpp"
#include "vbwave/models.hpp"

namespace vbwave {

/// Physical dimension of a configuration value, used by the scaling layer.
enum class Unit { None, Length, Time, Speed, InverseLength };

/// Conversion between dimensional (meters, seconds) and nondimensional
/// variables: lengths by h0, times by sqrt(h0/g), speeds by sqrt(g h0).
struct ScalingLayer {
    bool dimensional = false;
    double h0 = 1.0;
    double g = 9.80665;

    [[nodiscard]] double length_scale() const noexcept { return dimensional ? h0 : 1.0; }
    [[nodiscard]] double time_scale() const;
    [[nodiscard]] double speed_scale() const;
    /// Physical value -> model value.
    [[nodiscard]] double to_model(double value, Unit unit) const;
    /// Model value -> physical value.
    [[nodiscard]] double to_physical(double value, Unit unit) const;
};

enum class ExperimentKind { Propagation, Convergence, Steepness };
enum class InitialKind { KdvPulse, CbSolitary, Manufactured, Rest };
enum class PulseVelocity { Flat, Slope, Zero };

std::string to_string(ExperimentKind kind);

struct InitialSpec {
    InitialKind kind = InitialKind::CbSolitary;
    double amplitude = 0.0;
    double speed = 0.0;  ///< CB solitary speed; 0 means "from amplitude"
    double center = 0.0;
    PulseVelocity velocity = PulseVelocity::Flat;
    bool elliptic_u = true;
    int points = 1024;
};

struct ReflectionProbe {
    double time = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double theta = 0.8;
};

struct CrestTrack {
    double start = 0.0;
    double end = 0.0;
    double every = 0.5;
};

struct ShoalingProbe {
    double x_start = 0.0;
    double stop_ratio = 0.6;
    double reference_amplitude = 0.0;
    double green_min_depth = 0.5;
};

struct ResidualProbe {
    double lo = 0.0;
    double hi = 0.0;
};

struct RunupProbe {
    double x = 0.0;
};

struct ReferenceSeries {
    std::string file;
    int gauge = 0;
    double max_shift = 0.0;
};

/// Validated "section.key" -> value map in schema order, defaults included.
using ConfigMap = std::map<std::string, std::string>;

/// All values are as written in the file (physical units when the
/// [scaling] section is present); the runners convert through `scaling`.
struct ExperimentConfig {
    std::string name;
    std::string description;
    ExperimentKind kind = ExperimentKind::Propagation;

    ModelParams model;
    int quadrature_points = 3;

    double a = 0.0;
    double b = 1.0;
    int elements = 0;

    ProfileSpec bathymetry = FlatBottom{};
    InitialSpec initial;
    BoundarySpec boundary;

    double T = 0.0;
    double courant = 0.5;

    std::string output_dir;
    std::vector<double> snapshots;
    std::vector<double> gauges;
    int gauge_every = 1;
    int mass_every = 1;

    ScalingLayer scaling;

    std::vector<double> amplitude_times;
    std::optional<ReflectionProbe> reflection;
    std::optional<CrestTrack> crest_track;
    std::optional<ShoalingProbe> shoaling;
    std::optional<ResidualProbe> residual;
    std::optional<RunupProbe> runup;
    std::optional<double> crest_fraction;
    std::optional<ReferenceSeries> reference;

    std::vector<int> levels;          ///< convergence mesh sizes
    std::vector<double> betas;        ///< steepness sweep
    std::vector<ModelKind> sweep_models;
    int jobs = 0;

    ConfigMap values;
};

/// Parses a number with optional fraction and `pi`.
double parse_number(const std::string& text);

/// Reads and validates a config file; overrides are "section.key=value".
ExperimentConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin,
                                   const std::vector<std::string>& overrides = {});

/// Canonical text of a validated config (schema order, defaults filled,
/// numbers in round-trip form). Parsing the echo gives the same echo.
std::string echo_config(const ExperimentConfig& config);

/// Human-readable schema listing.
std::string describe_schema();

/// The bathymetry in model (nondimensional) units on the model domain.
Bathymetry model_bathymetry(const ExperimentConfig& config);

}  // namespace vbwave
