#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nlwave/energy.hpp"
#include "nlwave/field.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/multipoint.hpp"
#include "nlwave/nonlinearity.hpp"
#include "nlwave/picard.hpp"

namespace nlwave {

/// Named initial-data family. Kinds:
///   "zero", "gaussian" (bump), "gaussian_ddx" (odd, mean-zero derivative
///   bump), "harmonic" (cos of lattice mode k along the first axis),
///   "random_bumps" (three seeded bumps with random centers and signs).
struct InitialSpec {
    std::string kind = "zero";
    double amplitude = 1.0;
    double width = 1.0;
    double center = 0.0;
    int k = 1;  ///< harmonic lattice index along the first axis
};

Field make_initial(const Grid& g, const InitialSpec& spec, std::uint64_t seed);

/// Flat dotted key = value configuration. See parse_config for the grammar
/// and README for the key reference; every field here corresponds 1:1 to a
/// documented key and carries its default.
struct ScenarioConfig {
    // grid.*
    int dim = 1;            // grid.n
    int points = 256;       // grid.N
    double length = 40.0;   // grid.L
    // kernel.*
    double a = 0.0;                 // kernel.a
    std::string b_name = "zero";    // kernel.b
    double b_param = 1.0;           // kernel.b_param
    std::string g_name = "bessel";  // kernel.g
    double g_param = 2.0;           // kernel.g_param
    double g_decay_r = 2.0;         // kernel.g_r (claimed decay exponent)
    // multipoint.*
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> lambda;
    // nonlinearity.*
    std::string f_name = "zero";
    // initial.*
    InitialSpec phi;
    InitialSpec psi;
    // run.*
    double t_total = 1.0;
    double dt = 1e-3;
    double tol_fp = 1e-9;
    double tol_mp = 1e-7;
    double tol_e = 1e-5;
    double tol_d0 = 1e-8;
    double blowup_threshold = 1e6;
    std::uint64_t seed = 0;
    int max_iter = 30;
    double target_ratio = 0.5;
    double c0 = 1.0;
    double c1 = 1.0;
    int min_steps = 8;
    bool auto_calibrate = true;
    double sobolev_s = 2.0;
    double lebesgue_p = 2.0;
    // continuation.*
    // "cauchy_after_first": the multipoint coupling shapes the first local
    // window; later windows continue as classical Cauchy problems. "same"
    // re-imposes the coupling in every window's local time.
    std::string restart_policy = "cauchy_after_first";
    // energy.*
    std::string zero_mode_policy = "strict";  // "strict" | "projected"
    int energy_stride = 1;
    // output.*
    std::string out_dir = "out";
    std::string field_dumps = "endpoints";  // "none" | "endpoints" | "all"
    int output_stride = 1;
    // study.*
    int study_rungs = 4;  // resolutions per refinement ladder (>= 2)

    Grid make_grid() const;
    KernelSpec make_kernel() const;
    MultipointSpec make_multipoint() const;
    NonlinearitySpec make_f() const;
    Field make_phi(const Grid& g) const;
    Field make_psi(const Grid& g) const;
    EnergyOptions energy_options() const;
    FixedPointOptions fixed_point_options() const;
    ContinuationOptions continuation_options() const;

    /// Canonical (key, value) echo of every setting, in documented order.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses `key = value` lines ('#' comments, blank lines ignored; values are
/// numbers, booleans, bare or quoted strings, or bracketed numeric lists).
/// All violations are collected and reported together (ValidationError);
/// unknown keys are rejected with a nearest-known-key suggestion.
ScenarioConfig parse_config_text(const std::string& text);

/// File variant; throws ErrorCode::io when the file cannot be read.
ScenarioConfig parse_config(const std::string& path);

}  // namespace nlwave
