#include "nlwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "nlwave/errors.hpp"
#include "nlwave/io.hpp"

namespace nlwave {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

std::optional<long long> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    long long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    return std::nullopt;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

std::optional<std::vector<double>> parse_list(const std::string& s) {
    std::string body = s;
    if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') return std::nullopt;
        body = body.substr(1, body.size() - 2);
    }
    std::vector<double> out;
    if (trim(body).empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_double(trim(item));
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    return out;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string format_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_g17(v[i]);
    }
    out += "]";
    return out;
}

bool valid_symbol_name(const std::string& s) {
    return s == "bessel" || s == "gaussian" || s == "constant" || s == "zero";
}

bool valid_initial_kind(const std::string& s) {
    return s == "zero" || s == "gaussian" || s == "gaussian_ddx" || s == "harmonic" ||
           s == "random_bumps";
}

// Handler table: one entry per documented key. Each handler parses the raw
// text and assigns into the config, or returns an error message.
using Handler = std::function<std::optional<std::string>(ScenarioConfig&, const std::string&)>;

std::optional<std::string> need(const char* what) {
    return std::string("expected ") + what;
}

std::map<std::string, Handler> make_handlers() {
    std::map<std::string, Handler> h;
    const auto dbl = [](double ScenarioConfig::* field) {
        return [field](ScenarioConfig& c, const std::string& raw) -> std::optional<std::string> {
            const auto v = parse_double(raw);
            if (!v) return need("a number");
            c.*field = *v;
            return std::nullopt;
        };
    };
    const auto intf = [](int ScenarioConfig::* field) {
        return [field](ScenarioConfig& c, const std::string& raw) -> std::optional<std::string> {
            const auto v = parse_int(raw);
            if (!v) return need("an integer");
            c.*field = static_cast<int>(*v);
            return std::nullopt;
        };
    };
    const auto str = [](std::string ScenarioConfig::* field) {
        return [field](ScenarioConfig& c, const std::string& raw) -> std::optional<std::string> {
            c.*field = unquote(raw);
            return std::nullopt;
        };
    };
    const auto list = [](std::vector<double> ScenarioConfig::* field) {
        return [field](ScenarioConfig& c, const std::string& raw) -> std::optional<std::string> {
            const auto v = parse_list(raw);
            if (!v) return need("a list like [0.1, 0.2]");
            c.*field = *v;
            return std::nullopt;
        };
    };
    const auto init_dbl = [](InitialSpec ScenarioConfig::* block, double InitialSpec::* field) {
        return [block, field](ScenarioConfig& c,
                              const std::string& raw) -> std::optional<std::string> {
            const auto v = parse_double(raw);
            if (!v) return need("a number");
            c.*block.*field = *v;
            return std::nullopt;
        };
    };

    h["grid.n"] = intf(&ScenarioConfig::dim);
    h["grid.N"] = intf(&ScenarioConfig::points);
    h["grid.L"] = dbl(&ScenarioConfig::length);
    h["kernel.a"] = dbl(&ScenarioConfig::a);
    h["kernel.b"] = str(&ScenarioConfig::b_name);
    h["kernel.b_param"] = dbl(&ScenarioConfig::b_param);
    h["kernel.g"] = str(&ScenarioConfig::g_name);
    h["kernel.g_param"] = dbl(&ScenarioConfig::g_param);
    h["kernel.g_r"] = dbl(&ScenarioConfig::g_decay_r);
    h["multipoint.alpha"] = list(&ScenarioConfig::alpha);
    h["multipoint.beta"] = list(&ScenarioConfig::beta);
    h["multipoint.lambda"] = list(&ScenarioConfig::lambda);
    h["nonlinearity.name"] = str(&ScenarioConfig::f_name);
    h["initial.phi"] = [](ScenarioConfig& c, const std::string& raw) -> std::optional<std::string> {
        c.phi.kind = unquote(raw);
        return std::nullopt;
    };
    h["initial.phi_amplitude"] = init_dbl(&ScenarioConfig::phi, &InitialSpec::amplitude);
    h["initial.phi_width"] = init_dbl(&ScenarioConfig::phi, &InitialSpec::width);
    h["initial.phi_center"] = init_dbl(&ScenarioConfig::phi, &InitialSpec::center);
    h["initial.phi_k"] = [](ScenarioConfig& c,
                            const std::string& raw) -> std::optional<std::string> {
        const auto v = parse_int(raw);
        if (!v) return need("an integer");
        c.phi.k = static_cast<int>(*v);
        return std::nullopt;
    };
    h["initial.psi"] = [](ScenarioConfig& c, const std::string& raw) -> std::optional<std::string> {
        c.psi.kind = unquote(raw);
        return std::nullopt;
    };
    h["initial.psi_amplitude"] = init_dbl(&ScenarioConfig::psi, &InitialSpec::amplitude);
    h["initial.psi_width"] = init_dbl(&ScenarioConfig::psi, &InitialSpec::width);
    h["initial.psi_center"] = init_dbl(&ScenarioConfig::psi, &InitialSpec::center);
    h["initial.psi_k"] = [](ScenarioConfig& c,
                            const std::string& raw) -> std::optional<std::string> {
        const auto v = parse_int(raw);
        if (!v) return need("an integer");
        c.psi.k = static_cast<int>(*v);
        return std::nullopt;
    };
    h["run.T_total"] = dbl(&ScenarioConfig::t_total);
    h["run.dt"] = dbl(&ScenarioConfig::dt);
    h["run.tol_fp"] = dbl(&ScenarioConfig::tol_fp);
    h["run.tol_mp"] = dbl(&ScenarioConfig::tol_mp);
    h["run.tol_E"] = dbl(&ScenarioConfig::tol_e);
    h["run.tol_d0"] = dbl(&ScenarioConfig::tol_d0);
    h["run.blowup_threshold"] = dbl(&ScenarioConfig::blowup_threshold);
    h["run.seed"] = [](ScenarioConfig& c, const std::string& raw) -> std::optional<std::string> {
        const auto v = parse_u64(raw);
        if (!v) return need("an unsigned integer");
        c.seed = *v;
        return std::nullopt;
    };
    h["run.max_iter"] = intf(&ScenarioConfig::max_iter);
    h["run.target_ratio"] = dbl(&ScenarioConfig::target_ratio);
    h["run.c0"] = dbl(&ScenarioConfig::c0);
    h["run.c1"] = dbl(&ScenarioConfig::c1);
    h["run.min_steps"] = intf(&ScenarioConfig::min_steps);
    h["run.auto_calibrate"] = [](ScenarioConfig& c,
                                 const std::string& raw) -> std::optional<std::string> {
        const auto v = parse_bool(raw);
        if (!v) return need("true or false");
        c.auto_calibrate = *v;
        return std::nullopt;
    };
    h["run.sobolev_s"] = dbl(&ScenarioConfig::sobolev_s);
    h["run.lebesgue_p"] = dbl(&ScenarioConfig::lebesgue_p);
    h["continuation.multipoint_restart"] = str(&ScenarioConfig::restart_policy);
    h["energy.zero_mode"] = str(&ScenarioConfig::zero_mode_policy);
    h["energy.stride"] = intf(&ScenarioConfig::energy_stride);
    h["output.dir"] = str(&ScenarioConfig::out_dir);
    h["output.field_dumps"] = str(&ScenarioConfig::field_dumps);
    h["output.stride"] = intf(&ScenarioConfig::output_stride);
    h["study.rungs"] = intf(&ScenarioConfig::study_rungs);
    return h;
}

void cross_validate(const ScenarioConfig& c, std::vector<std::string>& bad) {
    const auto check = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    check(c.dim >= 1 && c.dim <= 3, "grid.n: dimension must be 1, 2, or 3");
    check(c.points >= 4 && (c.points & (c.points - 1)) == 0,
          "grid.N: must be a power of two >= 4");
    check(std::isfinite(c.length) && c.length > 0.0, "grid.L: must be positive");
    check(std::isfinite(c.a) && c.a >= 0.0, "kernel.a: must be >= 0");
    check(valid_symbol_name(c.b_name),
          "kernel.b: unknown symbol '" + c.b_name +
              "' (choose bessel, gaussian, constant, or zero)");
    check(valid_symbol_name(c.g_name) && c.g_name != "zero",
          "kernel.g: unknown symbol '" + c.g_name +
              "' (choose bessel, gaussian, or constant; g must stay positive)");
    const auto check_param = [&](const std::string& key, const std::string& name, double p) {
        if (name == "bessel")
            check(std::isfinite(p) && p > 0.0, key + ": bessel exponent must be positive");
        else if (name == "gaussian")
            check(std::isfinite(p) && p > 0.0, key + ": gaussian width must be positive");
        else if (name == "constant")
            check(std::isfinite(p) && p > 0.0, key + ": constant value must be positive");
    };
    if (valid_symbol_name(c.b_name)) check_param("kernel.b_param", c.b_name, c.b_param);
    if (valid_symbol_name(c.g_name) && c.g_name != "zero")
        check_param("kernel.g_param", c.g_name, c.g_param);
    check(std::isfinite(c.g_decay_r) && c.g_decay_r >= 0.0, "kernel.g_r: must be >= 0");
    check(c.a > 0.0 || c.b_name != "zero",
          "kernel.a / kernel.b: a = 0 with b = zero leaves no dispersion at all");

    check(c.alpha.size() == c.lambda.size(),
          "multipoint.alpha: expected " + std::to_string(c.lambda.size()) +
              " entries to match multipoint.lambda (got " + std::to_string(c.alpha.size()) +
              ")");
    check(c.beta.size() == c.lambda.size(),
          "multipoint.beta: expected " + std::to_string(c.lambda.size()) +
              " entries to match multipoint.lambda (got " + std::to_string(c.beta.size()) + ")");
    for (std::size_t k = 0; k < c.lambda.size(); ++k) {
        check(std::isfinite(c.lambda[k]) && c.lambda[k] > 0.0,
              "multipoint.lambda[" + std::to_string(k) + "]: must be positive");
        for (std::size_t j = 0; j < k; ++j)
            check(c.lambda[j] != c.lambda[k],
                  "multipoint.lambda: entries " + std::to_string(j) + " and " +
                      std::to_string(k) + " coincide");
        if (std::isfinite(c.dt) && c.dt > 0.0)
            check(std::lround(c.lambda[k] / c.dt) >= 1,
                  "multipoint.lambda[" + std::to_string(k) +
                      "]: smaller than one time step run.dt");
        if (std::isfinite(c.t_total) && c.t_total > 0.0)
            check(c.lambda[k] <= c.t_total,
                  "multipoint.lambda[" + std::to_string(k) +
                      "]: coupling time exceeds run.T_total");
    }

    check(c.f_name == "zero" || c.f_name == "quadratic" || c.f_name == "cubic" ||
              c.f_name == "focusing-cubic" || c.f_name == "sine",
          "nonlinearity.name: unknown nonlinearity '" + c.f_name + "'");

    const auto check_initial = [&](const char* which, const InitialSpec& s) {
        const std::string base = std::string("initial.") + which;
        check(valid_initial_kind(s.kind), base + ": unknown kind '" + s.kind + "'");
        check(std::isfinite(s.amplitude), base + "_amplitude: must be finite");
        check(std::isfinite(s.width) && s.width > 0.0, base + "_width: must be positive");
        check(std::isfinite(s.center), base + "_center: must be finite");
        if (s.kind == "harmonic")
            check(s.k >= 1 && s.k < c.points / 2,
                  base + "_k: harmonic index must lie in [1, N/2)");
    };
    check_initial("phi", c.phi);
    check_initial("psi", c.psi);

    check(std::isfinite(c.t_total) && c.t_total > 0.0, "run.T_total: must be positive");
    check(std::isfinite(c.dt) && c.dt > 0.0, "run.dt: must be positive");
    if (std::isfinite(c.dt) && c.dt > 0.0 && std::isfinite(c.t_total))
        check(c.t_total >= c.dt, "run.T_total: must cover at least one time step");
    check(std::isfinite(c.tol_fp) && c.tol_fp > 0.0, "run.tol_fp: must be positive");
    check(std::isfinite(c.tol_mp) && c.tol_mp > 0.0, "run.tol_mp: must be positive");
    check(std::isfinite(c.tol_e) && c.tol_e > 0.0, "run.tol_E: must be positive");
    check(std::isfinite(c.tol_d0) && c.tol_d0 > 0.0, "run.tol_d0: must be positive");
    check(std::isfinite(c.blowup_threshold) && c.blowup_threshold > 0.0,
          "run.blowup_threshold: must be positive");
    check(c.max_iter >= 1, "run.max_iter: must be >= 1");
    check(std::isfinite(c.target_ratio) && c.target_ratio > 0.0 && c.target_ratio < 1.0,
          "run.target_ratio: must lie in (0, 1)");
    check(std::isfinite(c.c0) && c.c0 > 0.0, "run.c0: must be positive");
    check(std::isfinite(c.c1) && c.c1 > 0.0, "run.c1: must be positive");
    check(c.min_steps >= 1, "run.min_steps: must be >= 1");
    check(std::isfinite(c.sobolev_s) && c.sobolev_s >= 0.0, "run.sobolev_s: must be >= 0");
    check(std::isfinite(c.lebesgue_p) && c.lebesgue_p >= 1.0, "run.lebesgue_p: must be >= 1");
    check(c.restart_policy == "same" || c.restart_policy == "cauchy_after_first",
          "continuation.multipoint_restart: must be 'same' or 'cauchy_after_first'");
    check(c.zero_mode_policy == "strict" || c.zero_mode_policy == "projected",
          "energy.zero_mode: must be 'strict' or 'projected'");
    check(c.energy_stride >= 1, "energy.stride: must be >= 1");
    check(!c.out_dir.empty(), "output.dir: must not be empty");
    check(c.field_dumps == "none" || c.field_dumps == "endpoints" || c.field_dumps == "all",
          "output.field_dumps: must be 'none', 'endpoints', or 'all'");
    check(c.output_stride >= 1, "output.stride: must be >= 1");
    check(c.study_rungs >= 2, "study.rungs: must be >= 2");
}

}  // namespace

Field make_initial(const Grid& g, const InitialSpec& spec, std::uint64_t seed) {
    if (spec.kind == "zero") return Field::zero(g);
    if (!valid_initial_kind(spec.kind))
        throw SolverError(ErrorCode::validation,
                          "unknown initial data kind '" + spec.kind + "'");
    if (!(spec.width > 0.0) || !std::isfinite(spec.width))
        throw SolverError(ErrorCode::validation, "initial data width must be positive");
    if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.center))
        throw SolverError(ErrorCode::validation, "initial data parameters must be finite");

    std::vector<double> vals(g.size(), 0.0);
    const double w2 = spec.width * spec.width;

    if (spec.kind == "gaussian" || spec.kind == "gaussian_ddx") {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const auto x = g.point(i);
            double q = 0.0;
            for (int d = 0; d < g.dim(); ++d) {
                const double dxd = x[d] - spec.center;
                q += dxd * dxd;
            }
            const double bump = spec.amplitude * std::exp(-q / w2);
            vals[i] = spec.kind == "gaussian"
                          ? bump
                          : -2.0 * (x[0] - spec.center) / w2 * bump;
        }
    } else if (spec.kind == "harmonic") {
        if (spec.k < 1 || spec.k >= g.n() / 2)
            throw SolverError(ErrorCode::validation,
                              "harmonic index must lie in [1, N/2)");
        const double xi = 2.0 * M_PI * spec.k / g.length();
        for (std::size_t i = 0; i < vals.size(); ++i)
            vals[i] = spec.amplitude * std::cos(xi * g.point(i)[0]);
    } else {  // random_bumps
        std::mt19937_64 rng(seed);
        for (int b = 0; b < 3; ++b) {
            const double amp = uniform(rng, -1.0, 1.0) * spec.amplitude;
            std::array<double, 3> ctr{0.0, 0.0, 0.0};
            for (int d = 0; d < g.dim(); ++d)
                ctr[d] = uniform(rng, -0.25 * g.length(), 0.25 * g.length());
            const double wb = uniform(rng, 0.5, 2.0) * spec.width;
            const double wb2 = wb * wb;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                const auto x = g.point(i);
                double q = 0.0;
                for (int d = 0; d < g.dim(); ++d) {
                    const double dxd = x[d] - ctr[d];
                    q += dxd * dxd;
                }
                vals[i] += amp * std::exp(-q / wb2);
            }
        }
    }
    return Field::from_physical(g, std::move(vals));
}

Grid ScenarioConfig::make_grid() const { return Grid(dim, points, length); }

KernelSpec ScenarioConfig::make_kernel() const {
    KernelSpec k;
    k.a = a;
    k.bhat = make_symbol(b_name, b_param);
    k.ghat = make_symbol(g_name, g_param);
    k.r = g_decay_r;
    k.b_desc = b_name + "(" + fmt_g17(b_param) + ")";
    k.g_desc = g_name + "(" + fmt_g17(g_param) + ")";
    return k;
}

MultipointSpec ScenarioConfig::make_multipoint() const {
    MultipointSpec mp;
    for (double v : alpha) mp.alpha.emplace_back(v, 0.0);
    for (double v : beta) mp.beta.emplace_back(v, 0.0);
    mp.lambda = lambda;
    return mp;
}

NonlinearitySpec ScenarioConfig::make_f() const { return make_nonlinearity(f_name); }

Field ScenarioConfig::make_phi(const Grid& g) const { return make_initial(g, phi, seed); }

Field ScenarioConfig::make_psi(const Grid& g) const {
    // Distinct stream so phi and psi random data decorrelate under one seed.
    return make_initial(g, psi, seed ^ 0x9e3779b97f4a7c15ull);
}

EnergyOptions ScenarioConfig::energy_options() const {
    EnergyOptions opts;
    opts.zero_mode =
        zero_mode_policy == "projected" ? ZeroModePolicy::projected : ZeroModePolicy::strict;
    return opts;
}

FixedPointOptions ScenarioConfig::fixed_point_options() const {
    FixedPointOptions fpo;
    fpo.c0 = c0;
    fpo.c1 = c1;
    fpo.tol_fp = tol_fp;
    fpo.max_iter = max_iter;
    fpo.auto_calibrate = auto_calibrate;
    fpo.target_ratio = target_ratio;
    fpo.min_steps = min_steps;
    fpo.escape_norm = blowup_threshold;
    fpo.s = sobolev_s;
    fpo.p = lebesgue_p;
    fpo.linear.tol_d0 = tol_d0;
    return fpo;
}

ContinuationOptions ScenarioConfig::continuation_options() const {
    ContinuationOptions opts;
    opts.fp = fixed_point_options();
    opts.blowup_threshold = blowup_threshold;
    opts.multipoint_first_window_only = restart_policy == "cauchy_after_first";
    return opts;
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::echo() const {
    const auto b = [](bool v) { return v ? std::string("true") : std::string("false"); };
    return {
        {"grid.n", std::to_string(dim)},
        {"grid.N", std::to_string(points)},
        {"grid.L", fmt_g17(length)},
        {"kernel.a", fmt_g17(a)},
        {"kernel.b", b_name},
        {"kernel.b_param", fmt_g17(b_param)},
        {"kernel.g", g_name},
        {"kernel.g_param", fmt_g17(g_param)},
        {"kernel.g_r", fmt_g17(g_decay_r)},
        {"multipoint.alpha", format_list(alpha)},
        {"multipoint.beta", format_list(beta)},
        {"multipoint.lambda", format_list(lambda)},
        {"nonlinearity.name", f_name},
        {"initial.phi", phi.kind},
        {"initial.phi_amplitude", fmt_g17(phi.amplitude)},
        {"initial.phi_width", fmt_g17(phi.width)},
        {"initial.phi_center", fmt_g17(phi.center)},
        {"initial.phi_k", std::to_string(phi.k)},
        {"initial.psi", psi.kind},
        {"initial.psi_amplitude", fmt_g17(psi.amplitude)},
        {"initial.psi_width", fmt_g17(psi.width)},
        {"initial.psi_center", fmt_g17(psi.center)},
        {"initial.psi_k", std::to_string(psi.k)},
        {"run.T_total", fmt_g17(t_total)},
        {"run.dt", fmt_g17(dt)},
        {"run.tol_fp", fmt_g17(tol_fp)},
        {"run.tol_mp", fmt_g17(tol_mp)},
        {"run.tol_E", fmt_g17(tol_e)},
        {"run.tol_d0", fmt_g17(tol_d0)},
        {"run.blowup_threshold", fmt_g17(blowup_threshold)},
        {"run.seed", std::to_string(seed)},
        {"run.max_iter", std::to_string(max_iter)},
        {"run.target_ratio", fmt_g17(target_ratio)},
        {"run.c0", fmt_g17(c0)},
        {"run.c1", fmt_g17(c1)},
        {"run.min_steps", std::to_string(min_steps)},
        {"run.auto_calibrate", b(auto_calibrate)},
        {"run.sobolev_s", fmt_g17(sobolev_s)},
        {"run.lebesgue_p", fmt_g17(lebesgue_p)},
        {"continuation.multipoint_restart", restart_policy},
        {"energy.zero_mode", zero_mode_policy},
        {"energy.stride", std::to_string(energy_stride)},
        {"output.dir", out_dir},
        {"output.field_dumps", field_dumps},
        {"output.stride", std::to_string(output_stride)},
        {"study.rungs", std::to_string(study_rungs)},
    };
}

ScenarioConfig parse_config_text(const std::string& text) {
    static const std::map<std::string, Handler> handlers = make_handlers();

    ScenarioConfig cfg;
    std::vector<std::string> bad;
    std::vector<std::string> seen;

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        // Strip comments, respecting double-quoted strings.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad.push_back("line " + std::to_string(lineno) + ": expected key = value, got '" +
                          line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));

        const auto it = handlers.find(key);
        if (it == handlers.end()) {
            std::string best;
            std::size_t best_d = std::string::npos;
            for (const auto& [known, _] : handlers) {
                const std::size_t d = levenshtein(key, known);
                if (d < best_d) {
                    best_d = d;
                    best = known;
                }
            }
            std::string msg = "line " + std::to_string(lineno) + ": unknown key '" + key + "'";
            if (best_d <= std::max<std::size_t>(2, key.size() / 3))
                msg += " (did you mean '" + best + "'?)";
            bad.push_back(msg);
            continue;
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            bad.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            continue;
        }
        seen.push_back(key);
        if (const auto err = it->second(cfg, raw))
            bad.push_back("line " + std::to_string(lineno) + ": " + key + ": " + *err +
                          " (got '" + raw + "')");
    }

    cross_validate(cfg, bad);
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SolverError(ErrorCode::io, "cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace nlwave
