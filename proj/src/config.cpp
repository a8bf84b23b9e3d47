#include "fractrans/config.hpp"

#include "fractrans/grid.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace fractrans {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& kind_table()
{
    static const std::vector<std::pair<ExperimentKind, std::string>> t{
        {ExperimentKind::Simulate, "simulate"},
        {ExperimentKind::VerifyOperators, "verify-operators"},
        {ExperimentKind::VerifyWeights, "verify-weights"},
        {ExperimentKind::VerifyCommutators, "verify-commutators"},
        {ExperimentKind::VerifyInequalities, "verify-inequalities"},
        {ExperimentKind::RelaxationStudy, "relaxation-study"},
        {ExperimentKind::BlowupSweep, "blowup-sweep"},
        {ExperimentKind::CalibrateConstants, "calibrate-constants"},
    };
    return t;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v)
{
    double out = 0.0;
    const auto s = trim(v);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(out))
        throw std::invalid_argument("expected a number, got '" + v + "'");
    return out;
}

std::uint64_t to_unsigned(const std::string& v)
{
    std::uint64_t out = 0;
    const auto s = trim(v);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw std::invalid_argument("expected a nonnegative integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v)
{
    std::string s = trim(v);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(to_double(item));
    return out;
}

std::string fmt(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string fmt_list(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

struct Key {
    std::string name;  // section.key
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    bool hashed = true;  // false: placement and scheduling only
};

#define NUM(field) [](ExperimentConfig& c, const std::string& v) { c.field = to_double(v); }, \
                   [](const ExperimentConfig& c) { return fmt(c.field); }
#define UINT(field, type) [](ExperimentConfig& c, const std::string& v) { c.field = static_cast<type>(to_unsigned(v)); }, \
                          [](const ExperimentConfig& c) { return std::to_string(c.field); }
#define BOOL(field) [](ExperimentConfig& c, const std::string& v) { c.field = to_bool(v); }, \
                    [](const ExperimentConfig& c) { return std::string(c.field ? "true" : "false"); }
#define LIST(field) [](ExperimentConfig& c, const std::string& v) { c.field = to_list(v); }, \
                    [](const ExperimentConfig& c) { return fmt_list(c.field); }
#define TEXT(field) [](ExperimentConfig& c, const std::string& v) { c.field = trim(v); }, \
                    [](const ExperimentConfig& c) { return c.field; }

const std::vector<Key>& keys()
{
    static const std::vector<Key> k{
        {"grid.L", NUM(half_length)},
        {"grid.N", UINT(n, std::size_t)},
        {"equation.alpha", NUM(solver.alpha)},
        {"equation.nu", NUM(solver.nu)},
        {"equation.epsilon", NUM(solver.epsilon)},
        {"equation.eta", NUM(solver.eta)},
        {"equation.nonlinear", BOOL(solver.nonlinear)},
        {"equation.dealias", BOOL(solver.dealias)},
        {"time.t_end", NUM(solver.t_end)},
        {"time.step",
         [](ExperimentConfig& c, const std::string& v) {
             const auto s = trim(v);
             if (s == "fixed") c.solver.step.mode = StepMode::Fixed;
             else if (s == "adaptive") c.solver.step.mode = StepMode::Adaptive;
             else throw std::invalid_argument("expected fixed or adaptive, got '" + v + "'");
         },
         [](const ExperimentConfig& c) { return std::string(c.solver.step.mode == StepMode::Fixed ? "fixed" : "adaptive"); }},
        {"time.dt", NUM(solver.step.dt)},
        {"time.cfl", NUM(solver.step.cfl)},
        {"time.dt_max", NUM(solver.step.dt_max)},
        {"time.probe_every", UINT(solver.probe_every, std::size_t)},
        {"time.probe_interval", NUM(solver.probe_interval)},
        {"time.dt_floor", NUM(solver.dt_floor)},
        {"time.max_steps", UINT(solver.max_steps, std::size_t)},
        {"time.continue_after_breach", BOOL(solver.continue_after_breach)},
        {"data.family",
         [](ExperimentConfig& c, const std::string& v) { c.solver.initial.family = parse_family(trim(v)); },
         [](const ExperimentConfig& c) { return family_name(c.solver.initial.family); }},
        {"data.amplitude", NUM(solver.initial.amplitude)},
        {"data.width", NUM(solver.initial.width)},
        {"data.center", NUM(solver.initial.center)},
        {"data.mode",
         [](ExperimentConfig& c, const std::string& v) { c.solver.initial.mode = static_cast<int>(to_unsigned(v)); },
         [](const ExperimentConfig& c) { return std::to_string(c.solver.initial.mode); }},
        {"run.betas", LIST(betas)},
        {"run.seed", UINT(seed, std::uint64_t)},
        {"run.outdir", TEXT(outdir), false},
        {"run.run_id", TEXT(run_id), false},
        {"run.registry", TEXT(registry)},
        {"run.jobs", UINT(jobs, unsigned), false},
        {"sweep.alphas", LIST(sweep_alphas)},
        {"sweep.amplitudes", LIST(sweep_amplitudes)},
        {"relaxation.ladder",
         [](ExperimentConfig& c, const std::string& v) {
             const auto s = trim(v);
             if (s == "epsilon") c.ladder = LadderKind::Epsilon;
             else if (s == "eta") c.ladder = LadderKind::Eta;
             else throw std::invalid_argument("expected epsilon or eta, got '" + v + "'");
         },
         [](const ExperimentConfig& c) { return std::string(c.ladder == LadderKind::Epsilon ? "epsilon" : "eta"); }},
        {"relaxation.values", LIST(ladder_values)},
        {"relaxation.delta", NUM(relax_delta)},
        {"relaxation.probe_interval", NUM(relax_probe)},
        {"suite.size", UINT(suite_size, std::size_t)},
        {"truncation.L", NUM(trunc_half_length)},
        {"truncation.N", UINT(trunc_n, std::size_t)},
        {"truncation.radii", LIST(trunc_radii)},
    };
    return k;
}

#undef NUM
#undef UINT
#undef BOOL
#undef LIST
#undef TEXT

const Key* find_key(const std::string& name)
{
    for (const auto& k : keys())
        if (k.name == name) return &k;
    return nullptr;
}

void set_key(ExperimentConfig& cfg, const std::string& name, const std::string& value, const std::string& location)
{
    const Key* k = find_key(name);
    if (!k) throw ConfigParseError(name, location, "unknown key '" + name + "'");
    try {
        k->set(cfg, value);
    } catch (const std::invalid_argument& e) {
        throw ConfigParseError(name, location, e.what());
    }
}

std::string solver_key(const std::string& field)
{
    static const std::vector<std::pair<std::string, std::string>> map{
        {"alpha", "equation.alpha"},     {"nu", "equation.nu"},         {"epsilon", "equation.epsilon"},
        {"eta", "equation.eta"},         {"t_end", "time.t_end"},       {"dt", "time.dt"},
        {"cfl", "time.cfl"},             {"dt_max", "time.dt_max"},     {"probe_every", "time.probe_every"},
        {"probe_interval", "time.probe_interval"}, {"dt_floor", "time.dt_floor"}, {"max_steps", "time.max_steps"},
        {"amplitude", "data.amplitude"}, {"width", "data.width"},
    };
    for (const auto& [f, k] : map)
        if (f == field) return k;
    return field;
}

} // namespace

ConfigParseError::ConfigParseError(std::string key, std::string location, const std::string& what)
    : std::runtime_error((location.empty() ? "" : location + ": ") + (key.empty() ? "" : key + ": ") + what),
      key_(std::move(key)), location_(std::move(location))
{
}

ExperimentKind parse_kind(const std::string& name)
{
    for (const auto& [k, n] : kind_table())
        if (n == name) return k;
    throw ConfigParseError("kind", "", "unknown experiment kind '" + name + "'");
}

std::string kind_name(ExperimentKind k)
{
    for (const auto& [kk, n] : kind_table())
        if (kk == k) return n;
    return "simulate";
}

const std::vector<std::string>& kind_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, n] : kind_table()) v.push_back(n);
        return v;
    }();
    return names;
}

void ExperimentConfig::validate() const
{
    if (!(half_length > 0.0)) throw ConfigParseError("grid.L", "", "must be positive");
    try {
        Grid g(half_length, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigParseError("grid.N", "", e.what());
    }
    try {
        solver.validate();
    } catch (const ConfigError& e) {
        throw ConfigParseError(solver_key(e.field()), "", e.what());
    }
    if (solver.eta > 0.0 && !(solver.eta < half_length / 4.0))
        throw ConfigParseError("equation.eta", "", "must be below L/4");
    if (solver.initial.family == DataFamily::Mode && solver.initial.mode < 1)
        throw ConfigParseError("data.mode", "", "must be at least 1");
    if (betas.empty()) throw ConfigParseError("run.betas", "", "needs at least one value");
    for (double b : betas)
        if (!(b > 0.0 && b < 1.0)) throw ConfigParseError("run.betas", "", "values must lie in (0, 1)");
    if (jobs == 0) throw ConfigParseError("run.jobs", "", "must be at least 1");
    if (outdir.empty()) throw ConfigParseError("run.outdir", "", "must not be empty");
    if (run_id.find('/') != std::string::npos) throw ConfigParseError("run.run_id", "", "must not contain '/'");
    if (suite_size == 0) throw ConfigParseError("suite.size", "", "must be at least 1");
    if (kind == ExperimentKind::VerifyCommutators) {
        try {
            Grid tg(trunc_half_length, trunc_n);
        } catch (const std::invalid_argument& e) {
            throw ConfigParseError("truncation.N", "", e.what());
        }
        if (trunc_radii.size() < 2) throw ConfigParseError("truncation.radii", "", "needs at least two radii");
        for (std::size_t i = 0; i < trunc_radii.size(); ++i)
            if (!(trunc_radii[i] > 0.0) || (i > 0 && !(trunc_radii[i] > trunc_radii[i - 1])))
                throw ConfigParseError("truncation.radii", "", "radii must be positive and increasing");
        if (trunc_radii.back() > trunc_half_length / 4.0)
            throw ConfigParseError("truncation.radii", "", "largest radius must not exceed L/4");
    }
    if (kind == ExperimentKind::BlowupSweep) {
        if (sweep_alphas.empty() || sweep_amplitudes.empty())
            throw ConfigParseError(sweep_alphas.empty() ? "sweep.alphas" : "sweep.amplitudes", "", "sweep grid is empty");
        for (double a : sweep_alphas)
            if (!(a > 0.0 && a <= 2.0)) throw ConfigParseError("sweep.alphas", "", "values must lie in (0, 2]");
    }
    if (kind == ExperimentKind::RelaxationStudy) {
        if (ladder_values.empty()) throw ConfigParseError("relaxation.values", "", "ladder is empty");
        for (std::size_t i = 0; i < ladder_values.size(); ++i) {
            if (!(ladder_values[i] >= 0.0)) throw ConfigParseError("relaxation.values", "", "values must be nonnegative");
            if (i > 0 && !(ladder_values[i] < ladder_values[i - 1]))
                throw ConfigParseError("relaxation.values", "", "ladder must be strictly decreasing");
        }
        if (ladder == LadderKind::Eta && ladder_values.front() >= half_length / 4.0)
            throw ConfigParseError("relaxation.values", "", "eta must be below L/4");
        if (!(relax_delta >= 0.0 && relax_delta < solver.t_end))
            throw ConfigParseError("relaxation.delta", "", "must lie in [0, t_end)");
        if (!(relax_probe > 0.0)) throw ConfigParseError("relaxation.probe_interval", "", "must be positive");
    }
}

ExperimentConfig parse_config(const std::string& text, const std::string& source, ExperimentConfig cfg)
{
    std::stringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string loc = source + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') throw ConfigParseError("", loc, "malformed section header");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) throw ConfigParseError("", loc, "empty section name");
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigParseError("", loc, "expected key = value");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty()) throw ConfigParseError("", loc, "missing key");
        if (section.empty()) throw ConfigParseError(key, loc, "key outside of any [section]");
        set_key(cfg, section + "." + key, body.substr(eq + 1), loc);
    }
    return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigParseError("", "--set", "expected section.key=value, got '" + assignment + "'");
    set_key(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "--set");
}

std::string canonical_text(const ExperimentConfig& cfg)
{
    std::string s = "kind = " + kind_name(cfg.kind) + "\n";
    for (const auto& k : keys()) s += k.name + " = " + k.get(cfg) + "\n";
    return s;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string config_hash(const ExperimentConfig& cfg)
{
    std::string s = "kind = " + kind_name(cfg.kind) + "\n";
    for (const auto& k : keys())
        if (k.hashed) s += k.name + " = " + k.get(cfg) + "\n";
    return sha256_hex(s);
}

} // namespace fractrans
