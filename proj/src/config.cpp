#include "qusa/config.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qusa/common.hpp"

namespace qusa {

namespace {

/// One parsed key=value entry with its source line for error reporting.
struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

const char* const kKnownSections[] = {"run",     "network",  "hamiltonian", "noise",
                                      "schedule", "anneal",   "ensemble",    "sweep",
                                      "takeoff",  "output"};

bool known_section(const std::string& name) {
    for (const char* s : kKnownSections)
        if (name == s) return true;
    return false;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Section/key store with consumption tracking, so anything left over after
/// resolution is reported as an unknown key.
class ConfigReader {
  public:
    explicit ConfigReader(std::string source) : source_(std::move(source)) {}

    const std::string& source() const { return source_; }

    void note_section(const std::string& section, int line) {
        section_lines_.emplace(section, line);
    }

    void insert(const std::string& section, const std::string& key, const std::string& value,
                int line) {
        note_section(section, line);
        auto [it, inserted] = data_[section].emplace(key, Entry{value, line, false});
        if (!inserted)
            throw ParseError(source_, line, "duplicate key '" + key + "' in [" + section + "]");
    }

    std::optional<std::string> take(const std::string& section, const std::string& key) {
        auto sit = data_.find(section);
        if (sit == data_.end()) return std::nullopt;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return std::nullopt;
        kit->second.consumed = true;
        last_line_ = kit->second.line;
        return kit->second.value;
    }

    std::string take_string(const std::string& section, const std::string& key,
                            const std::string& fallback) {
        return take(section, key).value_or(fallback);
    }

    std::string take_required(const std::string& section, const std::string& key) {
        auto v = take(section, key);
        if (!v) throw ParseError(source_, 0, "missing required key '" + key + "' in [" + section + "]");
        return *v;
    }

    double parse_double(const std::string& section, const std::string& key,
                        const std::string& text) const {
        const std::string t = trim(text);
        const char* begin = t.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (t.empty() || end != begin + t.size())
            throw ParseError(source_, last_line_,
                             "bad number for [" + section + "] " + key + ": '" + text + "'");
        return v;
    }

    double take_double(const std::string& section, const std::string& key, double fallback) {
        auto v = take(section, key);
        return v ? parse_double(section, key, *v) : fallback;
    }

    std::optional<double> take_double_opt(const std::string& section, const std::string& key) {
        auto v = take(section, key);
        if (!v) return std::nullopt;
        return parse_double(section, key, *v);
    }

    long long take_integer(const std::string& section, const std::string& key, long long fallback,
                           long long minimum) {
        auto v = take(section, key);
        if (!v) return fallback;
        const std::string t = trim(*v);
        long long out = 0;
        const auto [ptr, ec] = std::from_chars(t.c_str(), t.c_str() + t.size(), out);
        if (ec != std::errc{} || ptr != t.c_str() + t.size() || out < minimum)
            throw ParseError(source_, last_line_,
                             "bad count for [" + section + "] " + key + ": '" + *v + "'");
        return out;
    }

    std::uint64_t take_u64(const std::string& section, const std::string& key,
                           std::uint64_t fallback) {
        auto v = take(section, key);
        if (!v) return fallback;
        const std::string t = trim(*v);
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(t.c_str(), t.c_str() + t.size(), out);
        if (ec != std::errc{} || ptr != t.c_str() + t.size())
            throw ParseError(source_, last_line_,
                             "bad seed for [" + section + "] " + key + ": '" + *v + "'");
        return out;
    }

    bool take_bool(const std::string& section, const std::string& key, bool fallback) {
        auto v = take(section, key);
        if (!v) return fallback;
        const std::string t = trim(*v);
        if (t == "true" || t == "1") return true;
        if (t == "false" || t == "0") return false;
        throw ParseError(source_, last_line_,
                         "bad boolean for [" + section + "] " + key + ": '" + *v + "'");
    }

    /// Commas and whitespace both separate list entries.
    std::vector<double> take_list(const std::string& section, const std::string& key) {
        auto v = take(section, key);
        std::vector<double> out;
        if (!v) return out;
        std::string cleaned = *v;
        for (char& c : cleaned)
            if (c == ',') c = ' ';
        std::istringstream ss(cleaned);
        std::string tok;
        while (ss >> tok) out.push_back(parse_double(section, key, tok));
        return out;
    }

    /// Enum values are matched against lowercase names; the error lists them.
    std::string take_choice(const std::string& section, const std::string& key,
                            const std::string& fallback,
                            std::initializer_list<const char*> allowed) {
        const std::string v = trim(take(section, key).value_or(fallback));
        for (const char* a : allowed)
            if (v == a) return v;
        std::string msg = "bad value for [" + section + "] " + key + ": '" + v + "' (expected";
        for (const char* a : allowed) msg += std::string(" ") + a;
        msg += ")";
        throw ParseError(source_, last_line_, msg);
    }

    bool has(const std::string& section, const std::string& key) const {
        auto sit = data_.find(section);
        return sit != data_.end() && sit->second.count(key) > 0;
    }

    int last_line() const { return last_line_; }

    /// Rejects unknown sections; runs before resolution so a typo in a
    /// section name is reported as itself, not as missing keys.
    void check_sections() const {
        for (const auto& [name, line] : section_lines_)
            if (!known_section(name))
                throw ParseError(source_, line, "unknown section [" + name + "]");
    }

    /// Rejects unconsumed keys.
    void finish() const {
        for (const auto& [section, entries] : data_)
            for (const auto& [key, entry] : entries)
                if (!entry.consumed)
                    throw ParseError(source_, entry.line,
                                     "unknown key '" + key + "' in [" + section + "]");
    }

  private:
    std::string source_;
    std::map<std::string, std::map<std::string, Entry>> data_;
    std::map<std::string, int> section_lines_;
    mutable int last_line_ = 0;
};

void parse_ini_into(ConfigReader& reader, const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string stripped = trim(raw.substr(0, raw.find('#')));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']' || stripped.size() < 3)
                throw ParseError(source, line, "malformed section header '" + stripped + "'");
            section = trim(stripped.substr(1, stripped.size() - 2));
            reader.note_section(section, line);
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError(source, line, "expected key = value, got '" + stripped + "'");
        if (section.empty())
            throw ParseError(source, line, "key before any [section] header");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ParseError(source, line, "empty key");
        reader.insert(section, key, value, line);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Inline network/cover text uses ';' in place of newlines so it fits on one
/// config line.
std::string expand_semicolons(const std::string& text) {
    std::string out = text;
    for (char& c : out)
        if (c == ';') c = '\n';
    return out;
}

TriodeNetwork resolve_network(ConfigReader& reader, const std::filesystem::path& base_dir) {
    struct Source {
        const char* key;
        bool is_cover;
        bool is_file;
    };
    static const Source kSources[] = {{"file", false, true},
                                      {"cover_file", true, true},
                                      {"inline", false, false},
                                      {"cover", true, false}};
    const Source* chosen = nullptr;
    for (const Source& s : kSources) {
        if (!reader.has("network", s.key)) continue;
        if (chosen)
            throw ParseError(reader.source(), 0,
                             std::string("[network] has both '") + chosen->key + "' and '" +
                                 s.key + "'; give exactly one source");
        chosen = &s;
    }
    if (!chosen)
        throw ParseError(reader.source(), 0,
                         "[network] needs one of: file, cover_file, inline, cover");
    const std::string value = *reader.take("network", chosen->key);
    std::string text;
    std::string source;
    if (chosen->is_file) {
        std::filesystem::path p(value);
        if (p.is_relative()) p = base_dir / p;
        text = read_file(p.string());
        source = p.string();
    } else {
        text = expand_semicolons(value);
        source = reader.source() + " [network] " + chosen->key;
    }
    std::istringstream in(text);
    if (chosen->is_cover) {
        const ExactCoverInstance instance = parse_exact_cover(in, source);
        return encode_exact_cover(instance).network;
    }
    return parse_network(in, source);
}

RunKindConfig parse_kind(const std::string& name, const std::string& source, int line) {
    if (name == "solve") return RunKindConfig::Solve;
    if (name == "anneal-classical") return RunKindConfig::AnnealClassical;
    if (name == "simulate-comparison") return RunKindConfig::SimulateComparison;
    if (name == "simulate-projected") return RunKindConfig::SimulateProjected;
    if (name == "simulate-symmetrized") return RunKindConfig::SimulateSymmetrized;
    if (name == "ensemble") return RunKindConfig::Ensemble;
    if (name == "zeno-sweep") return RunKindConfig::ZenoSweep;
    if (name == "leak-sweep") return RunKindConfig::LeakSweep;
    throw ParseError(source, line,
                     "bad value for [run] kind: '" + name +
                         "' (expected solve anneal-classical simulate-comparison "
                         "simulate-projected simulate-symmetrized ensemble zeno-sweep "
                         "leak-sweep)");
}

RunConfig resolve(ConfigReader& reader, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    reader.check_sections();

    const std::string kind_name = reader.take_required("run", "kind");
    cfg.kind = parse_kind(trim(kind_name), reader.source(), reader.last_line());
    cfg.seed = reader.take_u64("run", "seed", 1);
    cfg.out_dir = reader.take_string("run", "out", "out");

    cfg.network = resolve_network(reader, base_dir);
    cfg.model = reader.take_choice("network", "model", "triode", {"triode", "equ"}) == "equ"
                    ? Model::Equ
                    : Model::Triode;

    cfg.hamiltonian.g = reader.take_double("hamiltonian", "g", 1.0);
    cfg.hamiltonian.g_prime = reader.take_double("hamiltonian", "g_prime", 0.0);
    cfg.hamiltonian.trap_free = reader.take_bool("hamiltonian", "trap_free", false);
    cfg.hamiltonian.gamma = reader.take_double("hamiltonian", "gamma", 0.0);

    cfg.schedule.dt = reader.take_double("schedule", "dt", 0.1);
    cfg.schedule.projection_interval = reader.take_double("schedule", "projection_interval", 1.0);
    cfg.schedule.total_time = reader.take_double("schedule", "total_time", 10.0);
    cfg.schedule.renormalize = reader.take_bool("schedule", "renormalize", true);
    cfg.schedule.stepper =
        reader.take_choice("schedule", "stepper", "expm", {"euler", "expm"}) == "euler"
            ? Stepper::Euler
            : Stepper::Expm;
    cfg.schedule.allow_coarse_dt = reader.take_bool("schedule", "allow_coarse_dt", false);

    cfg.noise.b0 = reader.take_double("noise", "b0", 0.1);
    const std::string sched =
        reader.take_choice("noise", "schedule", "constant", {"constant", "linear", "exponential"});
    cfg.noise.schedule = sched == "constant"  ? AmplitudeSchedule::Constant
                         : sched == "linear" ? AmplitudeSchedule::LinearDecay
                                              : AmplitudeSchedule::ExponentialDecay;
    // Decaying schedules default to a third of the run, so bare configs relax
    // the drive on the run's own timescale.
    const auto decay = reader.take_double_opt("noise", "decay_time");
    cfg.noise.decay_time = decay ? *decay
                           : sched == "constant" ? 0.0
                                                 : cfg.schedule.total_time / 3.0;
    cfg.noise.floor_fraction = reader.take_double("noise", "floor", 0.05);
    cfg.noise.tau_c = reader.take_double("noise", "tau_c", 1.0);
    cfg.noise.polarization =
        reader.take_choice("noise", "polarization", "isotropic", {"isotropic", "principal"}) ==
                "principal"
            ? Polarization::Principal
            : Polarization::Isotropic;
    cfg.noise.pair_symmetric = reader.take_bool("noise", "pair_symmetric", false);

    cfg.anneal.steps = reader.take_integer("anneal", "steps", 10000, 1);
    const std::string profile =
        reader.take_choice("anneal", "profile", "linear", {"constant", "linear", "geometric"});
    cfg.anneal.profile = profile == "constant"  ? TemperatureProfile::Constant
                         : profile == "linear" ? TemperatureProfile::Linear
                                                : TemperatureProfile::Geometric;
    cfg.anneal.temp_start = reader.take_double("anneal", "temp_start", 2.0);
    cfg.anneal.temp_end = reader.take_double("anneal", "temp_end", 0.0);

    cfg.ensemble_count = static_cast<int>(reader.take_integer("ensemble", "count", 100, 1));
    const std::string run = reader.take_choice("ensemble", "run", "projected",
                                               {"comparison", "projected", "symmetrized"});
    cfg.ensemble_kind = run == "comparison"  ? RunKind::Comparison
                        : run == "projected" ? RunKind::Projected
                                             : RunKind::Symmetrized;

    cfg.sweep_intervals = reader.take_list("sweep", "intervals");
    cfg.sweep_ensemble = static_cast<int>(reader.take_integer("sweep", "ensemble", 25, 1));

    cfg.window_start = reader.take_double_opt("takeoff", "window_start");
    cfg.window_end = reader.take_double_opt("takeoff", "window_end");
    if (cfg.window_start.has_value() != cfg.window_end.has_value())
        throw ParseError(reader.source(), 0,
                         "[takeoff] needs both window_start and window_end or neither");
    if (cfg.window_start && *cfg.window_end <= *cfg.window_start)
        throw ParseError(reader.source(), 0, "[takeoff] window_end must exceed window_start");

    cfg.snapshot_times = reader.take_list("output", "snapshots");
    cfg.dump_fields = reader.take_bool("output", "fields", false);
    cfg.dump_fluctuation = reader.take_bool("output", "fluctuation", false);

    reader.finish();

    try {
        cfg.hamiltonian.validate();
        cfg.noise.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(reader.source(), 0, e.what());
    }
    if (cfg.schedule.dt <= 0) throw ParseError(reader.source(), 0, "[schedule] dt must be positive");
    if (cfg.schedule.total_time <= 0)
        throw ParseError(reader.source(), 0, "[schedule] total_time must be positive");
    if (cfg.schedule.projection_interval <= 0)
        throw ParseError(reader.source(), 0, "[schedule] projection_interval must be positive");
    return cfg;
}

}  // namespace

std::string to_string(RunKindConfig kind) {
    switch (kind) {
        case RunKindConfig::Solve: return "solve";
        case RunKindConfig::AnnealClassical: return "anneal-classical";
        case RunKindConfig::SimulateComparison: return "simulate-comparison";
        case RunKindConfig::SimulateProjected: return "simulate-projected";
        case RunKindConfig::SimulateSymmetrized: return "simulate-symmetrized";
        case RunKindConfig::Ensemble: return "ensemble";
        case RunKindConfig::ZenoSweep: return "zeno-sweep";
        case RunKindConfig::LeakSweep: return "leak-sweep";
    }
    throw std::logic_error("unreachable run kind");
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::logic_error("double formatting failed");
    return std::string(buf, ptr);
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
    ConfigReader reader(source);
    parse_ini_into(reader, text, source);
    std::filesystem::path base = std::filesystem::path(source).parent_path();
    return resolve(reader, base);
}

RunConfig parse_manifest_json(const std::string& text, const std::string& source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source, 0, e.what());
    }
    if (!doc.is_object() || !doc.contains("config") || !doc["config"].is_object())
        throw ParseError(source, 0, "manifest needs a top-level 'config' object");
    ConfigReader reader(source);
    for (const auto& [section, entries] : doc["config"].items()) {
        if (!entries.is_object())
            throw ParseError(source, 0, "manifest section '" + section + "' is not an object");
        reader.note_section(section, 0);
        for (const auto& [key, value] : entries.items()) {
            if (!value.is_string())
                throw ParseError(source, 0,
                                 "manifest value [" + section + "] " + key + " is not a string");
            reader.insert(section, key, value.get<std::string>(), 0);
        }
    }
    return resolve(reader, std::filesystem::path(source).parent_path());
}

RunConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_manifest_json(text, path);
    return parse_config_text(text, path);
}

std::string manifest_json(const RunConfig& cfg) {
    using nlohmann::json;
    json sections;

    sections["run"] = {{"kind", to_string(cfg.kind)},
                       {"seed", std::to_string(cfg.seed)},
                       {"out", cfg.out_dir}};

    sections["network"] = {{"inline", to_text(cfg.network, "; ")},
                           {"model", cfg.model == Model::Equ ? "equ" : "triode"}};

    sections["hamiltonian"] = {{"g", format_double(cfg.hamiltonian.g)},
                               {"g_prime", format_double(cfg.hamiltonian.g_prime)},
                               {"trap_free", cfg.hamiltonian.trap_free ? "true" : "false"},
                               {"gamma", format_double(cfg.hamiltonian.gamma)}};

    const char* noise_schedule = cfg.noise.schedule == AmplitudeSchedule::Constant ? "constant"
                                 : cfg.noise.schedule == AmplitudeSchedule::LinearDecay
                                     ? "linear"
                                     : "exponential";
    sections["noise"] = {
        {"b0", format_double(cfg.noise.b0)},
        {"schedule", noise_schedule},
        {"decay_time", format_double(cfg.noise.decay_time)},
        {"floor", format_double(cfg.noise.floor_fraction)},
        {"tau_c", format_double(cfg.noise.tau_c)},
        {"polarization",
         cfg.noise.polarization == Polarization::Principal ? "principal" : "isotropic"},
        {"pair_symmetric", cfg.noise.pair_symmetric ? "true" : "false"}};

    sections["schedule"] = {
        {"dt", format_double(cfg.schedule.dt)},
        {"projection_interval", format_double(cfg.schedule.projection_interval)},
        {"total_time", format_double(cfg.schedule.total_time)},
        {"renormalize", cfg.schedule.renormalize ? "true" : "false"},
        {"stepper", cfg.schedule.stepper == Stepper::Euler ? "euler" : "expm"},
        {"allow_coarse_dt", cfg.schedule.allow_coarse_dt ? "true" : "false"}};

    const char* profile = cfg.anneal.profile == TemperatureProfile::Constant ? "constant"
                          : cfg.anneal.profile == TemperatureProfile::Linear ? "linear"
                                                                              : "geometric";
    sections["anneal"] = {{"steps", std::to_string(cfg.anneal.steps)},
                          {"profile", profile},
                          {"temp_start", format_double(cfg.anneal.temp_start)},
                          {"temp_end", format_double(cfg.anneal.temp_end)}};

    const char* run = cfg.ensemble_kind == RunKind::Comparison  ? "comparison"
                      : cfg.ensemble_kind == RunKind::Projected ? "projected"
                                                                 : "symmetrized";
    sections["ensemble"] = {{"count", std::to_string(cfg.ensemble_count)}, {"run", run}};

    std::string intervals;
    for (std::size_t i = 0; i < cfg.sweep_intervals.size(); ++i) {
        if (i) intervals += ' ';
        intervals += format_double(cfg.sweep_intervals[i]);
    }
    sections["sweep"] = {{"intervals", intervals},
                         {"ensemble", std::to_string(cfg.sweep_ensemble)}};

    if (cfg.window_start)
        sections["takeoff"] = {{"window_start", format_double(*cfg.window_start)},
                               {"window_end", format_double(*cfg.window_end)}};

    std::string snapshots;
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        if (i) snapshots += ' ';
        snapshots += format_double(cfg.snapshot_times[i]);
    }
    sections["output"] = {{"snapshots", snapshots},
                          {"fields", cfg.dump_fields ? "true" : "false"},
                          {"fluctuation", cfg.dump_fluctuation ? "true" : "false"}};

    json doc;
    doc["qusa_manifest"] = 1;
    doc["config"] = sections;
    return doc.dump(2) + "\n";
}

}  // namespace qusa
