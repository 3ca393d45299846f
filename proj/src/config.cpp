#include "fracpme/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fracpme/error.hpp"
#include "fracpme/output.hpp"

namespace fracpme {

namespace {

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"grid", {"half_width", "height", "intervals_x", "intervals_y", "dx", "growing_domain"}},
        {"time", {"final_time", "steps", "dt"}},
        {"phi", {"kind", "m"}},
        {"initial", {"kind", "amplitude", "mass", "values"}},
        {"solver", {"method", "tolerance", "max_iterations", "warm_start"}},
        {"output", {"snapshot_times", "full_field", "strict_cfl"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

class Document {
public:
    explicit Document(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string raw;
        std::string current;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            const auto hash = raw.find_first_of("#;");
            const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') parse_fail(line, "malformed section header");
                current = trim(s.substr(1, s.size() - 2));
                if (!known_keys().contains(current)) parse_fail(line, "unknown section [" + current + "]");
                sections_[current];
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) parse_fail(line, "expected key = value");
            if (current.empty()) parse_fail(line, "key outside of any section");
            const std::string key = trim(s.substr(0, eq));
            if (!known_keys().at(current).contains(key)) {
                parse_fail(line, "unknown key '" + key + "' in [" + current + "]");
            }
            auto [it, inserted] = sections_[current].try_emplace(key, Entry{trim(s.substr(eq + 1)), line});
            if (!inserted) parse_fail(line, "duplicate key '" + key + "'");
        }
    }

    const Entry* find(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    bool has(const std::string& section, const std::string& key) const {
        return find(section, key) != nullptr;
    }

    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
        const Entry* e = find(section, key);
        return e ? e->value : fallback;
    }

    double number(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) invalid("missing [" + section + "] " + key);
        return to_number(*e, key);
    }

    double number(const std::string& section, const std::string& key, double fallback) const {
        const Entry* e = find(section, key);
        return e ? to_number(*e, key) : fallback;
    }

    int integer(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) invalid("missing [" + section + "] " + key);
        return to_integer(*e, key);
    }

    int integer(const std::string& section, const std::string& key, int fallback) const {
        const Entry* e = find(section, key);
        return e ? to_integer(*e, key) : fallback;
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
        if (e->value == "false" || e->value == "0" || e->value == "no") return false;
        parse_fail(e->line, "key '" + key + "': expected true or false");
    }

    std::vector<double> list(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        std::vector<double> out;
        if (!e) return out;
        std::istringstream in(e->value);
        std::string item;
        while (std::getline(in, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) continue;
            out.push_back(to_number(Entry{t, e->line}, key));
        }
        return out;
    }

private:
    static double to_number(const Entry& e, const std::string& key) {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || !std::isfinite(v)) {
            parse_fail(e.line, "key '" + key + "': '" + e.value + "' is not a finite number");
        }
        return v;
    }

    static int to_integer(const Entry& e, const std::string& key) {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        const long v = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0' || v < -2147483647L || v > 2147483647L) {
            parse_fail(e.line, "key '" + key + "': '" + e.value + "' is not an integer");
        }
        return static_cast<int>(v);
    }

    std::map<std::string, Section> sections_;
};

GridSpec parse_grid(const Document& doc, std::optional<double>& growing_domain) {
    if (doc.has("grid", "growing_domain")) {
        const double k_dom = doc.number("grid", "growing_domain");
        if (!(k_dom > 0.0)) invalid("growing_domain must be positive");
        growing_domain = k_dom;
    }
    if (doc.has("grid", "intervals_x") || doc.has("grid", "intervals_y")) {
        if (doc.has("grid", "dx")) invalid("give either dx or intervals_x/intervals_y, not both");
        const GridSpec grid = GridSpec::build(doc.number("grid", "half_width"), doc.number("grid", "height"),
                                              doc.integer("grid", "intervals_x"),
                                              doc.integer("grid", "intervals_y"));
        if (growing_domain && grid.half_width() < *growing_domain / grid.dx() * (1.0 - 1e-12)) {
            invalid("half_width is smaller than growing_domain / dx");
        }
        return grid;
    }
    const double dx = doc.number("grid", "dx");
    double half_width;
    if (growing_domain) {
        half_width = sized_half_width(dx, *growing_domain);
        if (doc.has("grid", "half_width")) invalid("half_width is derived from growing_domain");
    } else {
        half_width = doc.number("grid", "half_width");
    }
    const double height = doc.number("grid", "height", half_width);
    return GridSpec::from_spacing(half_width, height, dx);
}

TimeSpec parse_time(const Document& doc) {
    const double final_time = doc.number("time", "final_time");
    if (doc.has("time", "steps")) {
        if (doc.has("time", "dt")) invalid("give either steps or dt, not both");
        return TimeSpec::make(final_time, doc.integer("time", "steps"));
    }
    const double dt = doc.number("time", "dt");
    if (!(dt > 0.0)) invalid("dt must be positive");
    const double ratio = final_time / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * ratio) {
        invalid("final_time must be a multiple of dt");
    }
    return TimeSpec::make(final_time, static_cast<int>(steps));
}

Phi parse_phi(const Document& doc) {
    const std::string kind = doc.text("phi", "kind", "power");
    if (kind == "power") return Phi::power_law(doc.number("phi", "m", 1.0));
    if (kind == "log") {
        if (doc.has("phi", "m")) invalid("m is not used by phi kind 'log'");
        return Phi::logarithmic();
    }
    invalid("unknown phi kind '" + kind + "' (expected power or log)");
}

InitialData parse_initial(const Document& doc) {
    const std::string kind = doc.text("initial", "kind", "");
    if (kind == "bump") return initial::Bump{doc.number("initial", "amplitude", 1.0)};
    if (kind == "cauchy") return initial::CauchyKernel{};
    if (kind == "dirac") return initial::DiracLike{doc.number("initial", "mass", 1.0)};
    if (kind == "sampled") return initial::Sampled{doc.list("initial", "values")};
    invalid("unknown or missing initial kind '" + kind + "' (expected bump, cauchy, dirac or sampled)");
}

SolverOptions parse_solver(const Document& doc, const GridSpec& grid, const TimeSpec& time) {
    SolverOptions opts;
    const std::string method = doc.text("solver", "method", "direct");
    if (method == "direct") {
        opts.method = SolverMethod::DirectFactorization;
    } else if (method == "relaxation") {
        opts.method = SolverMethod::IterativeRelaxation;
    } else if (method == "cg") {
        opts.method = SolverMethod::ConjugateDirection;
    } else {
        invalid("unknown solver method '" + method + "' (expected direct, relaxation or cg)");
    }
    opts.tolerance = doc.number("solver", "tolerance", default_tolerance(grid.dx(), time.dt()));
    opts.max_iterations = doc.integer("solver", "max_iterations", opts.max_iterations);
    opts.warm_start = doc.boolean("solver", "warm_start", opts.warm_start);
    if (!(opts.tolerance > 0.0)) invalid("solver tolerance must be positive");
    if (opts.max_iterations < 1) invalid("max_iterations must be >= 1");
    return opts;
}

std::string method_name(SolverMethod m) {
    switch (m) {
        case SolverMethod::DirectFactorization: return "direct";
        case SolverMethod::IterativeRelaxation: return "relaxation";
        case SolverMethod::ConjugateDirection: return "cg";
    }
    return "direct";
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(values[i]);
    }
    return out;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    const Document doc(text);
    std::optional<double> growing_domain;
    const GridSpec grid = parse_grid(doc, growing_domain);
    const TimeSpec time = parse_time(doc);
    RunConfig config{grid,
                     time,
                     parse_phi(doc),
                     parse_initial(doc),
                     parse_solver(doc, grid, time),
                     doc.list("output", "snapshot_times"),
                     growing_domain,
                     doc.boolean("output", "strict_cfl", false),
                     doc.boolean("output", "full_field", false)};
    for (const double t : config.snapshot_times) {
        if (!(t >= 0.0) || t > time.final_time) invalid("snapshot time outside [0, T]");
    }
    // Samples the data (length and domain checks) and applies the CFL gate;
    // strict configurations fail here rather than at run time.
    (void)resolve_timestep(config);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const RunConfig& c) {
    if (c.phi.kind() == Phi::Kind::Custom) {
        throw Error(ErrorCode::ValidationError, "custom phi cannot be written to a config file");
    }
    std::ostringstream os;
    os << "[grid]\n"
       << "half_width = " << format_number(c.grid.half_width()) << '\n'
       << "height = " << format_number(c.grid.height()) << '\n'
       << "intervals_x = " << c.grid.intervals_x() << '\n'
       << "intervals_y = " << c.grid.intervals_y() << '\n';
    if (c.growing_domain) os << "growing_domain = " << format_number(*c.growing_domain) << '\n';
    os << "\n[time]\n"
       << "final_time = " << format_number(c.time.final_time) << '\n'
       << "steps = " << c.time.steps << '\n';
    os << "\n[phi]\n";
    if (c.phi.kind() == Phi::Kind::PowerLaw) {
        os << "kind = power\nm = " << format_number(c.phi.exponent()) << '\n';
    } else {
        os << "kind = log\n";
    }
    os << "\n[initial]\n";
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, initial::Bump>) {
                os << "kind = bump\namplitude = " << format_number(d.amplitude) << '\n';
            } else if constexpr (std::is_same_v<T, initial::CauchyKernel>) {
                os << "kind = cauchy\n";
            } else if constexpr (std::is_same_v<T, initial::DiracLike>) {
                os << "kind = dirac\nmass = " << format_number(d.mass) << '\n';
            } else {
                os << "kind = sampled\nvalues = " << join(d.values) << '\n';
            }
        },
        c.initial);
    os << "\n[solver]\n"
       << "method = " << method_name(c.solver.method) << '\n'
       << "tolerance = " << format_number(c.solver.tolerance) << '\n'
       << "max_iterations = " << c.solver.max_iterations << '\n'
       << "warm_start = " << (c.solver.warm_start ? "true" : "false") << '\n';
    os << "\n[output]\n"
       << "snapshot_times = " << join(c.snapshot_times) << '\n'
       << "full_field = " << (c.full_field ? "true" : "false") << '\n'
       << "strict_cfl = " << (c.strict_cfl ? "true" : "false") << '\n';
    return os.str();
}

}  // namespace fracpme
