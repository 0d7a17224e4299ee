#include "relcap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "relcap/inequality.hpp"

namespace relcap {

using json = nlohmann::json;

std::string ConfigError::diagnostic() const {
    std::ostringstream out;
    if (line_ > 0) out << "line " << line_ << ", ";
    out << "field " << (field_.empty() ? std::string("<root>") : field_) << ": " << what();
    return out.str();
}

std::string to_string(Task task) {
    switch (task) {
        case Task::capacities: return "capacities";
        case Task::identities: return "identities";
        case Task::theorem: return "theorem";
        case Task::lemma: return "lemma";
        case Task::oracle: return "oracle";
        case Task::sweep: return "sweep";
    }
    return "unknown";
}

std::string to_string(SweepAxis axis) { return axis == SweepAxis::beta ? "beta" : "sigma"; }

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Line of every key and array element of an already parsed document,
// keyed by the same path syntax used in diagnostics.
std::map<std::string, int> locate(const std::string& text) {
    struct Frame {
        bool array;
        std::string path;
        std::size_t index = 0;
        bool expect_key = true;
        std::string key;
    };
    std::vector<Frame> stack;
    std::map<std::string, int> lines;
    int line = 1;
    const auto here = [&]() -> std::string {
        if (stack.empty()) return "";
        const Frame& f = stack.back();
        return f.array ? index(f.path, f.index) : join(f.path, f.key);
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
        } else if (c == '"') {
            std::string s;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\') ++i;
                if (i < text.size()) s += text[i];
            }
            if (!stack.empty() && !stack.back().array && stack.back().expect_key) {
                stack.back().key = s;
                stack.back().expect_key = false;
            }
            if (!stack.empty()) lines.emplace(here(), line);
        } else if (c == '{' || c == '[') {
            const std::string path = here();
            if (!stack.empty()) lines.emplace(path, line);
            stack.push_back(Frame{c == '[', path, 0, true, {}});
        } else if (c == '}' || c == ']') {
            if (!stack.empty()) stack.pop_back();
        } else if (c == ',') {
            if (!stack.empty()) {
                if (stack.back().array) {
                    ++stack.back().index;
                } else {
                    stack.back().expect_key = true;
                }
            }
        } else if (!stack.empty() && stack.back().array && !std::isspace(static_cast<unsigned char>(c))) {
            lines.emplace(here(), line);
        }
    }
    return lines;
}

// Line of `path` or of its nearest located ancestor; 0 if none.
int line_of(const std::map<std::string, int>& lines, std::string path) {
    while (!path.empty()) {
        if (auto it = lines.find(path); it != lines.end()) return it->second;
        const auto cut = path.find_last_of(".[");
        if (cut == std::string::npos) break;
        path.resize(cut);
    }
    return 0;
}

class Reader {
public:
    explicit Reader(const std::string& text) : lines_(locate(text)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        throw ConfigError(message, path, line_of(lines_, path));
    }

    void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : j.items()) {
            const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
            if (!known) fail(join(path, key), "unknown key '" + key + "'");
        }
    }

    double number(const json& j, const std::string& path) const {
        if (!j.is_number()) fail(path, "expected a number");
        const double v = j.get<double>();
        if (!std::isfinite(v)) fail(path, "expected a finite number");
        return v;
    }

    std::optional<double> optional_number(const json& obj, const char* key, const std::string& path) const {
        if (!obj.contains(key)) return std::nullopt;
        return number(obj.at(key), join(path, key));
    }

    double required_number(const json& obj, const char* key, const std::string& path) const {
        if (!obj.contains(key)) fail(join(path, key), "missing required key");
        return number(obj.at(key), join(path, key));
    }

    std::uint64_t count(const json& j, const std::string& path) const {
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
            fail(path, "expected a non-negative integer");
        }
        return j.get<std::uint64_t>();
    }

    std::string string(const json& j, const std::string& path) const {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

    std::vector<double> numbers(const json& j, const std::string& path) const {
        if (!j.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index(path, i)));
        return out;
    }

    // A 2- or 3-component point.
    std::pair<Vec3, int> point(const json& j, const std::string& path) const {
        const auto v = numbers(j, path);
        if (v.size() != 2 && v.size() != 3) fail(path, "expected 2 or 3 coordinates");
        return {Vec3{v[0], v[1], v.size() == 3 ? v[2] : 0.0}, static_cast<int>(v.size())};
    }

private:
    std::map<std::string, int> lines_;
};

TrajectoryParams read_trajectory(const Reader& rd, const json& j, const std::string& path,
                                 std::optional<double>& duration) {
    if (!j.is_object()) rd.fail(path, "expected an object");
    if (!j.contains("kind")) rd.fail(join(path, "kind"), "missing required key");
    const std::string kind = rd.string(j.at("kind"), join(path, "kind"));
    duration = rd.optional_number(j, "duration", path);
    if (kind == "circle") {
        rd.expect_object(j, path, {"kind", "beta", "radius", "center", "duration"});
        CircleParams p;
        p.beta = rd.required_number(j, "beta", path);
        p.radius = rd.required_number(j, "radius", path);
        if (j.contains("center")) std::tie(p.center, p.dimension) = rd.point(j.at("center"), join(path, "center"));
        return p;
    }
    if (kind == "radial_out_back") {
        rd.expect_object(j, path, {"kind", "beta", "distance", "direction", "duration"});
        RadialParams p;
        p.beta = rd.required_number(j, "beta", path);
        p.distance = rd.required_number(j, "distance", path);
        if (j.contains("direction")) {
            std::tie(p.direction, p.dimension) = rd.point(j.at("direction"), join(path, "direction"));
        }
        return p;
    }
    if (kind == "polygon") {
        rd.expect_object(j, path, {"kind", "beta", "waypoints", "duration"});
        PolygonParams p;
        p.beta = rd.required_number(j, "beta", path);
        const std::string wp = join(path, "waypoints");
        if (!j.contains("waypoints")) rd.fail(wp, "missing required key");
        const json& list = j.at("waypoints");
        if (!list.is_array()) rd.fail(wp, "expected an array of points");
        for (std::size_t i = 0; i < list.size(); ++i) {
            auto [pt, dim] = rd.point(list[i], index(wp, i));
            if (i == 0) p.dimension = dim;
            if (dim != p.dimension) rd.fail(index(wp, i), "mixed 2-D and 3-D waypoints");
            p.waypoints.push_back(pt);
        }
        return p;
    }
    if (kind == "sampled") {
        rd.expect_object(j, path, {"kind", "beta", "samples", "duration"});
        SampledParams p;
        const std::string sp = join(path, "samples");
        if (!j.contains("samples")) rd.fail(sp, "missing required key");
        const json& list = j.at("samples");
        if (!list.is_array()) rd.fail(sp, "expected an array of [t, x, y(, z)] rows");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto row = rd.numbers(list[i], index(sp, i));
            if (row.size() != 3 && row.size() != 4) rd.fail(index(sp, i), "expected [t, x, y] or [t, x, y, z]");
            const int dim = static_cast<int>(row.size()) - 1;
            if (i == 0) p.dimension = dim;
            if (dim != p.dimension) rd.fail(index(sp, i), "mixed 2-D and 3-D samples");
            p.times.push_back(row[0]);
            p.positions.push_back(Vec3{row[1], row[2], dim == 3 ? row[3] : 0.0});
        }
        if (auto beta = rd.optional_number(j, "beta", path)) {
            try {
                const Trajectory traj = make_trajectory(p);
                if (std::fabs(traj.beta() - *beta) > 1e-9 * traj.beta()) {
                    rd.fail(join(path, "beta"), "does not match the maximum sampled speed");
                }
            } catch (const DomainError& e) {
                rd.fail(path, e.what());
            }
        }
        return p;
    }
    rd.fail(join(path, "kind"), "unknown trajectory kind '" + kind + "'");
}

Task read_task(const Reader& rd, const json& j, const std::string& path) {
    const std::string name = rd.string(j, path);
    for (Task t : {Task::capacities, Task::identities, Task::theorem, Task::lemma, Task::oracle, Task::sweep}) {
        if (name == to_string(t)) return t;
    }
    rd.fail(path, "unknown task '" + name + "'");
}

ScenarioConfig read_scenario(const Reader& rd, const json& j, const std::string& path) {
    rd.expect_object(j, path, {"scenario_id", "trajectory", "channel", "numerics", "tasks", "profile", "sweep", "oracle"});
    ScenarioConfig cfg;
    if (!j.contains("scenario_id")) rd.fail(join(path, "scenario_id"), "missing required key");
    cfg.scenario_id = rd.string(j.at("scenario_id"), join(path, "scenario_id"));

    if (!j.contains("trajectory")) rd.fail(join(path, "trajectory"), "missing required key");
    cfg.trajectory = read_trajectory(rd, j.at("trajectory"), join(path, "trajectory"), cfg.duration);

    if (!j.contains("channel")) rd.fail(join(path, "channel"), "missing required key");
    {
        const std::string cp = join(path, "channel");
        const json& c = j.at("channel");
        rd.expect_object(c, cp, {"power", "sigma", "bandwidth", "noise_density"});
        cfg.channel.bandwidth = rd.required_number(c, "bandwidth", cp);
        cfg.channel.noise_density = rd.required_number(c, "noise_density", cp);
        const auto power = rd.optional_number(c, "power", cp);
        const auto sigma = rd.optional_number(c, "sigma", cp);
        if (power && sigma) rd.fail(join(cp, "sigma"), "give either power or sigma, not both");
        if (!power && !sigma) rd.fail(join(cp, "power"), "missing required key (power or sigma)");
        cfg.channel.power = power ? *power : *sigma * cfg.channel.noise_density * cfg.channel.bandwidth;
    }

    if (j.contains("numerics")) {
        const std::string np = join(path, "numerics");
        const json& n = j.at("numerics");
        rd.expect_object(n, np, {"rel_tol", "abs_tol", "max_depth", "grid", "radial_grid", "seed", "random_profiles"});
        NumericsConfig& num = cfg.numerics;
        if (auto v = rd.optional_number(n, "rel_tol", np)) num.rel_tol = *v;
        if (auto v = rd.optional_number(n, "abs_tol", np)) num.abs_tol = *v;
        if (n.contains("max_depth")) num.max_depth = static_cast<int>(rd.count(n.at("max_depth"), join(np, "max_depth")));
        if (n.contains("grid")) num.grid = rd.count(n.at("grid"), join(np, "grid"));
        if (n.contains("radial_grid")) num.radial_grid = rd.count(n.at("radial_grid"), join(np, "radial_grid"));
        if (n.contains("seed")) num.seed = rd.count(n.at("seed"), join(np, "seed"));
        if (n.contains("random_profiles")) {
            num.random_profiles = rd.count(n.at("random_profiles"), join(np, "random_profiles"));
        }
    }

    if (j.contains("tasks")) {
        const std::string tp = join(path, "tasks");
        const json& list = j.at("tasks");
        if (!list.is_array()) rd.fail(tp, "expected an array of task names");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Task t = read_task(rd, list[i], index(tp, i));
            if (std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end()) {
                rd.fail(index(tp, i), "duplicate task '" + to_string(t) + "'");
            }
            cfg.tasks.push_back(t);
        }
    }

    if (j.contains("profile")) {
        const std::string pp = join(path, "profile");
        const json& p = j.at("profile");
        rd.expect_object(p, pp, {"values", "edges"});
        ProfileConfig prof;
        if (!p.contains("values")) rd.fail(join(pp, "values"), "missing required key");
        prof.values = rd.numbers(p.at("values"), join(pp, "values"));
        if (p.contains("edges")) prof.edges = rd.numbers(p.at("edges"), join(pp, "edges"));
        cfg.profile = prof;
    }

    if (j.contains("sweep")) {
        const std::string sp = join(path, "sweep");
        const json& s = j.at("sweep");
        rd.expect_object(s, sp, {"axis", "from", "to", "steps", "sigma_factor"});
        SweepConfig sw;
        if (!s.contains("axis")) rd.fail(join(sp, "axis"), "missing required key");
        const std::string axis = rd.string(s.at("axis"), join(sp, "axis"));
        if (axis == "beta") {
            sw.axis = SweepAxis::beta;
        } else if (axis == "sigma") {
            sw.axis = SweepAxis::sigma;
        } else {
            rd.fail(join(sp, "axis"), "axis must be 'beta' or 'sigma'");
        }
        sw.from = rd.required_number(s, "from", sp);
        sw.to = rd.required_number(s, "to", sp);
        if (!s.contains("steps")) rd.fail(join(sp, "steps"), "missing required key");
        sw.steps = rd.count(s.at("steps"), join(sp, "steps"));
        sw.sigma_factor = rd.optional_number(s, "sigma_factor", sp);
        cfg.sweep = sw;
    }

    if (j.contains("oracle")) {
        const std::string op = join(path, "oracle");
        const json& o = j.at("oracle");
        rd.expect_object(o, op, {"b"});
        cfg.oracle = OracleConfig{rd.required_number(o, "b", op)};
    }

    try {
        validate_config(cfg, path);
    } catch (const ConfigError& e) {
        rd.fail(e.field(), e.what());
    }
    return cfg;
}

json point_json(Vec3 p, int dimension) {
    return dimension == 3 ? json::array({p.x, p.y, p.z}) : json::array({p.x, p.y});
}

json trajectory_json(const TrajectoryParams& params, const std::optional<double>& duration) {
    json j = std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            json out;
            if constexpr (std::is_same_v<T, CircleParams>) {
                out = {{"kind", "circle"}, {"beta", p.beta}, {"radius", p.radius},
                       {"center", point_json(p.center, p.dimension)}};
            } else if constexpr (std::is_same_v<T, RadialParams>) {
                out = {{"kind", "radial_out_back"}, {"beta", p.beta}, {"distance", p.distance},
                       {"direction", point_json(p.direction, p.dimension)}};
            } else if constexpr (std::is_same_v<T, PolygonParams>) {
                json pts = json::array();
                for (const Vec3& w : p.waypoints) pts.push_back(point_json(w, p.dimension));
                out = {{"kind", "polygon"}, {"beta", p.beta}, {"waypoints", pts}};
            } else {
                json rows = json::array();
                for (std::size_t i = 0; i < p.times.size(); ++i) {
                    json row = json::array({p.times[i], p.positions[i].x, p.positions[i].y});
                    if (p.dimension == 3) row.push_back(p.positions[i].z);
                    rows.push_back(row);
                }
                out = {{"kind", "sampled"}, {"samples", rows}};
            }
            return out;
        },
        params);
    if (duration) j["duration"] = *duration;
    return j;
}

json scenario_json(const ScenarioConfig& c) {
    json j;
    j["scenario_id"] = c.scenario_id;
    j["trajectory"] = trajectory_json(c.trajectory, c.duration);
    j["channel"] = {{"power", c.channel.power}, {"bandwidth", c.channel.bandwidth},
                    {"noise_density", c.channel.noise_density}};
    j["numerics"] = {{"rel_tol", c.numerics.rel_tol},         {"abs_tol", c.numerics.abs_tol},
                     {"max_depth", c.numerics.max_depth},     {"grid", c.numerics.grid},
                     {"radial_grid", c.numerics.radial_grid}, {"seed", c.numerics.seed},
                     {"random_profiles", c.numerics.random_profiles}};
    json tasks = json::array();
    for (Task t : c.tasks) tasks.push_back(to_string(t));
    j["tasks"] = tasks;
    if (c.profile) {
        j["profile"] = {{"values", c.profile->values}};
        if (!c.profile->edges.empty()) j["profile"]["edges"] = c.profile->edges;
    }
    if (c.sweep) {
        j["sweep"] = {{"axis", to_string(c.sweep->axis)}, {"from", c.sweep->from}, {"to", c.sweep->to},
                      {"steps", c.sweep->steps}};
        if (c.sweep->sigma_factor) j["sweep"]["sigma_factor"] = *c.sweep->sigma_factor;
    }
    if (c.oracle) j["oracle"] = {{"b", c.oracle->b}};
    return j;
}

bool safe_id(const std::string& id) {
    if (id.empty() || id == "." || id == ".." || id == "index") return false;
    return std::all_of(id.begin(), id.end(), [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
               ch == '_' || ch == '.';
    });
}

}  // namespace

void validate_config(const ScenarioConfig& c, const std::string& path) {
    const auto fail = [&](const std::string& field, const std::string& message) {
        throw ConfigError(message, join(path, field), 0);
    };
    if (!safe_id(c.scenario_id)) fail("scenario_id", "must be non-empty and use only [A-Za-z0-9._-]");
    std::optional<Trajectory> traj;
    try {
        traj = make_trajectory(c.trajectory);
    } catch (const DomainError& e) {
        fail("trajectory", e.what());
    }
    if (c.duration) {
        if (std::fabs(*c.duration - traj->duration()) > 1e-9 * traj->duration()) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "duration " << *c.duration << " disagrees with the geometry (T_A = " << traj->duration() << ")";
            fail("trajectory.duration", msg.str());
        }
    }
    try {
        c.channel.validate();
    } catch (const DomainError& e) {
        fail("channel", e.what());
    }
    const NumericsConfig& n = c.numerics;
    if (!(n.rel_tol > 0.0)) fail("numerics.rel_tol", "must be positive");
    if (!(n.abs_tol > 0.0)) fail("numerics.abs_tol", "must be positive");
    if (n.max_depth < 1) fail("numerics.max_depth", "must be at least 1");
    if (n.grid < 100) fail("numerics.grid", "must be at least 100");
    if (n.radial_grid < 1) fail("numerics.radial_grid", "must be positive");
    if (c.profile) {
        try {
            (void)ZeroMeanProfile::from_table(c.profile->values, c.profile->edges);
        } catch (const DomainError& e) {
            fail("profile", e.what());
        }
    }
    if (c.sweep) {
        const SweepConfig& s = *c.sweep;
        if (s.steps < 1) fail("sweep.steps", "must be at least 1");
        if (s.axis == SweepAxis::beta) {
            if (!(s.from > 0.0 && s.from < 1.0)) fail("sweep.from", "beta must lie in (0, 1)");
            if (!(s.to > 0.0 && s.to < 1.0)) fail("sweep.to", "beta must lie in (0, 1)");
            if (std::holds_alternative<SampledParams>(c.trajectory)) {
                fail("sweep.axis", "a sampled trajectory has no adjustable beta");
            }
        } else {
            if (!(s.from > 0.0)) fail("sweep.from", "sigma must be positive");
            if (!(s.to > 0.0)) fail("sweep.to", "sigma must be positive");
        }
        if (s.sigma_factor && !(*s.sigma_factor > 0.0)) fail("sweep.sigma_factor", "must be positive");
    }
    if (c.oracle && !(c.oracle->b > 0.0 && c.oracle->b < 1.0)) fail("oracle.b", "must lie in (0, 1)");
}

std::vector<ScenarioConfig> parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto byte = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte > 0 ? byte - 1 : 0), '\n'));
        throw ConfigError(std::string("malformed JSON: ") + e.what(), "", line);
    }
    const Reader rd(text);
    std::vector<ScenarioConfig> out;
    if (root.is_object() && root.contains("scenarios")) {
        rd.expect_object(root, "", {"scenarios"});
        const json& list = root.at("scenarios");
        if (!list.is_array() || list.empty()) rd.fail("scenarios", "expected a non-empty array of scenarios");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            out.push_back(read_scenario(rd, list[i], index("scenarios", i)));
            if (!seen.insert(out.back().scenario_id).second) {
                rd.fail(index("scenarios", i) + ".scenario_id", "duplicate scenario id '" + out.back().scenario_id + "'");
            }
        }
    } else {
        out.push_back(read_scenario(rd, root, ""));
    }
    return out;
}

std::string serialize_config(const ScenarioConfig& config) { return scenario_json(config).dump(2) + "\n"; }

std::string serialize_configs(const std::vector<ScenarioConfig>& configs) {
    json list = json::array();
    for (const auto& c : configs) list.push_back(scenario_json(c));
    return json{{"scenarios", list}}.dump(2) + "\n";
}

}  // namespace relcap
