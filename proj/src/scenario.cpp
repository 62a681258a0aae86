#include "ptnash/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace ptnash {

namespace {

std::string where(const std::string& source, const YAML::Mark& mark) {
    std::ostringstream os;
    os << source;
    if (!mark.is_null()) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    return os.str();
}

[[noreturn]] void fail(const std::string& source, const YAML::Mark& mark, const std::string& field,
                       const std::string& reason) {
    throw ScenarioError(where(source, mark) + ": " + field + ": " + reason);
}

// One mapping node; tracks consumed keys so leftovers can be reported.
class Section {
public:
    Section(const YAML::Node& node, std::string path, const std::string& source)
        : node_(node), path_(std::move(path)), source_(source) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) {
            fail(source_, node_.Mark(), path_, "expected a mapping");
        }
    }

    // Lookups go through a const node: the mutable operator[] would insert.
    [[nodiscard]] bool has(const std::string& key) const {
        const YAML::Node& n = node_;
        return n && n.IsMap() && n[key] && !n[key].IsNull();
    }

    // An undefined node (false in boolean context) when the key is absent.
    [[nodiscard]] YAML::Node raw(const std::string& key) {
        used_.insert(key);
        const YAML::Node& n = node_;
        return has(key) ? n[key] : YAML::Node(YAML::NodeType::Undefined);
    }

    [[nodiscard]] std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] YAML::Mark mark() const { return node_ ? node_.Mark() : YAML::Mark::null_mark(); }
    [[nodiscard]] const std::string& source() const { return source_; }

    template <class T>
    std::optional<T> get(const std::string& key) {
        const YAML::Node n = raw(key);
        if (!n) return std::nullopt;
        return convert<T>(n, field(key));
    }

    template <class T>
    T get_or(const std::string& key, T fallback) {
        auto v = get<T>(key);
        return v ? *v : fallback;
    }

    Section sub(const std::string& key) { return Section(raw(key), field(key), source_); }

    void finish() const {
        if (!node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!used_.count(key)) fail(source_, kv.first.Mark(), field(key), "unknown key");
        }
    }

    template <class T>
    T convert(const YAML::Node& n, const std::string& name) const;

private:
    YAML::Node node_;
    std::string path_;
    const std::string& source_;
    std::set<std::string> used_;
};

template <>
double Section::convert<double>(const YAML::Node& n, const std::string& name) const {
    if (!n.IsScalar()) fail(source_, n.Mark(), name, "expected a number");
    try {
        const double v = n.as<double>();
        if (!std::isfinite(v)) fail(source_, n.Mark(), name, "must be finite");
        return v;
    } catch (const YAML::BadConversion&) {
        fail(source_, n.Mark(), name, "expected a number, got '" + n.Scalar() + "'");
    }
}

template <>
std::string Section::convert<std::string>(const YAML::Node& n, const std::string& name) const {
    if (!n.IsScalar()) fail(source_, n.Mark(), name, "expected a string");
    return n.Scalar();
}

template <>
std::uint64_t Section::convert<std::uint64_t>(const YAML::Node& n, const std::string& name) const {
    if (!n.IsScalar()) fail(source_, n.Mark(), name, "expected a nonnegative integer");
    try {
        return n.as<std::uint64_t>();
    } catch (const YAML::BadConversion&) {
        fail(source_, n.Mark(), name, "expected a nonnegative integer, got '" + n.Scalar() + "'");
    }
}

// A scalar is read as a length-1 list.
template <>
Vector Section::convert<Vector>(const YAML::Node& n, const std::string& name) const {
    Vector out;
    if (n.IsScalar()) {
        out.push_back(convert<double>(n, name));
        return out;
    }
    if (!n.IsSequence()) fail(source_, n.Mark(), name, "expected a number or a list of numbers");
    for (std::size_t k = 0; k < n.size(); ++k) {
        out.push_back(convert<double>(n[k], name + "[" + std::to_string(k) + "]"));
    }
    return out;
}

template <>
std::vector<Vector> Section::convert<std::vector<Vector>>(const YAML::Node& n,
                                                          const std::string& name) const {
    if (!n.IsSequence()) fail(source_, n.Mark(), name, "expected a list of lists");
    std::vector<Vector> out;
    for (std::size_t k = 0; k < n.size(); ++k) {
        const std::string item = name + "[" + std::to_string(k) + "]";
        if (!n[k].IsSequence()) fail(source_, n[k].Mark(), item, "expected a list");
        out.push_back(convert<Vector>(n[k], item));
    }
    return out;
}

std::size_t as_index(double v, const std::string& source, const YAML::Mark& mark,
                     const std::string& name) {
    if (v < 0.0 || v != std::floor(v)) fail(source, mark, name, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

// [[i, j, w], ...]; w may be omitted for weight 1 when `default_weight` is set.
std::vector<EdgeValue> edge_triples(Section& sec, const std::string& key,
                                    std::optional<double> default_weight) {
    std::vector<EdgeValue> out;
    const YAML::Node n = sec.raw(key);
    if (!n) return out;
    const auto rows = sec.convert<std::vector<Vector>>(n, sec.field(key));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::string item = sec.field(key) + "[" + std::to_string(k) + "]";
        const auto& r = rows[k];
        const bool short_form = r.size() == 2 && default_weight.has_value();
        if (r.size() != 3 && !short_form) {
            fail(sec.source(), n[k].Mark(), item,
                 default_weight ? "expected [i, j] or [i, j, value]" : "expected [i, j, value]");
        }
        EdgeValue e;
        e.i = as_index(r[0], sec.source(), n[k].Mark(), item);
        e.j = as_index(r[1], sec.source(), n[k].Mark(), item);
        e.value = short_form ? *default_weight : r[2];
        out.push_back(e);
    }
    return out;
}

GameSpec parse_game(Section sec) {
    GameSpec g;
    g.name = sec.get_or<std::string>("name", "energy");
    const YAML::Node params = sec.raw("params");
    if (params) {
        if (!params.IsMap()) fail(sec.source(), params.Mark(), sec.field("params"), "expected a mapping");
        for (const auto& kv : params) {
            const auto key = kv.first.as<std::string>();
            g.params[key] = sec.convert<Vector>(kv.second, sec.field("params." + key));
        }
    }
    g.reference_ne = sec.get<Vector>("reference_ne");
    sec.finish();
    return g;
}

GraphSpec parse_graph(Section sec) {
    GraphSpec g;
    g.preset = sec.get_or<std::string>("preset", "");
    g.weight = sec.get_or<double>("weight", 1.0);
    for (const auto& e : edge_triples(sec, "edges", 1.0)) g.edges.push_back({e.i, e.j, e.value});
    if (g.preset.empty() && g.edges.empty()) {
        fail(sec.source(), sec.mark(), sec.field("edges"), "a graph needs a preset or edges");
    }
    if (!g.preset.empty() && !g.edges.empty()) {
        fail(sec.source(), sec.mark(), sec.field("preset"), "give either a preset or edges, not both");
    }
    if (!g.preset.empty() && g.preset != "cycle" && g.preset != "complete") {
        fail(sec.source(), sec.mark(), sec.field("preset"),
             "unknown preset '" + g.preset + "' (expected cycle or complete)");
    }
    sec.finish();
    return g;
}

TopologySpec parse_topology(Section sec) {
    TopologySpec t;
    const auto mode = sec.get_or<std::string>("mode", "fixed");
    if (mode == "fixed") {
        t.mode = TopologySpec::Mode::Fixed;
    } else if (mode == "switching") {
        t.mode = TopologySpec::Mode::Switching;
    } else {
        fail(sec.source(), sec.mark(), sec.field("mode"),
             "unknown mode '" + mode + "' (expected fixed or switching)");
    }
    const YAML::Node graphs = sec.raw("graphs");
    if (graphs) {
        if (!graphs.IsSequence()) {
            fail(sec.source(), graphs.Mark(), sec.field("graphs"), "expected a list of graphs");
        }
        for (std::size_t k = 0; k < graphs.size(); ++k) {
            t.graphs.push_back(
                parse_graph(Section(graphs[k], sec.field("graphs[" + std::to_string(k) + "]"),
                                    sec.source())));
        }
    }
    if (sec.has("schedule")) {
        Section sch = sec.sub("schedule");
        const auto kind = sch.get_or<std::string>("kind", "periodic");
        if (kind == "periodic") {
            t.signal = TopologySpec::Signal::Periodic;
        } else if (kind == "signal") {
            t.signal = TopologySpec::Signal::Aperiodic;
        } else {
            fail(sch.source(), sch.mark(), sch.field("kind"),
                 "unknown kind '" + kind + "' (expected periodic or signal)");
        }
        t.period = sch.get_or<double>("period", 0.4);
        const YAML::Node entries = sch.raw("entries");
        if (entries) {
            const auto rows = sch.convert<std::vector<Vector>>(entries, sch.field("entries"));
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const std::string item = sch.field("entries[" + std::to_string(k) + "]");
                if (rows[k].size() != 2) {
                    fail(sch.source(), entries[k].Mark(), item,
                         kind == "periodic" ? "expected [until_fraction, graph]"
                                            : "expected [t_start, graph]");
                }
                const auto g = as_index(rows[k][1], sch.source(), entries[k].Mark(), item);
                if (kind == "periodic") {
                    t.periodic.push_back({rows[k][0], g});
                } else {
                    t.aperiodic.push_back({rows[k][0], g});
                }
            }
        }
        sch.finish();
    }
    t.window = sec.get<double>("window");
    sec.finish();
    return t;
}

SeekerConfig parse_seeker(Section sec) {
    SeekerConfig c;
    const auto variant = sec.get_or<std::string>("variant", "static");
    try {
        c.variant = parse_variant(variant);
    } catch (const std::invalid_argument& e) {
        fail(sec.source(), sec.mark(), sec.field("variant"), e.what());
    }
    if (auto T = sec.get<double>("T")) c.prescribed_time = *T;
    c.post_gain = sec.get_or<double>("c", c.post_gain);
    c.kappa = sec.get_or<double>("kappa", c.kappa);
    c.kappa0 = sec.get_or<double>("kappa0", c.kappa0);
    c.gamma = sec.get_or<double>("gamma", c.gamma);
    c.kappa0_overrides = edge_triples(sec, "kappa0_edges", std::nullopt);
    c.gamma_overrides = edge_triples(sec, "gamma_edges", std::nullopt);
    if (auto clock = sec.get<std::string>("schedule_clock")) {
        try {
            c.schedule_clock = parse_schedule_clock(*clock);
        } catch (const std::invalid_argument& e) {
            fail(sec.source(), sec.mark(), sec.field("schedule_clock"), e.what());
        }
    }
    c.s_max = sec.get_or<double>("s_max", c.s_max);
    c.ds = sec.get_or<double>("ds", c.ds);
    c.dt_post = sec.get_or<double>("dt_post", c.dt_post);
    c.stability_limit = sec.get_or<double>("stability_limit", c.stability_limit);
    if (is_prescribed_time(c.variant) && !c.prescribed_time) {
        fail(sec.source(), sec.mark(), sec.field("T"),
             "required for variant '" + to_string(c.variant) + "'");
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        fail(sec.source(), sec.mark(), sec.path(), e.what());
    }
    sec.finish();
    return c;
}

InitSpec parse_init(Section sec) {
    InitSpec in;
    const bool has_blocks = sec.has("blocks");
    const bool has_random = sec.has("random");
    const bool has_own = sec.has("own") || sec.has("others");
    if (int(has_blocks) + int(has_random) + int(has_own) > 1) {
        fail(sec.source(), sec.mark(), sec.path(), "use one of own/others, blocks or random");
    }
    if (has_blocks) {
        in.mode = InitSpec::Mode::Blocks;
        in.blocks = sec.convert<std::vector<Vector>>(sec.raw("blocks"), sec.field("blocks"));
    } else if (has_random) {
        in.mode = InitSpec::Mode::Random;
        Section r = sec.sub("random");
        in.seed = r.get_or<std::uint64_t>("seed", in.seed);
        in.scale = r.get_or<double>("scale", in.scale);
        in.radius = r.get_or<double>("radius", in.radius);
        if (in.scale < 0.0) fail(r.source(), r.mark(), r.field("scale"), "must be >= 0");
        if (in.radius < 0.0) fail(r.source(), r.mark(), r.field("radius"), "must be >= 0");
        r.finish();
    } else {
        in.mode = InitSpec::Mode::OwnOthers;
        in.own = sec.get_or<Vector>("own", {-2.0, -4.0, -6.0, -8.0, -10.0});
        in.others = sec.get_or<Vector>("others", {15.0, 10.0, 5.0, 0.0});
    }
    sec.finish();
    return in;
}

Scenario parse_root(const YAML::Node& root, const std::string& source) {
    if (!root || root.IsNull()) throw ScenarioError(source + ": empty scenario");
    Section top(root, "", source);
    Scenario scn;
    scn.source = source;
    scn.name = top.get_or<std::string>("name", scn.name);
    scn.game = parse_game(top.sub("game"));
    scn.topology = parse_topology(top.sub("topology"));
    scn.seeker = parse_seeker(top.sub("seeker"));
    scn.init = parse_init(top.sub("init"));

    Section run = top.sub("run");
    if (!run.has("horizon")) {
        fail(source, run.mark(), run.field("horizon"), "required");
    }
    scn.horizon = *run.get<double>("horizon");
    scn.sample_dt = run.get_or<double>("sample_dt", scn.sample_dt);
    if (scn.horizon < 0.0) fail(source, run.mark(), run.field("horizon"), "must be >= 0");
    if (scn.sample_dt <= 0.0) fail(source, run.mark(), run.field("sample_dt"), "must be > 0");
    run.finish();

    Section verify = top.sub("verify");
    scn.relative_tol = verify.get_or<double>("relative_tol", scn.relative_tol);
    if (scn.relative_tol <= 0.0) fail(source, verify.mark(), verify.field("relative_tol"), "must be > 0");
    verify.finish();

    Section check = top.sub("check");
    if (auto box = check.get<Vector>("box")) {
        if (box->size() != 2 || !((*box)[0] < (*box)[1])) {
            fail(source, check.mark(), check.field("box"), "expected [lower, upper] with lower < upper");
        }
        scn.check.box_lower = (*box)[0];
        scn.check.box_upper = (*box)[1];
    }
    scn.check.samples = check.get_or<std::size_t>("samples", scn.check.samples);
    scn.check.seed = check.get_or<std::uint64_t>("seed", scn.check.seed);
    if (scn.check.samples < 2) fail(source, check.mark(), check.field("samples"), "must be >= 2");
    check.finish();

    Section output = top.sub("output");
    scn.output_dir = output.get_or<std::string>("dir", "out/" + scn.name);
    output.finish();
    top.finish();
    return scn;
}

void emit_vector(YAML::Emitter& out, const Vector& v) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << x;
    out << YAML::EndSeq;
}

void emit_edges(YAML::Emitter& out, const std::vector<EdgeValue>& edges) {
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& e : edges) {
        out << YAML::Flow << YAML::BeginSeq << e.i << e.j << e.value << YAML::EndSeq;
    }
    out << YAML::EndSeq;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(where(source, e.mark) + ": parse error: " + e.msg);
    }
    return parse_root(root, source);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    // The file stem names the scenario unless the file says otherwise.
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(where(path.string(), e.mark) + ": parse error: " + e.msg);
    }
    if (root && root.IsMap() && !root["name"]) root["name"] = path.stem().string();
    return parse_root(root, path.string());
}

std::string to_yaml(const Scenario& scn) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << scn.name;

    out << YAML::Key << "game" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << scn.game.name;
    out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : scn.game.params) {
        out << YAML::Key << k << YAML::Value;
        emit_vector(out, v);
    }
    out << YAML::EndMap;
    if (scn.game.reference_ne) {
        out << YAML::Key << "reference_ne" << YAML::Value;
        emit_vector(out, *scn.game.reference_ne);
    }
    out << YAML::EndMap;

    const auto& t = scn.topology;
    out << YAML::Key << "topology" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "mode" << YAML::Value
        << (t.mode == TopologySpec::Mode::Fixed ? "fixed" : "switching");
    if (!t.graphs.empty()) {
        out << YAML::Key << "graphs" << YAML::Value << YAML::BeginSeq;
        for (const auto& g : t.graphs) {
            out << YAML::BeginMap;
            if (!g.preset.empty()) {
                out << YAML::Key << "preset" << YAML::Value << g.preset;
                out << YAML::Key << "weight" << YAML::Value << g.weight;
            } else {
                std::vector<EdgeValue> ev;
                for (const auto& e : g.edges) ev.push_back({e.i, e.j, e.weight});
                out << YAML::Key << "edges" << YAML::Value;
                emit_edges(out, ev);
            }
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    if (t.mode == TopologySpec::Mode::Switching) {
        out << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
        const bool periodic = t.signal == TopologySpec::Signal::Periodic;
        out << YAML::Key << "kind" << YAML::Value << (periodic ? "periodic" : "signal");
        out << YAML::Key << "period" << YAML::Value << t.period;
        if (!t.periodic.empty() || !t.aperiodic.empty()) {
            out << YAML::Key << "entries" << YAML::Value << YAML::Flow << YAML::BeginSeq;
            if (periodic) {
                for (const auto& e : t.periodic) {
                    out << YAML::Flow << YAML::BeginSeq << e.until_fraction << e.graph_index
                        << YAML::EndSeq;
                }
            } else {
                for (const auto& e : t.aperiodic) {
                    out << YAML::Flow << YAML::BeginSeq << e.t_start << e.graph_index << YAML::EndSeq;
                }
            }
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    if (t.window) out << YAML::Key << "window" << YAML::Value << *t.window;
    out << YAML::EndMap;

    const auto& c = scn.seeker;
    out << YAML::Key << "seeker" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "variant" << YAML::Value << to_string(c.variant);
    if (c.prescribed_time) out << YAML::Key << "T" << YAML::Value << *c.prescribed_time;
    out << YAML::Key << "c" << YAML::Value << c.post_gain;
    out << YAML::Key << "kappa" << YAML::Value << c.kappa;
    out << YAML::Key << "kappa0" << YAML::Value << c.kappa0;
    out << YAML::Key << "gamma" << YAML::Value << c.gamma;
    if (!c.kappa0_overrides.empty()) {
        out << YAML::Key << "kappa0_edges" << YAML::Value;
        emit_edges(out, c.kappa0_overrides);
    }
    if (!c.gamma_overrides.empty()) {
        out << YAML::Key << "gamma_edges" << YAML::Value;
        emit_edges(out, c.gamma_overrides);
    }
    out << YAML::Key << "schedule_clock" << YAML::Value << to_string(c.schedule_clock);
    out << YAML::Key << "s_max" << YAML::Value << c.s_max;
    out << YAML::Key << "ds" << YAML::Value << c.ds;
    out << YAML::Key << "dt_post" << YAML::Value << c.dt_post;
    out << YAML::Key << "stability_limit" << YAML::Value << c.stability_limit;
    out << YAML::EndMap;

    const auto& in = scn.init;
    out << YAML::Key << "init" << YAML::Value << YAML::BeginMap;
    switch (in.mode) {
        case InitSpec::Mode::OwnOthers:
            out << YAML::Key << "own" << YAML::Value;
            emit_vector(out, in.own);
            out << YAML::Key << "others" << YAML::Value;
            emit_vector(out, in.others);
            break;
        case InitSpec::Mode::Blocks:
            out << YAML::Key << "blocks" << YAML::Value << YAML::BeginSeq;
            for (const auto& b : in.blocks) emit_vector(out, b);
            out << YAML::EndSeq;
            break;
        case InitSpec::Mode::Random:
            out << YAML::Key << "random" << YAML::Value << YAML::BeginMap;
            out << YAML::Key << "seed" << YAML::Value << in.seed;
            out << YAML::Key << "scale" << YAML::Value << in.scale;
            out << YAML::Key << "radius" << YAML::Value << in.radius;
            out << YAML::EndMap;
            break;
    }
    out << YAML::EndMap;

    out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "horizon" << YAML::Value << scn.horizon;
    out << YAML::Key << "sample_dt" << YAML::Value << scn.sample_dt;
    out << YAML::EndMap;

    out << YAML::Key << "verify" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "relative_tol" << YAML::Value << scn.relative_tol;
    out << YAML::EndMap;

    out << YAML::Key << "check" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "box" << YAML::Value;
    emit_vector(out, {scn.check.box_lower, scn.check.box_upper});
    out << YAML::Key << "samples" << YAML::Value << scn.check.samples;
    out << YAML::Key << "seed" << YAML::Value << scn.check.seed;
    out << YAML::EndMap;

    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dir" << YAML::Value << scn.output_dir;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string scenario_hash(const Scenario& scn) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_yaml(scn))));
    return buf;
}

Game build_game(const Scenario& scn) {
    try {
        return make_game(scn.game.name, scn.game.params);
    } catch (const std::exception& e) {
        throw ScenarioError(scn.source + ": game: " + e.what());
    }
}

namespace {

WeightedGraph build_graph(const GraphSpec& g, std::size_t players, const std::string& field) {
    if (g.preset == "cycle") return cycle_graph(players, g.weight);
    if (g.preset == "complete") return complete_graph(players, g.weight);
    for (const auto& e : g.edges) {
        if (e.i >= players || e.j >= players) {
            throw ScenarioError(field + ": edge {" + std::to_string(e.i) + ", " +
                                std::to_string(e.j) + "} names a node >= player count " +
                                std::to_string(players));
        }
    }
    return WeightedGraph(players, g.edges);
}

}  // namespace

TopologySchedule build_topology(const Scenario& scn, std::size_t players) {
    const auto& t = scn.topology;
    const std::string at = scn.source + ": topology";
    try {
        std::vector<WeightedGraph> graphs;
        for (std::size_t k = 0; k < t.graphs.size(); ++k) {
            graphs.push_back(build_graph(t.graphs[k], players,
                                         at + ".graphs[" + std::to_string(k) + "]"));
        }
        if (t.mode == TopologySpec::Mode::Fixed) {
            if (graphs.size() > 1) throw ScenarioError(at + ": fixed mode takes exactly one graph");
            return TopologySchedule::fixed(graphs.empty() ? cycle_graph(players) : graphs.front());
        }
        if (graphs.empty()) graphs = cycle_partition(players);
        if (t.signal == TopologySpec::Signal::Periodic) {
            std::vector<PeriodicEntry> entries = t.periodic;
            if (entries.empty()) {
                for (std::size_t k = 0; k < graphs.size(); ++k) {
                    entries.push_back({static_cast<double>(k + 1) / static_cast<double>(graphs.size()), k});
                }
            }
            return TopologySchedule::periodic(std::move(graphs), t.period, std::move(entries));
        }
        if (t.aperiodic.empty()) throw ScenarioError(at + ".schedule.entries: required for kind 'signal'");
        return TopologySchedule::aperiodic(std::move(graphs), t.aperiodic);
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(at + ": " + e.what());
    }
}

EstimateState build_initial_state(const Scenario& scn, const Game& game) {
    const std::size_t N = game.player_count();
    const std::size_t n = game.total_dim();
    const auto& in = scn.init;
    const std::string at = scn.source + ": init";
    switch (in.mode) {
        case InitSpec::Mode::Blocks: {
            if (in.blocks.size() != N) {
                throw ScenarioError(at + ".blocks: expected " + std::to_string(N) + " blocks, got " +
                                    std::to_string(in.blocks.size()));
            }
            for (std::size_t i = 0; i < N; ++i) {
                if (in.blocks[i].size() != n) {
                    throw ScenarioError(at + ".blocks[" + std::to_string(i) + "]: expected length " +
                                        std::to_string(n) + ", got " +
                                        std::to_string(in.blocks[i].size()));
                }
            }
            return EstimateState::from_blocks(in.blocks);
        }
        case InitSpec::Mode::Random: {
            std::mt19937_64 rng(in.seed);
            std::uniform_real_distribution<double> unit(-1.0, 1.0);
            Vector v(N * n);
            for (double& x : v) x = in.scale * in.radius * unit(rng);
            return EstimateState(N, n, std::move(v));
        }
        case InitSpec::Mode::OwnOthers: break;
    }
    if (in.own.size() != n) {
        throw ScenarioError(at + ".own: expected length " + std::to_string(n) + ", got " +
                            std::to_string(in.own.size()));
    }
    EstimateState x(N, n);
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t off = game.offset(i);
        const std::size_t di = game.action_dim(i);
        if (in.others.size() != n - di) {
            throw ScenarioError(at + ".others: player " + std::to_string(i) + " needs " +
                                std::to_string(n - di) + " values, got " +
                                std::to_string(in.others.size()));
        }
        auto block = x.block(i);
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j) {
            block[j] = (j >= off && j < off + di) ? in.own[j] : in.others[k++];
        }
    }
    return x;
}

double connectivity_window(const Scenario& scn) {
    if (scn.topology.window) return *scn.topology.window;
    if (scn.topology.mode == TopologySpec::Mode::Switching &&
        scn.topology.signal == TopologySpec::Signal::Periodic) {
        return scn.topology.period;
    }
    return scn.horizon > 0.0 ? scn.horizon : 1.0;
}

}  // namespace ptnash
