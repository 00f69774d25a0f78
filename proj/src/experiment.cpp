#include "svmpc/experiment.hpp"

#include "detail/json_text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace svmpc {

using Json = nlohmann::json;
using detail::OJson;

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : ContractError(message), field_(std::move(field)), line_(line) {}

namespace {

SmallMat diagonal(std::initializer_list<double> d) {
    SmallMat m = SmallMat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double v : d) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

// Discrete-time LQR cost-to-go at hover for the true rocket parameters with
// the stage weights below (dt = 0.015, zero-order hold), rounded to 4 digits.
SmallMat rocket_terminal_weight() {
    SmallMat p(6, 6);
    p << 436.4, 0, -148.2, 106.2, 0, -16.31,
         0, 224.1, 0, 0, 2.635, 0,
         -148.2, 0, 149.8, -79.58, 0, 13.13,
         106.2, 0, -79.58, 54.11, 0, -8.391,
         0, 2.635, 0, 0, 1.366, 0,
         -16.31, 0, 13.13, -8.391, 0, 1.498;
    return p;
}

}  // namespace

ExperimentConfig default_experiment(std::string_view env_name) {
    ExperimentConfig c;
    TrialConfig& t = c.trial;
    switch (env_kind_from_string(env_name)) {
        case EnvKind::Cartpole:
            t.env = make_cartpole(0.02);
            t.cost.Q = diagonal({1.0, 10.0, 1.0, 0.1});
            t.cost.R = diagonal({1e-4});
            t.cost.Qf = t.cost.Q;
            t.cost.goal = vec({0.0, std::numbers::pi, 0.0, 0.0});
            t.cost.wrapped = {cartpole::kPhi};
            t.initial_state = vec({0.0, 0.0, 0.0, 0.0});
            t.mppi.noise_std = vec({8.0});
            t.success = CartpoleCriterion{};
            t.duration = 40.0;
            t.horizon_time = 0.4;
            c.svgd.step_size = 1e-3;
            break;
        case EnvKind::Rocket2d:
            t.env = make_rocket2d(0.015);
            t.cost.Q = diagonal({10.0, 10.0, 1.0, 1.0, 1.0, 0.1});
            t.cost.R = diagonal({0.01, 0.1});
            t.cost.Qf = rocket_terminal_weight();
            t.cost.goal = vec({0.5, 0.0, 0.0, 0.0, 0.0, 0.0});
            t.cost.wrapped = {rocket::kPhi};
            t.initial_state = vec({0.0, 0.5, 0.0, 0.0, 0.0, 0.0});
            t.mppi.noise_std = vec({0.5, 0.1});
            t.success = RocketCriterion{};
            t.duration = 20.0;
            t.horizon_time = 0.15;
            c.svgd.step_size = 1e-3;
            break;
        case EnvKind::Racecar: {
            t.env = make_racecar(0.015);
            const TrackGeometry track;
            t.cost.Q = diagonal({1.0, 1.0, 0.5, 0.5, 0.01});
            t.cost.R = diagonal({0.01, 1.0});
            t.cost.Qf = t.cost.Q;
            t.cost.goal = Vec::Zero(5);
            t.cost.track = track;
            t.cost.wrapped = {racecar::kPhi};
            t.cost.extra_terminal = InverseDisplacementTerm{vec({1e-4, 1e-4, 0.0, 0.0, 0.0}), 1e-3};
            t.initial_state = vec({-2.5, -2.0, 0.0, 0.0, 0.0});
            t.mppi.noise_std = vec({0.07, 0.01});
            t.success = RacingCriterion{track, 1.0};
            t.duration = 30.0;
            t.horizon_time = 0.15;
            c.svgd.step_size = 1e-2;
            break;
        }
        case EnvKind::Custom: throw ContractError("no reference setup for custom environments");
    }
    t.num_particles = 5;
    t.mppi.num_samples = 512;
    t.mppi.temperature = 1.0;
    c.kernel = KernelSpec::rbf(1.0);
    return c;
}

ControllerVariant ExperimentConfig::controller_for(std::string_view name) const {
    ControllerVariant v = variant_from_name(name);
    if (auto* s = std::get_if<SteinAdaptive>(&v)) {
        s->gamma = gamma;
        s->svgd = svgd;
        s->kernel = kernel;
    } else if (auto* d = std::get_if<Dro>(&v)) {
        *d = dro;
    }
    return v;
}

TrialConfig ExperimentConfig::trial_for(std::string_view name) const {
    TrialConfig t = trial;
    t.controller = controller_for(name);
    return t;
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
    if (!seed_list.empty()) return seed_list;
    std::vector<std::uint64_t> out;
    for (int i = 0; i < seed_count; ++i) out.push_back(base_seed + static_cast<std::uint64_t>(i));
    return out;
}

void ExperimentConfig::validate() const {
    trial_config().validate();
    if (seed_list.empty() && seed_count < 1) throw ContractError("batch needs at least one seed");
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
    return dump_experiment(*this) == dump_experiment(other);
}

// ---------------------------------------------------------------- parsing

namespace {

class Doc {
public:
    explicit Doc(std::string_view text) : text_(text) {}

    // Best-effort line of a dotted path: each key is searched after the previous one.
    int locate(const std::string& path) const {
        std::size_t pos = 0;
        bool found = false;
        std::stringstream ss(path);
        std::string part;
        while (std::getline(ss, part, '.')) {
            const auto bracket = part.find('[');
            if (bracket != std::string::npos) part.resize(bracket);
            if (part.empty()) continue;
            const auto hit = text_.find("\"" + part + "\"", pos);
            if (hit == std::string_view::npos) break;
            pos = hit;
            found = true;
        }
        if (!found) return 0;
        return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
    }

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        const int line = locate(path);
        std::string what = path + ": " + message;
        if (line > 0) what = "line " + std::to_string(line) + ": " + what;
        throw ConfigError(path, line, what);
    }

private:
    std::string_view text_;
};

class Section {
public:
    Section(const Doc& doc, const Json& j, std::string path) : doc_(doc), j_(j), path_(std::move(path)) {
        if (!j_.is_object()) doc_.fail(path_, "expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (const auto& item : j_.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
                doc_.fail(at(item.key()), "unknown key");
            }
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    [[noreturn]] void fail(const char* key, const std::string& message) const { doc_.fail(at(key), message); }

    Section sub(const char* key) const { return Section(doc_, j_.at(key), at(key)); }
    const Json& raw(const char* key) const { return j_.at(key); }

    double number(const char* key, double current) const {
        if (!has(key)) return current;
        const Json& v = j_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }
    double positive(const char* key, double current) const {
        const double d = number(key, current);
        if (!(d > 0.0)) fail(key, "must be > 0");
        return d;
    }
    double nonnegative(const char* key, double current) const {
        const double d = number(key, current);
        if (!(d >= 0.0)) fail(key, "must be >= 0");
        return d;
    }
    long integer(const char* key, long current, long min_value) const {
        if (!has(key)) return current;
        const Json& v = j_.at(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        const long n = v.get<long>();
        if (n < min_value) fail(key, "must be >= " + std::to_string(min_value));
        return n;
    }
    bool boolean(const char* key, bool current) const {
        if (!has(key)) return current;
        const Json& v = j_.at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        return v.get<bool>();
    }
    std::string string(const char* key, const std::string& current) const {
        if (!has(key)) return current;
        const Json& v = j_.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }
    Vec vector(const char* key, const Vec& current, Eigen::Index size) const {
        if (!has(key)) return current;
        return to_vec(j_.at(key), at(key), size);
    }
    Box box(const char* key, const Box& current, std::size_t size) const {
        if (!has(key)) return current;
        const Json& v = j_.at(key);
        if (!v.is_array() || v.size() != size) {
            fail(key, "expected " + std::to_string(size) + " [min, max] pairs");
        }
        Box out;
        for (std::size_t i = 0; i < size; ++i) {
            const std::string p = at(key) + "[" + std::to_string(i) + "]";
            const Vec pair = to_vec(v[i], p, 2);
            out.push_back({pair[0], pair[1]});
        }
        return out;
    }
    SmallMat matrix(const char* key, const SmallMat& current, Eigen::Index n) const {
        if (!has(key)) return current;
        const Json& v = j_.at(key);
        if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n) {
            fail(key, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        }
        SmallMat m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m.row(i) = to_vec(v[static_cast<std::size_t>(i)], at(key) + "[" + std::to_string(i) + "]", n).transpose();
        }
        return m;
    }

private:
    Vec to_vec(const Json& v, const std::string& path, Eigen::Index size) const {
        if (!v.is_array() || (size >= 0 && static_cast<Eigen::Index>(v.size()) != size)) {
            doc_.fail(path, "expected an array of " + std::to_string(size) + " numbers");
        }
        if (static_cast<int>(v.size()) > kMaxDim) doc_.fail(path, "too many entries");
        Vec out(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                doc_.fail(path + "[" + std::to_string(i) + "]", "expected a finite number");
            }
            out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
        }
        return out;
    }

    const Doc& doc_;
    const Json& j_;
    std::string path_;
};

void parse_env(const Section& s, ExperimentConfig& c) {
    s.allow({"name", "dt", "control_bounds", "true_params", "param_bounds", "initial_state",
             "initial_control", "track"});
    EnvModel& env = c.trial.env;
    env.dt = s.positive("dt", env.dt);
    env.control_bounds = s.box("control_bounds", env.control_bounds, static_cast<std::size_t>(env.control_dim));
    for (std::size_t i = 0; i < env.control_bounds.size(); ++i) {
        if (!(env.control_bounds[i].lo < env.control_bounds[i].hi)) {
            s.fail("control_bounds", "entry " + std::to_string(i) + " needs min < max");
        }
    }
    env.param_bounds = s.box("param_bounds", env.param_bounds, static_cast<std::size_t>(env.param_dim));
    for (std::size_t i = 0; i < env.param_bounds.size(); ++i) {
        if (!(env.param_bounds[i].lo <= env.param_bounds[i].hi)) {
            s.fail("param_bounds", "entry " + std::to_string(i) + " needs min <= max");
        }
        if (!(env.param_bounds[i].lo > 0.0)) s.fail("param_bounds", "physical parameters must be > 0");
    }
    env.true_params = s.vector("true_params", env.true_params, env.param_dim);
    if (!inside(env.true_params, env.param_bounds)) s.fail("true_params", "must lie inside param_bounds");
    c.trial.initial_state = s.vector("initial_state", c.trial.initial_state, env.state_dim);
    if (s.has("initial_control")) {
        const Json& v = s.raw("initial_control");
        c.trial.initial_control = v.is_array() && v.empty()
                                      ? Vec()
                                      : s.vector("initial_control", Vec(), env.control_dim);
    }
    if (s.has("track")) {
        if (env.kind != EnvKind::Racecar) s.fail("track", "only the racecar environment has a track");
        const Section t = s.sub("track");
        t.allow({"straight_length", "radius", "ref_speed"});
        TrackGeometry g = *c.trial.cost.track;
        g.straight_length = t.positive("straight_length", g.straight_length);
        g.radius = t.positive("radius", g.radius);
        g.ref_speed = t.positive("ref_speed", g.ref_speed);
        c.trial.cost.track = g;
        std::get<RacingCriterion>(c.trial.success).track = g;
    }
}

void parse_cost(const Section& s, ExperimentConfig& c) {
    s.allow({"Q", "R", "Qf", "goal", "wrapped", "extra_terminal"});
    CostSpec& cost = c.trial.cost;
    const EnvModel& env = c.trial.env;
    cost.Q = s.matrix("Q", cost.Q, env.state_dim);
    cost.R = s.matrix("R", cost.R, env.control_dim);
    cost.Qf = s.matrix("Qf", cost.Qf, env.state_dim);
    if (s.has("goal") && cost.track) s.fail("goal", "racing follows the track reference; remove goal");
    cost.goal = s.vector("goal", cost.goal, env.state_dim);
    if (s.has("wrapped")) {
        const Json& v = s.raw("wrapped");
        if (!v.is_array()) s.fail("wrapped", "expected an array of state indices");
        cost.wrapped.clear();
        for (const auto& e : v) {
            if (!e.is_number_integer() || e.get<int>() < 0 || e.get<int>() >= env.state_dim) {
                s.fail("wrapped", "indices must be integers in [0, " + std::to_string(env.state_dim) + ")");
            }
            cost.wrapped.push_back(e.get<int>());
        }
    }
    if (s.has("extra_terminal")) {
        if (s.raw("extra_terminal").is_null()) {
            cost.extra_terminal.reset();
        } else {
            const Section e = s.sub("extra_terminal");
            e.allow({"weights", "epsilon"});
            InverseDisplacementTerm term = cost.extra_terminal.value_or(
                InverseDisplacementTerm{Vec::Zero(env.state_dim), 1e-3});
            term.weights = e.vector("weights", term.weights, env.state_dim);
            term.epsilon = e.positive("epsilon", term.epsilon);
            cost.extra_terminal = term;
        }
    }
    try {
        cost.validate(env.state_dim, env.control_dim);
    } catch (const ContractError& err) {
        const std::string what = err.what();
        const char* key = "Q";
        for (const char* k : {"Qf", "R", "wrapped", "extra"}) {
            if (what.rfind(std::string("cost ") + k, 0) == 0) key = k;
        }
        if (std::string_view(key) == "extra") key = "extra_terminal";
        s.fail(key, what);
    }
}

void parse_controller(const Section& s, ExperimentConfig& c) {
    s.allow({"variant", "gamma", "dro_lambda", "dro_epsilon", "nominal_params"});
    c.variant = s.string("variant", c.variant);
    try {
        variant_from_name(c.variant);
    } catch (const ContractError&) {
        s.fail("variant", "unknown variant '" + c.variant + "' (stein_adaptive, emppi, dro, nominal_mpc)");
    }
    c.gamma = s.nonnegative("gamma", c.gamma);
    if (s.has("dro_lambda")) {
        const Json& v = s.raw("dro_lambda");
        if (v.is_string() && v.get<std::string>() == "auto") {
            c.dro.lambda = 0.0;
        } else {
            c.dro.lambda = s.positive("dro_lambda", 1.0);
        }
    }
    c.dro.epsilon = s.nonnegative("dro_epsilon", c.dro.epsilon);
    if (s.has("nominal_params")) {
        const Json& v = s.raw("nominal_params");
        if (v.is_string() && v.get<std::string>() == "midpoint") {
            c.trial.nominal_params = Vec();
        } else {
            c.trial.nominal_params = s.vector("nominal_params", Vec(), c.trial.env.param_dim);
            if (!inside(c.trial.nominal_params, c.trial.env.param_bounds)) {
                s.fail("nominal_params", "must lie inside env.param_bounds");
            }
        }
    }
}

void parse_svgd(const Section& s, ExperimentConfig& c) {
    s.allow({"step_size", "inner_iterations", "fd_epsilon", "sign_mode", "kernel"});
    c.svgd.step_size = s.nonnegative("step_size", c.svgd.step_size);
    c.svgd.inner_iterations = static_cast<int>(s.integer("inner_iterations", c.svgd.inner_iterations, 1));
    c.svgd.fd_epsilon = s.positive("fd_epsilon", c.svgd.fd_epsilon);
    if (s.has("sign_mode")) {
        try {
            c.svgd.sign_mode = sign_mode_from_string(s.string("sign_mode", ""));
        } catch (const ContractError&) {
            s.fail("sign_mode", "expected 'adversarial' or 'favoring'");
        }
    }
    if (s.has("kernel")) {
        const Section k = s.sub("kernel");
        k.allow({"type", "bandwidth", "decay"});
        if (k.has("type")) {
            try {
                c.kernel.kind = kernel_kind_from_string(k.string("type", ""));
            } catch (const ContractError&) {
                k.fail("type", "expected 'rbf', 'imq' or 'constant'");
            }
        }
        c.kernel.bandwidth = k.positive("bandwidth", c.kernel.bandwidth);
        c.kernel.decay = k.positive("decay", c.kernel.decay);
    }
}

void parse_mppi(const Section& s, ExperimentConfig& c) {
    s.allow({"num_samples", "noise_std", "temperature", "iterations"});
    MppiConfig& m = c.trial.mppi;
    m.num_samples = static_cast<int>(s.integer("num_samples", m.num_samples, 1));
    m.noise_std = s.vector("noise_std", m.noise_std, c.trial.env.control_dim);
    for (Eigen::Index i = 0; i < m.noise_std.size(); ++i) {
        if (!(m.noise_std[i] > 0.0)) s.fail("noise_std", "entries must be > 0");
    }
    m.temperature = s.positive("temperature", m.temperature);
    m.iterations = static_cast<int>(s.integer("iterations", m.iterations, 1));
}

void parse_success(const Section& s, SuccessCriterion& criterion) {
    std::visit(
        [&](auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CartpoleCriterion>) {
                s.allow({"angle_tol", "rate_tol", "hold"});
                c.angle_tol = s.positive("angle_tol", c.angle_tol);
                c.rate_tol = s.positive("rate_tol", c.rate_tol);
                c.hold = s.nonnegative("hold", c.hold);
            } else if constexpr (std::is_same_v<T, RocketCriterion>) {
                s.allow({"pad_x", "pad_y", "half_width", "altitude_tol", "upright_tol", "speed_tol"});
                c.pad_x = s.number("pad_x", c.pad_x);
                c.pad_y = s.number("pad_y", c.pad_y);
                c.half_width = s.positive("half_width", c.half_width);
                c.altitude_tol = s.positive("altitude_tol", c.altitude_tol);
                c.upright_tol = s.positive("upright_tol", c.upright_tol);
                c.speed_tol = s.positive("speed_tol", c.speed_tol);
            } else {
                s.allow({"laps"});
                c.laps = s.positive("laps", c.laps);
            }
        },
        criterion);
}

void parse_harness(const Section& s, ExperimentConfig& c) {
    s.allow({"duration", "horizon", "num_particles", "record_ksd", "success"});
    TrialConfig& t = c.trial;
    t.duration = s.positive("duration", t.duration);
    t.horizon_time = s.positive("horizon", t.horizon_time);
    try {
        t.horizon_steps();
    } catch (const ContractError&) {
        s.fail("horizon", "must be a whole number of env.dt steps");
    }
    t.num_particles = static_cast<int>(s.integer("num_particles", t.num_particles, 1));
    t.record_ksd = s.boolean("record_ksd", t.record_ksd);
    if (s.has("success")) parse_success(s.sub("success"), t.success);
}

void parse_batch(const Section& s, ExperimentConfig& c) {
    s.allow({"seeds", "count", "base_seed"});
    if (s.has("seeds") && (s.has("count") || s.has("base_seed"))) {
        s.fail("seeds", "give either an explicit seed list or count/base_seed, not both");
    }
    if (s.has("seeds")) {
        const Json& v = s.raw("seeds");
        if (!v.is_array() || v.empty()) s.fail("seeds", "expected a nonempty array of seeds");
        c.seed_list.clear();
        for (const auto& e : v) {
            if (!e.is_number_unsigned()) s.fail("seeds", "seeds must be nonnegative integers");
            c.seed_list.push_back(e.get<std::uint64_t>());
        }
    } else {
        c.seed_list.clear();
        c.seed_count = static_cast<int>(s.integer("count", c.seed_count, 1));
        if (s.has("base_seed")) {
            if (!s.raw("base_seed").is_number_unsigned()) s.fail("base_seed", "expected a nonnegative integer");
            c.base_seed = s.raw("base_seed").get<std::uint64_t>();
        }
    }
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view text) {
    const Doc doc(text);
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        int line = 1;
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        line += static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
        if (e.byte > 0 && upto > 0 && text[upto - 1] == '\n') --line;
        throw ConfigError("", line, "line " + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    const Section top(doc, root, "");
    top.allow({"env", "cost", "controller", "svgd", "mppi", "harness", "batch"});
    if (!top.has("env")) doc.fail("env", "missing section");
    const Section env = top.sub("env");
    if (!env.has("name")) env.fail("name", "missing environment name");
    const std::string name = env.string("name", "");
    ExperimentConfig c;
    try {
        c = default_experiment(name);
    } catch (const ContractError&) {
        env.fail("name", "unknown environment '" + name + "' (cartpole, rocket2d, racecar)");
    }
    parse_env(env, c);
    if (top.has("cost")) parse_cost(top.sub("cost"), c);
    if (top.has("controller")) parse_controller(top.sub("controller"), c);
    if (top.has("svgd")) parse_svgd(top.sub("svgd"), c);
    if (top.has("mppi")) parse_mppi(top.sub("mppi"), c);
    if (top.has("harness")) parse_harness(top.sub("harness"), c);
    if (top.has("batch")) parse_batch(top.sub("batch"), c);
    try {
        c.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const ContractError& e) {
        doc.fail("config", e.what());
    }
    return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", 0, "cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment(ss.str());
}

// ---------------------------------------------------------------- dumping

namespace {

OJson to_json(const Vec& v) {
    OJson a = OJson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

OJson to_json(const Box& b) {
    OJson a = OJson::array();
    for (const auto& iv : b) a.push_back(OJson::array({iv.lo, iv.hi}));
    return a;
}

OJson to_json(const SmallMat& m) {
    OJson a = OJson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vec(m.row(i).transpose())));
    return a;
}

OJson success_json(const SuccessCriterion& criterion) {
    return std::visit(
        [](const auto& c) -> OJson {
            using T = std::decay_t<decltype(c)>;
            OJson j;
            if constexpr (std::is_same_v<T, CartpoleCriterion>) {
                j["angle_tol"] = c.angle_tol;
                j["rate_tol"] = c.rate_tol;
                j["hold"] = c.hold;
            } else if constexpr (std::is_same_v<T, RocketCriterion>) {
                j["pad_x"] = c.pad_x;
                j["pad_y"] = c.pad_y;
                j["half_width"] = c.half_width;
                j["altitude_tol"] = c.altitude_tol;
                j["upright_tol"] = c.upright_tol;
                j["speed_tol"] = c.speed_tol;
            } else {
                j["laps"] = c.laps;
            }
            return j;
        },
        criterion);
}

}  // namespace

std::string dump_experiment(const ExperimentConfig& c) {
    const TrialConfig& t = c.trial;
    const EnvModel& env = t.env;
    OJson root;

    OJson e;
    e["name"] = std::string(to_string(env.kind));
    e["dt"] = env.dt;
    e["control_bounds"] = to_json(env.control_bounds);
    e["true_params"] = to_json(env.true_params);
    e["param_bounds"] = to_json(env.param_bounds);
    e["initial_state"] = to_json(t.initial_state);
    e["initial_control"] = to_json(t.initial_control);
    if (env.kind == EnvKind::Racecar && t.cost.track) {
        e["track"] = {{"straight_length", t.cost.track->straight_length},
                      {"radius", t.cost.track->radius},
                      {"ref_speed", t.cost.track->ref_speed}};
    }
    root["env"] = e;

    OJson cost;
    cost["Q"] = to_json(t.cost.Q);
    cost["R"] = to_json(t.cost.R);
    cost["Qf"] = to_json(t.cost.Qf);
    if (!t.cost.track) cost["goal"] = to_json(t.cost.goal);
    cost["wrapped"] = t.cost.wrapped;
    if (t.cost.extra_terminal) {
        cost["extra_terminal"] = {{"weights", to_json(t.cost.extra_terminal->weights)},
                                  {"epsilon", t.cost.extra_terminal->epsilon}};
    } else {
        cost["extra_terminal"] = nullptr;
    }
    root["cost"] = cost;

    OJson ctrl;
    ctrl["variant"] = c.variant;
    ctrl["gamma"] = c.gamma;
    ctrl["dro_lambda"] = c.dro.lambda > 0.0 ? OJson(c.dro.lambda) : OJson("auto");
    ctrl["dro_epsilon"] = c.dro.epsilon;
    ctrl["nominal_params"] = t.nominal_params.size() == 0 ? OJson("midpoint") : to_json(t.nominal_params);
    root["controller"] = ctrl;

    OJson sv;
    sv["step_size"] = c.svgd.step_size;
    sv["inner_iterations"] = c.svgd.inner_iterations;
    sv["fd_epsilon"] = c.svgd.fd_epsilon;
    sv["sign_mode"] = std::string(to_string(c.svgd.sign_mode));
    sv["kernel"] = {{"type", std::string(to_string(c.kernel.kind))},
                    {"bandwidth", c.kernel.bandwidth},
                    {"decay", c.kernel.decay}};
    root["svgd"] = sv;

    OJson mp;
    mp["num_samples"] = t.mppi.num_samples;
    mp["noise_std"] = to_json(t.mppi.resolved_noise(env.control_bounds));
    mp["temperature"] = t.mppi.temperature;
    mp["iterations"] = t.mppi.iterations;
    root["mppi"] = mp;

    OJson h;
    h["duration"] = t.duration;
    h["horizon"] = t.horizon_time;
    h["num_particles"] = t.num_particles;
    h["record_ksd"] = t.record_ksd;
    h["success"] = success_json(t.success);
    root["harness"] = h;

    OJson b;
    if (!c.seed_list.empty()) {
        b["seeds"] = c.seed_list;
    } else {
        b["count"] = c.seed_count;
        b["base_seed"] = c.base_seed;
    }
    root["batch"] = b;

    return detail::pretty_json(root, false);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : dump_experiment(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace svmpc
