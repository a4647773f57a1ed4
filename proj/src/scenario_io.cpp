#include "obnav/errors.hpp"
#include "obnav/sim.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace obnav {

namespace {

using json = nlohmann::json;

std::string readFile(const std::string& path, ErrorKind kind) {
    std::ifstream in(path);
    if (!in) throw Error(kind, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Vec2 vec(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::WorldParse, "expected [x, y], got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

CurvatureProfile profileFrom(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        const double w = j.at("w").get<double>();
        return [w](double) { return w; };
    }
    if (kind == "arctan") {
        const double scale = j.value("scale", 1.0);
        return [scale](double s) { return 2.0 / kPi * std::atan(scale * s); };
    }
    if (kind == "exp") {
        const double scale = j.value("scale", 1.0);
        return [scale](double s) { return std::exp(scale * s); };
    }
    if (kind == "piecewise") {
        std::vector<std::pair<double, double>> pieces;
        for (const auto& p : j.at("pieces")) pieces.emplace_back(p.at("until").get<double>(), p.at("w").get<double>());
        if (pieces.empty()) throw Error(ErrorKind::WorldParse, "piecewise profile without pieces");
        return [pieces](double s) {
            for (const auto& [until, w] : pieces) {
                if (s <= until) return w;
            }
            return pieces.back().second;
        };
    }
    throw Error(ErrorKind::WorldParse, "unknown profile kind '" + kind + "'");
}

World worldFrom(const json& j) {
    World w;
    w.r0 = j.value("r0", 1.0);
    w.v0 = j.value("v0", 1.0);
    w.start = vec(j.at("start"));
    const double resolution = j.value("resolution", 1e-3);
    for (const auto& o : j.value("obstacles", json::array())) {
        const std::string type = o.at("type").get<std::string>();
        if (type == "circle") {
            w.obstacles.push_back(make_circle(vec(o.at("center")), o.at("radius").get<double>(), w.r0, resolution));
        } else if (type == "profile") {
            CurveBuildOptions opt;
            opt.resolution = resolution;
            opt.closed = o.value("closed", false);
            opt.allowCurvatureViolation = o.value("allow_curvature_violation", false);
            const Vec2 tangent = vec(o.at("tangent"));
            w.obstacles.push_back(build_curve(profileFrom(o.at("profile")), o.at("length").get<double>(), w.r0,
                                              vec(o.at("start")), tangent.normalized(), opt));
        } else {
            throw Error(ErrorKind::WorldParse, "unknown obstacle type '" + type + "'");
        }
    }
    return w;
}

template <typename F>
auto parseGuard(ErrorKind kind, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(kind, e.what());
    }
}

Scenario scenarioFrom(const json& j, const std::string& baseDir) {
    Scenario sc;
    if (j.value("version", 1) != 1) throw Error(ErrorKind::ScenarioParse, "unsupported scenario version");
    sc.name = j.value("name", std::string("scenario"));

    json worldJson;
    if (j.contains("world")) {
        worldJson = j.at("world");
    } else if (j.contains("world_file")) {
        std::filesystem::path p = j.at("world_file").get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(baseDir) / p;
        const std::string text = readFile(p.string(), ErrorKind::WorldParse);
        worldJson = parseGuard(ErrorKind::WorldParse, [&] { return json::parse(text); });
    } else {
        throw Error(ErrorKind::ScenarioParse, "scenario needs 'world' or 'world_file'");
    }
    sc.world = parseGuard(ErrorKind::WorldParse, [&] { return worldFrom(worldJson); });
    sc.worldSpec = worldJson.dump();

    const json params = j.value("params", json::object());
    sc.params.r0 = sc.world.r0;
    sc.params.v0 = sc.world.v0;
    sc.params.M = params.value("M", sc.params.M);
    sc.params.dt = params.value("dt", sc.params.dt);
    sc.params.epsStop = j.value("eps_stop", params.value("eps_stop", sc.params.epsStop));

    const json gains = j.value("gains", json::object());
    sc.gains.M = sc.params.M;
    sc.gains.d0 = gains.value("d0", sc.gains.d0);
    sc.gains.sigma = gains.value("sigma", sc.gains.sigma);
    sc.gains.lockTilt = gains.value("lock_tilt", sc.gains.lockTilt);
    sc.gains.lockGrace = gains.value("lock_grace", sc.gains.lockGrace);
    const std::string surface = gains.value("surface", std::string("lyapunov_gradient"));
    if (surface == "lyapunov_gradient") {
        sc.gains.surface = TrackingSurface::LyapunovGradient;
    } else if (surface == "depth_weighted") {
        sc.gains.surface = TrackingSurface::DepthWeighted;
    } else {
        throw Error(ErrorKind::ScenarioParse, "unknown tracking surface '" + surface + "'");
    }

    const json gamma = params.value("gamma_over_rate", json("derived"));
    if (gamma.is_string()) {
        if (gamma.get<std::string>() != "derived") throw Error(ErrorKind::ScenarioParse, "gamma_over_rate");
        sc.params.gammaOverRate = derived_gamma_over_rate(sc.params.M, sc.gains.eps, sc.gains.d0);
    } else {
        sc.params.gammaOverRate = gamma.get<double>();
    }

    const json noise = j.value("noise", json::object());
    sc.noise.depthBound = noise.value("depth_bound_over_d0", 0.0) * sc.gains.d0 * sc.params.r0;
    sc.noise.angleBound = noise.value("angle_bound_deg", 0.0) * kPi / 180.0;
    sc.noise.seed = noise.value("seed", std::uint64_t{0});

    sc.maxSimTime = j.value("max_sim_time", sc.maxSimTime);
    sc.traceDecimation = j.value("trace_decimation", sc.traceDecimation);
    sc.collisionMargin = j.value("collision_margin", sc.collisionMargin);
    if (j.contains("start_heading_deg")) sc.startHeading = j.at("start_heading_deg").get<double>() * kPi / 180.0;

    if (!(sc.maxSimTime > 0.0)) throw Error(ErrorKind::ScenarioParse, "max_sim_time must be positive");
    if (!(sc.params.dt > 0.0)) throw Error(ErrorKind::ScenarioParse, "dt must be positive");
    if (sc.params.epsStop > sc.params.dm()) throw Error(ErrorKind::ScenarioParse, "eps_stop exceeds sensor range");
    if (sc.traceDecimation < 1) throw Error(ErrorKind::ScenarioParse, "trace_decimation must be >= 1");
    return sc;
}

json circle(double x, double y, double r) { return {{"type", "circle"}, {"center", {x, y}}, {"radius", r}}; }

json presetJson(const std::string& name) {
    json sc = {{"version", 1}, {"name", name}, {"eps_stop", 0.1}, {"params", {{"dt", 1e-3}, {"gamma_over_rate", "derived"}}}};
    if (name == "fig1a") {
        sc["world"] = {{"start", {-9.0, 0.0}},
                       {"obstacles", {circle(-7.0, 0.35, 1.0), circle(-3.0, -0.45, 1.3), circle(-0.2, 2.4, 1.0),
                                      circle(2.5, -0.8, 1.2)}}};
        sc["noise"] = {{"depth_bound_over_d0", 0.125}, {"angle_bound_deg", 1.5}, {"seed", 1}};
    } else if (name == "fig1b") {
        sc["world"] = {{"start", {-6.0, 0.0}},
                       {"obstacles", {circle(-3.0, -0.5, 1.0), circle(-3.0, 1.54, 1.0)}}};
    } else if (name == "fig1c") {
        sc["world"] = {{"start", {-12.0, 0.0}},
                       {"obstacles",
                        {{{"type", "profile"},
                          {"start", {-9.4515, 1.9039}},
                          {"tangent", {0.5445, -0.8387}},
                          {"length", 8.0},
                          {"profile", {{"kind", "arctan"}}}}}}};
    } else if (name == "fig1d") {
        sc["world"] = {{"start", {-9.0, 0.0}},
                       {"obstacles",
                        {{{"type", "profile"},
                          {"start", {-5.1828, 0.5604}},
                          {"tangent", {0.0, -1.0}},
                          {"length", 4.0},
                          {"allow_curvature_violation", true},
                          {"profile", {{"kind", "exp"}}}}}}};
    } else {
        throw Error(ErrorKind::UnknownPreset, "unknown preset '" + name + "'");
    }
    return sc;
}

}  // namespace

World world_from_json(const std::string& text) {
    return parseGuard(ErrorKind::WorldParse, [&] { return worldFrom(json::parse(text)); });
}

World load_world(const std::string& path) { return world_from_json(readFile(path, ErrorKind::WorldParse)); }

Scenario scenario_from_json(const std::string& text, const std::string& baseDir) {
    const json j = parseGuard(ErrorKind::ScenarioParse, [&] { return json::parse(text); });
    return parseGuard(ErrorKind::ScenarioParse, [&] { return scenarioFrom(j, baseDir); });
}

Scenario load_scenario(const std::string& path) {
    const std::string text = readFile(path, ErrorKind::ScenarioParse);
    return scenario_from_json(text, std::filesystem::path(path).parent_path().string());
}

Scenario preset(const std::string& name) { return scenario_from_json(presetJson(name).dump()); }

std::vector<std::string> preset_names() { return {"fig1a", "fig1b", "fig1c", "fig1d"}; }

std::string scenario_to_json(const Scenario& sc) {
    json j = {{"version", 1},
              {"name", sc.name},
              {"world", sc.worldSpec.empty() ? json::object() : json::parse(sc.worldSpec)},
              {"eps_stop", sc.params.epsStop},
              {"params", {{"M", sc.params.M}, {"dt", sc.params.dt}, {"gamma_over_rate", sc.params.gammaOverRate}}},
              {"gains",
               {{"d0", sc.gains.d0},
                {"sigma", sc.gains.sigma},
                {"lock_tilt", sc.gains.lockTilt},
                {"lock_grace", sc.gains.lockGrace},
                {"surface", sc.gains.surface == TrackingSurface::DepthWeighted ? "depth_weighted" : "lyapunov_gradient"}}},
              {"noise",
               {{"depth_bound_over_d0", sc.noise.depthBound / (sc.gains.d0 * sc.params.r0)},
                {"angle_bound_deg", sc.noise.angleBound * 180.0 / kPi},
                {"seed", sc.noise.seed}}},
              {"max_sim_time", sc.maxSimTime},
              {"trace_decimation", sc.traceDecimation},
              {"collision_margin", sc.collisionMargin}};
    if (sc.startHeading) j["start_heading_deg"] = *sc.startHeading * 180.0 / kPi;
    return j.dump(2);
}

std::string verdict_to_json(const RunVerdict& v, const Scenario& sc) {
    json out = {{"outcome", toString(v.outcome)},
                {"time", v.time},
                {"mode_switch_count", v.modeSwitchCount},
                {"min_clearance", v.minClearance},
                {"final_state",
                 {{"x", v.finalState.x.x},
                  {"y", v.finalState.x.y},
                  {"vx", v.finalState.v.x},
                  {"vy", v.finalState.v.y},
                  {"t", v.finalState.t},
                  {"mode", toString(v.finalMode)}}},
                {"max_speed_error", v.maxSpeedError},
                {"max_abs_u", v.maxAbsU},
                {"max_abs_u_s", v.maxAbsUs},
                {"max_plan_gap", v.maxPlanGap},
                {"steps", v.steps},
                {"config", json::parse(scenario_to_json(sc))}};
    out["obstacle"] = v.obstacle ? json(*v.obstacle) : json(nullptr);
    return out.dump(2);
}

}  // namespace obnav
