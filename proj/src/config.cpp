#include "mmnorm/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mmnorm/errors.hpp"

namespace mmnorm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw config_error(message); }

void check_keys(const json& obj, const std::string& context,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            fail("unknown key \"" + it.key() + "\" in " + context);
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& context) {
    const json* j = find(obj, key);
    if (!j) fail("missing key \"" + std::string(key) + "\" in " + context);
    return *j;
}

double as_double(const json& j, const std::string& what) {
    if (!j.is_number()) fail(what + " must be a number");
    return j.get<double>();
}

std::uint64_t as_u64(const json& j, const std::string& what) {
    if (!j.is_number_integer())
        fail(what + " must be a non-negative integer");
    if (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)
        fail(what + " must be a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& what) {
    if (!j.is_string()) fail(what + " must be a string");
    return j.get<std::string>();
}

double parse_full_double(const std::string& text, const std::string& what) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        fail(what + ": cannot parse \"" + text + "\"");
    }
    if (consumed != text.size()) fail(what + ": cannot parse \"" + text + "\"");
    return value;
}

// Accepts a plain number or a "p/q" ratio string (densities are usually
// quoted as 1/x in square meters).
double as_density(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) fail(what + " must be a number or \"p/q\" string");
    const std::string text = j.get<std::string>();
    const std::size_t slash = text.find('/');
    if (slash == std::string::npos) return parse_full_double(text, what);
    const double num = parse_full_double(text.substr(0, slash), what);
    const double den = parse_full_double(text.substr(slash + 1), what);
    if (den == 0.0) fail(what + ": division by zero");
    return num / den;
}

// Exactly one of two alternative keys: `key_a` passes through `convert`,
// `key_b` is taken verbatim. Returns nothing when neither key is present.
std::optional<double> dual_unit(const json& obj, const char* key_a,
                                const char* key_b, double (*convert)(double),
                                const std::string& context) {
    const json* a = find(obj, key_a);
    const json* b = find(obj, key_b);
    if (a && b)
        fail(context + ": give either " + key_a + " or " + key_b + ", not both");
    if (a) return convert(as_double(*a, context + "." + key_a));
    if (b) return as_double(*b, context + "." + key_b);
    return std::nullopt;
}

double require_dual_unit(const json& obj, const char* key_a, const char* key_b,
                         double (*convert)(double), const std::string& context) {
    const auto v = dual_unit(obj, key_a, key_b, convert, context);
    if (!v) fail(context + ": missing " + key_a + " (or " + key_b + ")");
    return *v;
}

template <class Fn>
auto reframe(const std::string& context, Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        fail(context + ": " + e.what());
    }
}

AntennaPattern parse_antenna(const json& j, const std::string& context) {
    if (!j.is_object()) fail(context + " must be an object");
    const std::string mode = as_string(require(j, "mode", context), context + ".mode");
    if (mode == "derived") {
        check_keys(j, context,
                   {"mode", "beamwidth_deg", "beamwidth_rad", "sidelobe_db",
                    "sidelobe"});
        const double beamwidth = require_dual_unit(j, "beamwidth_deg",
                                                   "beamwidth_rad", deg_to_rad,
                                                   context);
        const double sidelobe = require_dual_unit(j, "sidelobe_db", "sidelobe",
                                                  db_to_linear, context);
        return reframe(context,
                       [&] { return AntennaPattern::derived(beamwidth, sidelobe); });
    }
    if (mode == "explicit") {
        check_keys(j, context,
                   {"mode", "beamwidth_deg", "beamwidth_rad", "main_gain_db",
                    "main_gain", "side_gain_db", "side_gain"});
        const double beamwidth = require_dual_unit(j, "beamwidth_deg",
                                                   "beamwidth_rad", deg_to_rad,
                                                   context);
        const double main_gain = require_dual_unit(j, "main_gain_db", "main_gain",
                                                   db_to_linear, context);
        const double side_gain = require_dual_unit(j, "side_gain_db", "side_gain",
                                                   db_to_linear, context);
        return reframe(context, [&] {
            return AntennaPattern::explicit_gains(beamwidth, main_gain, side_gain);
        });
    }
    fail(context + ".mode must be \"derived\" or \"explicit\"");
}

std::vector<double> default_thresholds_db() {
    std::vector<double> t;
    for (int db = -10; db <= 30; db += 2) t.push_back(static_cast<double>(db));
    return t;
}

}  // namespace

PdfMode parse_pdf_mode(const std::string& text, const std::string& context) {
    if (text == "paper-literal") return PdfMode::PaperLiteral;
    if (text == "rigorous") return PdfMode::Rigorous;
    fail(context + " must be \"paper-literal\" or \"rigorous\"");
}

Alignment parse_alignment_name(const std::string& text,
                               const std::string& context) {
    if (text == "with-errors") return Alignment::WithErrors;
    if (text == "perfect") return Alignment::Perfect;
    fail(context + " must be \"with-errors\" or \"perfect\"");
}

SimKind parse_sim_kind(const std::string& text, const std::string& context) {
    if (text == "branch-mirror") return SimKind::BranchMirror;
    if (text == "physical") return SimKind::Physical;
    fail(context + " must be \"branch-mirror\" or \"physical\"");
}

SweepVariant parse_variant(const std::string& text, const std::string& context) {
    const std::size_t slash = text.find('/');
    if (slash == std::string::npos)
        fail(context + " entries look like \"mode/alignment\", got \"" + text +
             "\"");
    SweepVariant variant;
    variant.mode = parse_pdf_mode(text.substr(0, slash), context + " mode");
    variant.alignment =
        parse_alignment_name(text.substr(slash + 1), context + " alignment");
    return variant;
}

SimConfig RunConfig::sim_config() const {
    SimConfig sim;
    sim.network = network;
    sim.trials = trials;
    sim.seed = seed;
    sim.window_radius = window_radius;
    sim.kind = kind;
    sim.threads = threads;
    return sim;
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec spec;
    spec.base = network;
    spec.axis = axis;
    spec.grid = grid;
    if (spec.grid.empty() && axis == SweepAxis::ThresholdDb)
        spec.grid = thresholds_db;
    spec.threshold_db = sweep_threshold_db;
    spec.variants = variants;
    if (spec.variants.empty())
        spec.variants = {{mode, Alignment::WithErrors}, {mode, Alignment::Perfect}};
    return spec;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(e.what());
    }
    if (!doc.is_object()) fail("config root must be an object");
    check_keys(doc, "config",
               {"tiers", "antenna", "bs_antenna", "ue_antenna", "blockage",
                "channel", "steering_sigma_deg", "steering_sigma_rad", "mode",
                "alignment", "thresholds_db", "mc", "sweep", "out"});

    RunConfig cfg;

    const json& tiers = require(doc, "tiers", "config");
    if (!tiers.is_array() || tiers.empty())
        fail("tiers must be a non-empty array");
    for (std::size_t i = 0; i < tiers.size(); ++i) {
        const std::string context = "tiers[" + std::to_string(i) + "]";
        const json& tj = tiers[i];
        if (!tj.is_object()) fail(context + " must be an object");
        check_keys(tj, context,
                   {"power_w", "density_per_m2", "beamwidth_deg", "beamwidth_rad"});
        TierConfig tier;
        tier.power = as_double(require(tj, "power_w", context), context + ".power_w");
        tier.density = as_density(require(tj, "density_per_m2", context),
                                  context + ".density_per_m2");
        tier.beamwidth =
            dual_unit(tj, "beamwidth_deg", "beamwidth_rad", deg_to_rad, context);
        reframe(context, [&] { tier.validate(); });
        cfg.network.tiers.push_back(tier);
    }

    const json* shared = find(doc, "antenna");
    const json* bs = find(doc, "bs_antenna");
    const json* ue = find(doc, "ue_antenna");
    if (shared && (bs || ue))
        fail("give either \"antenna\" or \"bs_antenna\"/\"ue_antenna\", not both");
    if (shared) {
        cfg.network.bs_pattern = parse_antenna(*shared, "antenna");
        cfg.network.ue_pattern = cfg.network.bs_pattern;
    } else if (bs && ue) {
        cfg.network.bs_pattern = parse_antenna(*bs, "bs_antenna");
        cfg.network.ue_pattern = parse_antenna(*ue, "ue_antenna");
    } else {
        fail("antenna configuration required: \"antenna\" or both "
             "\"bs_antenna\" and \"ue_antenna\"");
    }

    if (const json* bj = find(doc, "blockage")) {
        check_keys(*bj, "blockage", {"los_fraction", "los_radius_m"});
        if (const json* v = find(*bj, "los_fraction"))
            cfg.network.blockage.los_fraction = as_double(*v, "blockage.los_fraction");
        if (const json* v = find(*bj, "los_radius_m"))
            cfg.network.blockage.los_radius = as_double(*v, "blockage.los_radius_m");
        reframe("blockage", [&] { cfg.network.blockage.validate(); });
    }

    if (const json* cj = find(doc, "channel")) {
        check_keys(*cj, "channel",
                   {"alpha_los", "alpha_nlos", "fading_rate", "noise_db", "noise"});
        if (const json* v = find(*cj, "alpha_los"))
            cfg.network.channel.alpha_los = as_double(*v, "channel.alpha_los");
        if (const json* v = find(*cj, "alpha_nlos"))
            cfg.network.channel.alpha_nlos = as_double(*v, "channel.alpha_nlos");
        if (const json* v = find(*cj, "fading_rate"))
            cfg.network.channel.fading_rate = as_double(*v, "channel.fading_rate");
        if (const auto noise =
                dual_unit(*cj, "noise_db", "noise", db_to_linear, "channel"))
            cfg.network.channel.noise = *noise;
        reframe("channel", [&] { cfg.network.channel.validate(); });
    }

    if (const auto sigma = dual_unit(doc, "steering_sigma_deg",
                                     "steering_sigma_rad", deg_to_rad, "config"))
        cfg.network.steering_sigma = *sigma;

    if (const json* v = find(doc, "mode"))
        cfg.mode = parse_pdf_mode(as_string(*v, "mode"), "mode");
    if (const json* v = find(doc, "alignment"))
        cfg.alignment = parse_alignment_name(as_string(*v, "alignment"), "alignment");

    if (const json* v = find(doc, "thresholds_db")) {
        if (!v->is_array() || v->empty())
            fail("thresholds_db must be a non-empty array");
        for (const json& e : *v)
            cfg.thresholds_db.push_back(as_double(e, "thresholds_db entry"));
    } else {
        cfg.thresholds_db = default_thresholds_db();
    }

    if (const json* mj = find(doc, "mc")) {
        check_keys(*mj, "mc",
                   {"trials", "seed", "kind", "window_radius_m", "threads"});
        if (const json* v = find(*mj, "trials")) {
            cfg.trials = as_u64(*v, "mc.trials");
            if (cfg.trials == 0) fail("mc.trials must be >= 1");
        }
        if (const json* v = find(*mj, "seed")) cfg.seed = as_u64(*v, "mc.seed");
        if (const json* v = find(*mj, "kind"))
            cfg.kind = parse_sim_kind(as_string(*v, "mc.kind"), "mc.kind");
        if (const json* v = find(*mj, "window_radius_m")) {
            const double w = as_double(*v, "mc.window_radius_m");
            if (!(w > 0.0)) fail("mc.window_radius_m must be positive");
            cfg.window_radius = w;
        }
        if (const json* v = find(*mj, "threads")) {
            const std::uint64_t t = as_u64(*v, "mc.threads");
            if (t == 0 || t > 4096) fail("mc.threads must lie in 1..4096");
            cfg.threads = static_cast<unsigned>(t);
        }
    }

    if (const json* sj = find(doc, "sweep")) {
        check_keys(*sj, "sweep", {"axis", "grid", "threshold_db", "variants"});
        if (const json* v = find(*sj, "axis")) {
            const std::string s = as_string(*v, "sweep.axis");
            if (s == "threshold-db")
                cfg.axis = SweepAxis::ThresholdDb;
            else if (s == "beamwidth-deg")
                cfg.axis = SweepAxis::BeamwidthDeg;
            else if (s == "los-fraction")
                cfg.axis = SweepAxis::LosFraction;
            else
                fail("sweep.axis must be \"threshold-db\", \"beamwidth-deg\" or "
                     "\"los-fraction\"");
        }
        if (const json* v = find(*sj, "grid")) {
            if (!v->is_array() || v->empty())
                fail("sweep.grid must be a non-empty array");
            for (const json& e : *v)
                cfg.grid.push_back(as_double(e, "sweep.grid entry"));
            for (std::size_t i = 1; i < cfg.grid.size(); ++i)
                if (!(cfg.grid[i] > cfg.grid[i - 1]))
                    fail("sweep.grid must be strictly increasing");
        }
        if (const json* v = find(*sj, "threshold_db"))
            cfg.sweep_threshold_db = as_double(*v, "sweep.threshold_db");
        if (const json* v = find(*sj, "variants")) {
            if (!v->is_array() || v->empty())
                fail("sweep.variants must be a non-empty array");
            for (const json& e : *v)
                cfg.variants.push_back(parse_variant(
                    as_string(e, "sweep.variants entry"), "sweep.variants"));
        }
    }

    if (const json* v = find(doc, "out")) cfg.out_path = as_string(*v, "out");

    reframe("config", [&] { cfg.network.validate(); });
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open config: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    if (file.bad()) throw io_error("cannot read config: " + path);
    return parse_config(buffer.str());
}

namespace {

// User-unit value whose conversion reproduces `target` exactly, so
// serialize-then-parse is the identity. Nullopt when no nearby preimage
// exists (e.g. the value never came through this conversion).
std::optional<double> preimage(double target, double guess,
                               double (*convert)(double)) {
    if (convert(guess) == target) return guess;
    double lo = guess, hi = guess;
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 32; ++i) {
        lo = std::nextafter(lo, -inf);
        if (convert(lo) == target) return lo;
        hi = std::nextafter(hi, inf);
        if (convert(hi) == target) return hi;
    }
    return std::nullopt;
}

// Emit `value` under key_a in user units when exactly invertible, otherwise
// verbatim under key_b.
void emit_dual(json& obj, const char* key_a, const char* key_b, double value,
               double (*convert)(double), double guess) {
    if (const auto user = preimage(value, guess, convert))
        obj[key_a] = *user;
    else
        obj[key_b] = value;
}

void emit_angle(json& obj, const char* key_deg, const char* key_rad,
                double radians) {
    emit_dual(obj, key_deg, key_rad, radians, deg_to_rad, rad_to_deg(radians));
}

void emit_gain(json& obj, const char* key_db, const char* key_linear,
               double linear) {
    if (linear <= 0.0) {
        obj[key_linear] = linear;
        return;
    }
    emit_dual(obj, key_db, key_linear, linear, db_to_linear,
              linear_to_db(linear));
}

json antenna_to_json(const AntennaPattern& p) {
    json j;
    if (p.mode == PatternMode::Derived) {
        j["mode"] = "derived";
        emit_angle(j, "beamwidth_deg", "beamwidth_rad", p.beamwidth);
        emit_gain(j, "sidelobe_db", "sidelobe", p.sidelobe);
    } else {
        j["mode"] = "explicit";
        emit_angle(j, "beamwidth_deg", "beamwidth_rad", p.beamwidth);
        emit_gain(j, "main_gain_db", "main_gain", p.main_gain);
        emit_gain(j, "side_gain_db", "side_gain", p.side_gain);
    }
    return j;
}

}  // namespace

std::string serialize_config(const RunConfig& config) {
    json doc;

    json tiers = json::array();
    for (const TierConfig& tier : config.network.tiers) {
        json tj;
        tj["power_w"] = tier.power;
        tj["density_per_m2"] = tier.density;
        if (tier.beamwidth)
            emit_angle(tj, "beamwidth_deg", "beamwidth_rad", *tier.beamwidth);
        tiers.push_back(tj);
    }
    doc["tiers"] = tiers;

    if (config.network.bs_pattern == config.network.ue_pattern) {
        doc["antenna"] = antenna_to_json(config.network.bs_pattern);
    } else {
        doc["bs_antenna"] = antenna_to_json(config.network.bs_pattern);
        doc["ue_antenna"] = antenna_to_json(config.network.ue_pattern);
    }

    doc["blockage"] = {{"los_fraction", config.network.blockage.los_fraction},
                       {"los_radius_m", config.network.blockage.los_radius}};

    json channel;
    channel["alpha_los"] = config.network.channel.alpha_los;
    channel["alpha_nlos"] = config.network.channel.alpha_nlos;
    channel["fading_rate"] = config.network.channel.fading_rate;
    emit_gain(channel, "noise_db", "noise", config.network.channel.noise);
    doc["channel"] = channel;

    emit_angle(doc, "steering_sigma_deg", "steering_sigma_rad",
               config.network.steering_sigma);

    doc["mode"] = to_string(config.mode);
    doc["alignment"] = to_string(config.alignment);
    doc["thresholds_db"] = config.thresholds_db;

    json mc;
    mc["trials"] = config.trials;
    mc["seed"] = config.seed;
    mc["kind"] = to_string(config.kind);
    if (config.window_radius) mc["window_radius_m"] = *config.window_radius;
    mc["threads"] = config.threads;
    doc["mc"] = mc;

    json sweep;
    sweep["axis"] = to_string(config.axis);
    if (!config.grid.empty()) sweep["grid"] = config.grid;
    sweep["threshold_db"] = config.sweep_threshold_db;
    if (!config.variants.empty()) {
        json variants = json::array();
        for (const SweepVariant& v : config.variants)
            variants.push_back(method_tag(v.mode, v.alignment));
        sweep["variants"] = variants;
    }
    doc["sweep"] = sweep;

    if (!config.out_path.empty()) doc["out"] = config.out_path;

    return doc.dump(2) + "\n";
}

}  // namespace mmnorm
