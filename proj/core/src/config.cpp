#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "raftedge/errors.hpp"
#include "raftedge/experiment.hpp"

namespace raftedge {

namespace {

using nlohmann::json;

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "': expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "': expected an integer");
    return v.get<int>();
}

std::uint64_t as_u64(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer");
    }
    if (v.is_number_integer() && v.get<long long>() < 0) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "': expected a string");
    return v.get<std::string>();
}

std::vector<double> as_double_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError("config key '" + key + "': expected an array");
    std::vector<double> out;
    for (const json& e : v) out.push_back(as_double(e, key));
    return out;
}

std::vector<int> as_int_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError("config key '" + key + "': expected an array");
    std::vector<int> out;
    for (const json& e : v) out.push_back(as_int(e, key));
    return out;
}

}  // namespace

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    ExperimentSpec spec;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return spec;  // empty: defaults

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a flat JSON object");

    double lambda_min = 0.0, lambda_max = 0.0, lambda_step = 0.0;
    bool have_range = false;

    for (const auto& [key, v] : j.items()) {
        if (key == "n_servers") spec.base.n_servers = as_int(v, key);
        else if (key == "vehicles_per_station") spec.base.vehicles_per_station = as_int(v, key);
        else if (key == "lambda") spec.base.lambda = as_double(v, key);
        else if (key == "t_encode") spec.base.t_encode = as_double(v, key);
        else if (key == "tau_collision") spec.base.tau_collision = as_double(v, key);
        else if (key == "p_drop") spec.base.p_drop = as_double(v, key);
        else if (key == "t_decode") spec.base.t_decode = as_double(v, key);
        else if (key == "t_forward") spec.base.t_forward = as_double(v, key);
        else if (key == "t_broadcast") spec.base.t_broadcast = as_double(v, key);
        else if (key == "t_term") spec.base.t_term = as_double(v, key);
        else if (key == "tau_election") spec.base.tau_election = as_double(v, key);
        else if (key == "attack_strength") spec.base.attack_strength = as_int(v, key);
        else if (key == "mode") spec.mode = parse_run_mode(as_string(v, key));
        else if (key == "trials") spec.trials = as_int(v, key);
        else if (key == "tasks") spec.tasks = as_int(v, key);
        else if (key == "seed") spec.seed = as_u64(v, key);
        else if (key == "out") spec.out_path = as_string(v, key);
        else if (key == "records_out") spec.records_path = as_string(v, key);
        else if (key == "lambda_axis") spec.lambda_axis = as_double_list(v, key);
        else if (key == "lambda_min") { lambda_min = as_double(v, key); have_range = true; }
        else if (key == "lambda_max") { lambda_max = as_double(v, key); have_range = true; }
        else if (key == "lambda_step") { lambda_step = as_double(v, key); have_range = true; }
        else if (key == "m_list") spec.m_list = as_int_list(v, key);
        else if (key == "lambda_list") spec.lambda_list = as_double_list(v, key);
        else if (key == "attack_axis") spec.attack_axis = as_int_list(v, key);
        else if (key == "m_axis") spec.m_axis = as_int_list(v, key);
        else if (key == "n_axis") spec.n_axis = as_int_list(v, key);
        else if (key == "tau_base") spec.tau_base = as_double(v, key);
        else if (key == "lambda_rand_max") spec.lambda_rand_max = as_double(v, key);
        else if (key == "channel") {
            const std::string c = as_string(v, key);
            if (c == "direct") spec.channel_mode = SimConfig::ChannelMode::Direct;
            else if (c == "derived") spec.channel_mode = SimConfig::ChannelMode::Derived;
            else throw ConfigError("config key 'channel': expected 'direct' or 'derived'");
        }
        else if (key == "speed_mps") spec.fading.speed_mps = as_double(v, key);
        else if (key == "carrier_hz") spec.fading.carrier_hz = as_double(v, key);
        else if (key == "fading_margin") spec.fading.fading_margin = as_double(v, key);
        else if (key == "frame_rate") spec.fading.frame_rate = as_double(v, key);
        else if (key == "fail_prob_bad") spec.fading.fail_prob_bad = as_double(v, key);
        else if (key == "fail_prob_good") spec.fading.fail_prob_good = as_double(v, key);
        else if (key == "rho_override") spec.fading.rho_override = as_double(v, key);
        else throw ConfigError("unknown config key '" + key + "'");
    }

    if (have_range) {
        if (!spec.lambda_axis.empty()) {
            throw ConfigError("config: give either lambda_axis or lambda_min/max/step, not both");
        }
        if (lambda_step <= 0.0) throw ConfigError("config key 'lambda_step': must be > 0");
        if (lambda_max < lambda_min) {
            throw ConfigError("config key 'lambda_max': must be >= lambda_min");
        }
        for (int i = 0;; ++i) {
            const double v = lambda_min + lambda_step * i;
            if (v > lambda_max + 1e-12 * std::max(1.0, lambda_max)) break;
            spec.lambda_axis.push_back(v);
        }
    }

    spec.validate();
    return spec;
}

}  // namespace raftedge
