#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsdc/harness/scenario.hpp"
#include "qsdc/harness/stats.hpp"

namespace qsdc {

inline constexpr const char* kVersion = "0.1.0";

/// Round to 6 significant digits through the shortest decimal rendering, so
/// that emitted numbers are identical across platforms.
inline double round6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

/// The metrics in report order, keyed by their public names. A metric that
/// collected no observations is omitted (which scenario parameters, not
/// random draws, determine). `channel_error_rate` republishes the pooled
/// decoy-error counter under the name the per-trial reports use.
inline std::vector<std::pair<std::string, const Counter*>> metric_rows(const Metrics& m) {
    std::vector<std::pair<std::string, const Counter*>> rows = {
        {"detected", &m.detected},
        {"abort_channel", &m.abort_channel},
        {"abort_auth", &m.abort_auth},
        {"completed", &m.completed},
        {"decoy_error_rate", &m.decoy_error},
        {"channel_error_rate", &m.decoy_error},
        {"z_decoy_error_rate", &m.z_decoy_error},
        {"x_decoy_error_rate", &m.x_decoy_error},
        {"auth_bob_accepts_alice", &m.auth_bob_accepts_alice},
        {"auth_alice_accepts_bob", &m.auth_alice_accepts_bob},
        {"eve_exact_recovery", &m.eve_exact_recovery},
        {"eve_bit_accuracy", &m.eve_bit_accuracy},
        {"bob_message_correct", &m.bob_message_correct},
        {"message_bit_error", &m.message_bit_error},
        {"integrity_mismatch_rate", &m.integrity_mismatch},
    };
    std::vector<std::pair<std::string, const Counter*>> out;
    for (auto& row : rows)
        if (row.second->total > 0) out.push_back(row);
    return out;
}

inline nlohmann::ordered_json scenario_json(const ScenarioConfig& cfg) {
    nlohmann::ordered_json j;
    j["protocol"] = to_string(cfg.protocol);
    j["attack"] = to_string(cfg.attack);
    j["message_bits"] = cfg.message_bits;
    if (cfg.protocol == Protocol::Modified) {
        j["id_bits"] = cfg.id_bits;
        j["channel_decoys"] = cfg.resolved_channel_decoys();
    }
    j["threshold"] = round6(cfg.threshold);
    if (cfg.auth_tolerance != 0) j["auth_tolerance"] = cfg.auth_tolerance;
    if (cfg.attack == Attack::Dos) j["dos_p"] = round6(cfg.dos_p);
    if (cfg.attack == Attack::EntangleMeasure) j["ue"] = cfg.probe.to_string();
    return j;
}

inline nlohmann::ordered_json report_json(const AggregateReport& agg) {
    nlohmann::ordered_json j;
    j["scenario"] = scenario_json(agg.config);
    j["seed"] = agg.config.seed;
    j["trials"] = agg.config.trials;
    nlohmann::ordered_json metrics;
    for (const auto& [name, counter] : metric_rows(agg.metrics)) {
        const WilsonInterval ci = counter->ci();
        nlohmann::ordered_json entry;
        entry["mean"] = round6(counter->mean());
        entry["ci_lo"] = round6(ci.lo);
        entry["ci_hi"] = round6(ci.hi);
        entry["n"] = counter->total;
        metrics[name] = entry;
    }
    j["metrics"] = metrics;
    j["version"] = kVersion;
    return j;
}

inline std::string format6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// One CSV row per metric: metric,mean,ci_lo,ci_hi,n.
inline std::string report_csv(const AggregateReport& agg) {
    std::string out = "metric,mean,ci_lo,ci_hi,n\n";
    for (const auto& [name, counter] : metric_rows(agg.metrics)) {
        const WilsonInterval ci = counter->ci();
        out += name;
        out += ',';
        out += format6(counter->mean());
        out += ',';
        out += format6(ci.lo);
        out += ',';
        out += format6(ci.hi);
        out += ',';
        out += std::to_string(counter->total);
        out += '\n';
    }
    return out;
}

/// Human-oriented fixed-width summary for the terminal.
inline std::string report_table(const AggregateReport& agg) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-26s %10s %10s %10s %10s\n", "metric", "mean", "ci_lo",
                  "ci_hi", "n");
    out += line;
    for (const auto& [name, counter] : metric_rows(agg.metrics)) {
        const WilsonInterval ci = counter->ci();
        std::snprintf(line, sizeof line, "%-26s %10s %10s %10s %10llu\n", name.c_str(),
                      format6(counter->mean()).c_str(), format6(ci.lo).c_str(),
                      format6(ci.hi).c_str(),
                      static_cast<unsigned long long>(counter->total));
        out += line;
    }
    return out;
}

/// A check of the form `<metric> <op> <value>` or `<metric> in [lo,hi]`,
/// evaluated against the reported means. Operators: <, <=, >, >=, ==
/// (within 1e-9), in.
struct MetricAssertion {
    std::string metric;
    std::string op;
    double value = 0.0;
    double value_hi = 0.0;

    static MetricAssertion parse(const std::string& text);
    bool holds(double mean) const {
        if (op == "<") return mean < value;
        if (op == "<=") return mean <= value;
        if (op == ">") return mean > value;
        if (op == ">=") return mean >= value;
        if (op == "==") return std::abs(mean - value) <= 1e-9;
        if (op == "in") return mean >= value && mean <= value_hi;
        throw std::invalid_argument("MetricAssertion: unknown operator " + op);
    }
};

namespace detail {
inline std::string strip_spaces(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c != ' ' && c != '\t') out.push_back(c);
    return out;
}

inline double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("assertion: bad number '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("assertion: bad number '" + s + "'");
    return v;
}
}  // namespace detail

inline MetricAssertion MetricAssertion::parse(const std::string& text) {
    const std::string s = detail::strip_spaces(text);
    MetricAssertion a;
    const std::size_t in_pos = s.find("in[");
    if (in_pos != std::string::npos && s.back() == ']') {
        a.metric = s.substr(0, in_pos);
        a.op = "in";
        const std::string body = s.substr(in_pos + 3, s.size() - in_pos - 4);
        const std::size_t comma = body.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("assertion: expected [lo,hi] in '" + text + "'");
        a.value = detail::parse_number(body.substr(0, comma));
        a.value_hi = detail::parse_number(body.substr(comma + 1));
    } else {
        static const char* ops[] = {"<=", ">=", "==", "<", ">"};
        std::size_t pos = std::string::npos;
        for (const char* op : ops) {
            pos = s.find(op);
            if (pos != std::string::npos) {
                a.op = op;
                break;
            }
        }
        if (pos == std::string::npos)
            throw std::invalid_argument("assertion: no operator in '" + text + "'");
        a.metric = s.substr(0, pos);
        a.value = detail::parse_number(s.substr(pos + a.op.size()));
    }
    if (a.metric.empty()) throw std::invalid_argument("assertion: no metric in '" + text + "'");
    return a;
}

/// Evaluate an assertion against a report. Returns an explanation on
/// failure, the empty string on success. Unknown metric names fail.
inline std::string check_assertion(const MetricAssertion& a, const AggregateReport& agg) {
    for (const auto& [name, counter] : metric_rows(agg.metrics)) {
        if (name != a.metric) continue;
        const double mean = round6(counter->mean());
        if (a.holds(mean)) return "";
        return "assertion failed: " + a.metric + " = " + format6(mean);
    }
    return "assertion failed: no metric named '" + a.metric + "' in this report";
}

}  // namespace qsdc
