#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsdc/qsdc.hpp"

namespace {

// Exit codes: 0 success, 1 failed assertion or replay mismatch, 2 usage
// error, 3 I/O error.
constexpr int kOk = 0;
constexpr int kAssertFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct Options {
    std::string protocol = "yzcss";
    std::string attack = "none";
    std::string message_bits = "16";  // run: one value; sweep: comma list
    std::string id_bits = "8";
    long channel_decoys = -1;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    double threshold = 0.05;
    double dos_p = 0.1;
    int auth_tolerance = 0;
    std::string ue = "identity";
    std::string output;
    std::string format = "json";
    std::string config_path;
    std::vector<std::string> asserts;
};

void add_common_flags(CLI::App* cmd, Options& o, bool lists) {
    const char* bits_help = lists ? "Message lengths N as a comma list, e.g. 4,8,16"
                                  : "Message length N in bits";
    const char* id_help = lists ? "Identity lengths k as a comma list (modified protocol)"
                                : "Identity length k in bits (modified protocol)";
    cmd->add_option("--protocol", o.protocol, "Protocol: yzcss or modified")
        ->check(CLI::IsMember({"yzcss", "modified"}));
    cmd->add_option("--attack", o.attack,
                    "Adversary: none, intercept-resend, impersonation, entangle-measure, dos, mitm");
    cmd->add_option("--message-bits", o.message_bits, bits_help);
    cmd->add_option("--id-bits", o.id_bits, id_help);
    cmd->add_option("--channel-decoys", o.channel_decoys,
                    "Channel decoy count (modified protocol; default ceil((2N+k)/4))");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
    cmd->add_option("--seed", o.seed, "Base seed (trial t uses seed XOR t)")
        ->envname("QSDC_SEED");
    cmd->add_option("--threshold", o.threshold, "Abort threshold for the security checks");
    cmd->add_option("--dos-p", o.dos_p, "Per-qubit flip probability of the dos attack");
    cmd->add_option("--ue", o.ue, "Entangling probe: identity, cnot, or rot:<theta>");
    cmd->add_option("--output", o.output, "Write the report here instead of stdout");
    cmd->add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--config", o.config_path, "JSON file with the same keys; flags win");
    cmd->add_option("--assert", o.asserts,
                    "Check `metric <op> value` or `metric in [lo,hi]` against the report "
                    "(repeatable; exit 1 on failure)");
}

/// Fill in options the command line left untouched from a config file.
/// Unknown keys are rejected so typos do not silently vanish.
int apply_config(const CLI::App* cmd, Options& o) {
    if (o.config_path.empty()) return kOk;
    std::ifstream f(o.config_path);
    if (!f) {
        std::cerr << "qsdc: cannot read config file '" << o.config_path << "'\n";
        return kIo;
    }
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        std::cerr << "qsdc: config file '" << o.config_path << "' is not valid JSON: " << e.what()
                  << "\n";
        return kIo;
    }
    if (!j.is_object()) {
        std::cerr << "qsdc: config file must hold a JSON object\n";
        return kIo;
    }
    try {
        for (const auto& [key, value] : j.items()) {
            const std::string flag = "--" + key;
            auto as_string = [&value]() -> std::string {
                if (value.is_string()) return value.get<std::string>();
                if (value.is_number_integer()) return std::to_string(value.get<long long>());
                throw std::invalid_argument("expected a string or integer");
            };
            auto untouched = [&](const char* name) { return cmd->count(name) == 0; };
            if (key == "protocol") {
                if (untouched("--protocol")) o.protocol = value.get<std::string>();
            } else if (key == "attack") {
                if (untouched("--attack")) o.attack = value.get<std::string>();
            } else if (key == "message_bits") {
                if (untouched("--message-bits")) o.message_bits = as_string();
            } else if (key == "id_bits") {
                if (untouched("--id-bits")) o.id_bits = as_string();
            } else if (key == "channel_decoys") {
                if (untouched("--channel-decoys")) o.channel_decoys = value.get<long>();
            } else if (key == "trials") {
                if (untouched("--trials")) o.trials = value.get<std::uint64_t>();
            } else if (key == "seed") {
                if (untouched("--seed")) o.seed = value.get<std::uint64_t>();
            } else if (key == "threshold") {
                if (untouched("--threshold")) o.threshold = value.get<double>();
            } else if (key == "dos_p") {
                if (untouched("--dos-p")) o.dos_p = value.get<double>();
            } else if (key == "auth_tolerance") {
                o.auth_tolerance = value.get<int>();
            } else if (key == "ue") {
                if (untouched("--ue")) o.ue = value.get<std::string>();
            } else if (key == "format") {
                if (untouched("--format")) o.format = value.get<std::string>();
            } else if (key == "output") {
                if (untouched("--output")) o.output = value.get<std::string>();
            } else {
                std::cerr << "qsdc: unknown config key '" << key << "'\n";
                return kUsage;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "qsdc: bad config value: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": '" + item + "' is not a number");
        }
        if (used != item.size() || v == 0)
            throw std::invalid_argument(std::string(what) + ": '" + item +
                                        "' is not a positive number");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

qsdc::ScenarioConfig to_scenario(const Options& o, std::size_t n, std::size_t k) {
    qsdc::ScenarioConfig cfg;
    cfg.protocol = qsdc::protocol_from_string(o.protocol);
    cfg.attack = qsdc::attack_from_string(o.attack);
    cfg.message_bits = n;
    cfg.id_bits = k;
    cfg.channel_decoys = o.channel_decoys;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.threshold = o.threshold;
    cfg.auth_tolerance = o.auth_tolerance;
    cfg.dos_p = o.dos_p;
    cfg.probe = qsdc::ProbeSpec::parse(o.ue);
    cfg.validate();
    return cfg;
}

int write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "qsdc: cannot open output file '" << path << "'\n";
        return kIo;
    }
    out << text;
    out.flush();
    if (!out.good()) {
        std::cerr << "qsdc: failed writing output file '" << path << "'\n";
        return kIo;
    }
    return kOk;
}

int check_asserts(const Options& o, const qsdc::AggregateReport& agg) {
    bool failed = false;
    for (const std::string& text : o.asserts) {
        const qsdc::MetricAssertion a = qsdc::MetricAssertion::parse(text);  // throws on bad syntax
        const std::string verdict = qsdc::check_assertion(a, agg);
        if (!verdict.empty()) {
            std::cerr << "qsdc: " << verdict << " (wanted " << text << ")\n";
            failed = true;
        }
    }
    return failed ? kAssertFailed : kOk;
}

int do_run(const Options& o) {
    const std::vector<std::size_t> ns = parse_size_list(o.message_bits, "--message-bits");
    const std::vector<std::size_t> ks = parse_size_list(o.id_bits, "--id-bits");
    if (ns.size() != 1 || ks.size() != 1)
        throw std::invalid_argument("run takes a single --message-bits/--id-bits value; "
                                    "use the sweep command for lists");
    const qsdc::ScenarioConfig cfg = to_scenario(o, ns[0], ks[0]);
    const qsdc::AggregateReport agg = qsdc::run_scenario(cfg);
    const std::string text =
        o.format == "csv" ? qsdc::report_csv(agg) : qsdc::report_json(agg).dump(2) + "\n";
    const int io = write_text(o.output, text);
    if (io != kOk) return io;
    return check_asserts(o, agg);
}

int do_sweep(const Options& o) {
    const std::vector<std::size_t> ns = parse_size_list(o.message_bits, "--message-bits");
    const std::vector<std::size_t> ks = parse_size_list(o.id_bits, "--id-bits");
    const bool modified = (o.protocol == "modified");

    struct Point {
        std::size_t n, k;
        qsdc::AggregateReport agg;
    };
    std::vector<Point> points;
    std::uint64_t index = 0;
    for (std::size_t n : ns) {
        if (!modified) {
            qsdc::ScenarioConfig cfg = to_scenario(o, n, n);
            cfg.seed = o.seed + index;
            points.push_back({n, n, qsdc::run_scenario(cfg)});
            ++index;
            continue;
        }
        for (std::size_t k : ks) {
            if (k > n) continue;  // grid is triangular: identities never exceed the message
            qsdc::ScenarioConfig cfg = to_scenario(o, n, k);
            cfg.seed = o.seed + index;
            points.push_back({n, k, qsdc::run_scenario(cfg)});
            ++index;
        }
    }
    if (points.empty()) throw std::invalid_argument("sweep grid is empty (every k exceeded N)");

    std::string text;
    if (o.format == "csv") {
        text = "message_bits,id_bits,metric,mean,ci_lo,ci_hi,n\n";
        for (const Point& p : points) {
            for (const auto& [name, counter] : qsdc::metric_rows(p.agg.metrics)) {
                const qsdc::WilsonInterval ci = counter->ci();
                text += std::to_string(p.n) + ',' + std::to_string(p.k) + ',' + name + ',' +
                        qsdc::format6(counter->mean()) + ',' + qsdc::format6(ci.lo) + ',' +
                        qsdc::format6(ci.hi) + ',' + std::to_string(counter->total) + '\n';
            }
        }
    } else {
        nlohmann::ordered_json j;
        j["scenario"] = qsdc::scenario_json(points.front().agg.config);
        j["scenario"].erase("message_bits");
        if (j["scenario"].contains("id_bits")) j["scenario"].erase("id_bits");
        if (j["scenario"].contains("channel_decoys")) j["scenario"].erase("channel_decoys");
        j["seed"] = o.seed;
        j["trials"] = o.trials;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const Point& p : points) {
            nlohmann::ordered_json pj = qsdc::report_json(p.agg);
            nlohmann::ordered_json entry;
            entry["message_bits"] = p.n;
            if (modified) {
                entry["id_bits"] = p.k;
                entry["channel_decoys"] = p.agg.config.resolved_channel_decoys();
            }
            entry["seed"] = p.agg.config.seed;
            entry["metrics"] = pj["metrics"];
            arr.push_back(entry);
        }
        j["points"] = arr;
        j["version"] = qsdc::kVersion;
        text = j.dump(2) + "\n";
    }
    const int io = write_text(o.output, text);
    if (io != kOk) return io;

    bool failed = false;
    for (const Point& p : points) {
        Options po = o;
        if (check_asserts(po, p.agg) != kOk) {
            std::cerr << "qsdc: (at message_bits=" << p.n << " id_bits=" << p.k << ")\n";
            failed = true;
        }
    }
    return failed ? kAssertFailed : kOk;
}

int do_verify(const std::string& output) {
    const std::vector<qsdc::ReplayResult> results = qsdc::run_all_replays();
    std::string text;
    bool all_ok = true;
    for (const qsdc::ReplayResult& r : results) {
        if (r.ok) {
            text += "ok   " + r.name + "\n";
        } else {
            text += "FAIL " + r.name + ": " + r.detail + "\n";
            all_ok = false;
        }
    }
    text += all_ok ? "all replays match\n" : "replay mismatch\n";
    const int io = write_text(output, text);
    if (io != kOk) return io;
    return all_ok ? kOk : kAssertFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statevector simulator and attack harness for a pair-encoded QSDC protocol "
                 "and its hardened variant"};
    app.set_version_flag("--version", qsdc::kVersion);
    app.require_subcommand(1);

    Options run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario and report metrics");
    add_common_flags(run_cmd, run_opts, false);

    Options sweep_opts;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Run a grid of message/identity lengths");
    add_common_flags(sweep_cmd, sweep_opts, true);

    std::string verify_output;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify-paper-examples", "Re-run the published worked examples and check every value");
    verify_cmd->add_option("--output", verify_output, "Write the replay summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (run_cmd->parsed()) {
            const int rc = apply_config(run_cmd, run_opts);
            if (rc != kOk) return rc;
            return do_run(run_opts);
        }
        if (sweep_cmd->parsed()) {
            const int rc = apply_config(sweep_cmd, sweep_opts);
            if (rc != kOk) return rc;
            return do_sweep(sweep_opts);
        }
        if (verify_cmd->parsed()) return do_verify(verify_output);
    } catch (const std::invalid_argument& e) {
        std::cerr << "qsdc: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "qsdc: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
