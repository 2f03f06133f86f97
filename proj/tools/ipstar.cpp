// ipstar - experiment CLI for finite-scale largeness diagnostics over
// Z, Z/n, Z[x] and free semigroups.
//
// One subcommand per registered experiment (plus `run -c config.json`,
// `sieve`, `list`). Every experiment writes a deterministic report: identical
// config and seed give a byte-identical hash-checked region.
//
// Exit codes: 0 success, 2 invalid config, 3 guard exceeded,
//             4 certificate recheck failure (always a bug), 1 other errors.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "ipstar/experiments.hpp"

using namespace ipstar;

namespace {

struct CommonFlags {
    std::string seed;
    std::string output;
    std::string format;
    std::string cache_dir;
    std::string max_certify_r, max_certify_window, max_sieve_limit, enum_budget;
    bool explain = false;
    bool print_rows = false;
};

void add_common(CLI::App* sub, CommonFlags& fl) {
    sub->add_option("--seed", fl.seed, "PRNG seed (64-bit)");
    sub->add_option("-o,--output", fl.output, "write the report to this path");
    sub->add_option("--format", fl.format, "report format: json or csv");
    sub->add_option("--cache-dir", fl.cache_dir, "sieve cache directory");
    sub->add_option("--max-certify-r", fl.max_certify_r, "guard: largest certification r");
    sub->add_option("--max-certify-window", fl.max_certify_window,
                    "guard: largest certification window");
    sub->add_option("--max-sieve-limit", fl.max_sieve_limit, "guard: largest sieve limit");
    sub->add_option("--enum-budget", fl.enum_budget, "guard: greedy enumeration budget");
    sub->add_flag("--explain", fl.explain, "print what the experiment checks and exit");
    sub->add_flag("--print-rows", fl.print_rows, "dump result rows as JSON to stdout");
}

json parse_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);  // plain string value
    }
}

void apply_common(json& doc, const CommonFlags& fl) {
    if (!fl.seed.empty()) doc["seed"] = json::parse(fl.seed);
    if (!fl.output.empty()) doc["output"] = fl.output;
    if (!fl.format.empty()) doc["format"] = fl.format;
    if (!fl.cache_dir.empty()) doc["cache_dir"] = fl.cache_dir;
    json guards = doc.value("guards", json::object());
    if (!fl.max_certify_r.empty()) guards["max_certify_r"] = json::parse(fl.max_certify_r);
    if (!fl.max_certify_window.empty())
        guards["max_certify_window"] = json::parse(fl.max_certify_window);
    if (!fl.max_sieve_limit.empty()) guards["max_sieve_limit"] = json::parse(fl.max_sieve_limit);
    if (!fl.enum_budget.empty()) guards["enum_budget"] = json::parse(fl.enum_budget);
    if (!guards.empty()) doc["guards"] = guards;
}

int execute(json doc, const CommonFlags& fl) {
    apply_common(doc, fl);
    Report rep = run_experiment(ExperimentConfig::from_json(doc));
    std::cout << "experiment : " << rep.doc.at("experiment").get<std::string>() << "\n";
    std::cout << "rows       : " << rep.doc.at("rows").size() << "\n";
    std::cout << "certs      : " << rep.doc.at("certificates").size() << " (recheck_all="
              << (rep.doc.at("recheck_all").get<bool>() ? "true" : "false") << ")\n";
    std::cout << "region     : " << rep.doc.at("region_hash").get<std::string>() << "\n";
    std::cout << "wall_ms    : " << rep.doc.at("wall_time_ms").get<double>() << "\n";
    if (doc.contains("output"))
        std::cout << "written    : " << doc.at("output").get<std::string>() << "\n";
    if (fl.print_rows) std::cout << rep.doc.at("rows").dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-scale largeness experiments over Z, Z/n, Z[x], free semigroups"};
    app.require_subcommand(1);

    // run -c config.json [--set key=value ...]
    std::string config_path;
    std::vector<std::string> overrides;
    CommonFlags run_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment from a JSON config file");
    run_cmd->add_option("-c,--config", config_path, "config file")->required();
    run_cmd->add_option("--set", overrides, "override a config key, key=JSON-value");
    add_common(run_cmd, run_flags);

    // list
    CLI::App* list_cmd = app.add_subcommand("list", "list registered experiments");

    // sieve
    std::string sieve_limit = "1000000";
    std::string sieve_cache = ".sieve-cache";
    CLI::App* sieve_cmd = app.add_subcommand("sieve", "compute (and cache) a prime sieve");
    sieve_cmd->add_option("--limit", sieve_limit, "sieve primes up to this limit");
    sieve_cmd->add_option("--cache-dir", sieve_cache, "cache directory");

    // one subcommand per registered experiment
    std::map<std::string, std::map<std::string, std::string>> exp_args;
    std::map<std::string, CommonFlags> exp_flags;
    std::map<std::string, CLI::App*> exp_cmds;
    for (const auto& [name, def] : experiment_registry()) {
        CLI::App* sub = app.add_subcommand(name, def.summary);
        for (const ParamSpec& p : def.params)
            sub->add_option("--" + p.key, exp_args[name][p.key],
                            p.help + " (default " + p.def.dump() + ")");
        add_common(sub, exp_flags[name]);
        exp_cmds[name] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& [name, def] : experiment_registry())
                std::printf("%-18s %s\n", name.c_str(), def.summary.c_str());
            return 0;
        }
        if (sieve_cmd->parsed()) {
            auto s = sieve_primes(json::parse(sieve_limit).get<std::uint64_t>(), sieve_cache);
            std::cout << "limit  : " << s->limit() << "\n";
            std::cout << "count  : " << s->count() << "\n";
            auto ps = s->primes();
            if (!ps.empty())
                std::cout << "first  : " << ps.front() << "\nlargest: " << ps.back() << "\n";
            std::cout << "cache  : " << sieve_cache << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            std::ifstream f(config_path);
            if (!f) throw IoError("cannot read config file " + config_path);
            json doc = json::parse(f);
            for (const std::string& kv : overrides) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw InvalidConfigError("--set expects key=value, got " + kv);
                doc[kv.substr(0, eq)] = parse_value(kv.substr(eq + 1));
            }
            if (run_flags.explain) {
                auto it = experiment_registry().find(doc.value("experiment", ""));
                if (it == experiment_registry().end())
                    throw UnknownExperimentError("unknown experiment in config");
                std::cout << it->second.explain_text << "\n";
                return 0;
            }
            return execute(std::move(doc), run_flags);
        }
        for (const auto& [name, sub] : exp_cmds) {
            if (!sub->parsed()) continue;
            const ExperimentDef& def = experiment_registry().at(name);
            if (exp_flags[name].explain) {
                std::cout << def.explain_text << "\n";
                return 0;
            }
            json doc{{"experiment", name}};
            for (const auto& [key, raw] : exp_args[name])
                if (!raw.empty()) doc[key] = parse_value(raw);
            return execute(std::move(doc), exp_flags[name]);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const GuardExceededError& e) {
        std::cerr << "guard exceeded: " << e.what() << "\n";
        return 3;
    } catch (const RecheckFailureError& e) {
        std::cerr << "certificate recheck failed: " << e.what() << "\n";
        return 4;
    } catch (const InvalidConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
