#include "necred/cli.hpp"

#include "necred/counterexample.hpp"
#include "necred/transfer.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace necred {

namespace {

struct CliConfig {
    std::string command;
    std::string instance_path;
    std::string code_path;
    std::string out_path;
    std::string out_code_path;
    int workers = 1;
    std::uint64_t max_patterns = std::uint64_t{1} << 20;
    std::uint64_t max_messages = std::uint64_t{1} << 20;
    std::uint64_t seed = 0;
    int k = 2;
    std::vector<int> block_lengths{2, 3, 4};
    bool n1_search = false;

    VerifyOptions verify_options() const {
        VerifyOptions opts;
        opts.max_patterns = max_patterns;
        opts.max_messages = max_messages;
        opts.workers = workers;
        return opts;
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"command", command}, {"workers", workers},
                         {"max_patterns", max_patterns}, {"max_messages", max_messages},
                         {"seed", seed}};
        if (!instance_path.empty()) j["instance"] = instance_path;
        if (!code_path.empty()) j["code"] = code_path;
        if (command == "cx") {
            j["k"] = k;
            j["n"] = block_lengths;
            j["n1_search"] = n1_search;
        }
        return j;
    }
};

void emit(const CliConfig& cfg, nlohmann::json j) {
    j["config"] = cfg.to_json();
    if (cfg.out_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_json_file(cfg.out_path, j);
}

int cmd_verify(const CliConfig& cfg) {
    const InstanceVariant inst = load_instance_file(cfg.instance_path);
    const NetworkCode code = load_code_file(cfg.code_path);
    nlohmann::json j;
    Rat epsilon;
    if (const auto* nec = std::get_if<NECInstance>(&inst)) {
        const VerificationReport report = verify_nec(*nec, code, cfg.verify_options());
        epsilon = report.epsilon;
        j = report_to_json(report);
    } else {
        const MuReport report =
            verify_mu(std::get<MultipleUnicastInstance>(inst), code, cfg.verify_options());
        epsilon = report.epsilon;
        j = report_to_json(report);
    }
    j["code_fingerprint"] = code_fingerprint(code);
    emit(cfg, j);
    std::cout << "epsilon = " << epsilon.numerator() << "/" << epsilon.denominator() << '\n';
    return epsilon == Rat(0) ? 0 : 1;
}

int cmd_reduce(const CliConfig& cfg) {
    const InstanceVariant inst = load_instance_file(cfg.instance_path);
    const auto* mu = std::get_if<MultipleUnicastInstance>(&inst);
    if (!mu) throw ValidationError("reduce expects a multiple-unicast instance");
    const GadgetInstance g = build_gadget(*mu);
    emit(cfg, gadget_to_json(g));
    std::cout << "gadget with " << g.k() << " branches, "
              << g.nec.topo.edge_count() << " edges\n";
    return 0;
}

int cmd_embed(const CliConfig& cfg) {
    const GadgetInstance g = load_gadget_file(cfg.instance_path);
    const NetworkCode mu_code = load_code_file(cfg.code_path);
    const NetworkCode lifted = backward_embed(g, mu_code);
    nlohmann::json j = code_to_json(lifted);
    emit(cfg, j);
    std::cout << "embedded rate-" << g.k() << " code, fingerprint "
              << code_fingerprint(lifted) << '\n';
    return 0;
}

int cmd_transfer(const CliConfig& cfg) {
    const GadgetInstance g = load_gadget_file(cfg.instance_path);
    const NetworkCode code = load_code_file(cfg.code_path);
    const GadgetCodeAnalysis analysis = analyze_gadget_code(g, code, cfg.verify_options());
    if (!cfg.out_code_path.empty())
        write_json_file(cfg.out_code_path, code_to_json(analysis.transferred));
    nlohmann::json j = transfer_report_to_json(analysis.transfer);
    j["code_fingerprint"] = analysis.fingerprint;
    j["transferred_fingerprint"] = code_fingerprint(analysis.transferred);
    emit(cfg, j);
    if (!analysis.transfer.all_ok())
        throw Error("transfer accounting violated a proven bound; this is a bug");
    const Rat& eps_tau = analysis.mu_report.epsilon;
    std::cout << "eps_tau = " << eps_tau.numerator() << "/" << eps_tau.denominator() << '\n';
    return eps_tau == Rat(0) ? 0 : 1;
}

int cmd_analyze(const CliConfig& cfg) {
    const GadgetInstance g = load_gadget_file(cfg.instance_path);
    const NetworkCode code = load_code_file(cfg.code_path);
    const GadgetCodeAnalysis analysis = analyze_gadget_code(g, code, cfg.verify_options());
    emit(cfg, analysis_to_json(analysis));
    if (!analysis.all_ok())
        throw Error("a combinatorial bound failed on this code; this is a bug");
    return analysis.report.epsilon == Rat(0) ? 0 : 1;
}

int cmd_cx(const CliConfig& cfg) {
    const Demonstration d =
        demonstrate_unachievability(cfg.k, cfg.block_lengths, cfg.n1_search, cfg.verify_options());
    emit(cfg, demonstration_to_json(d));
    for (const RatePoint& p : d.points)
        std::cout << "n=" << p.n << " rate=" << p.rate.numerator() << "/"
                  << p.rate.denominator() << " epsilon=" << p.epsilon.numerator() << "/"
                  << p.epsilon.denominator() << '\n';
    if (d.n1)
        std::cout << "length-1 search: " << d.n1->satisfying << " of "
                  << d.n1->codes_enumerated << " codes decode both pairs\n";
    else if (!d.n1_notice.empty())
        std::cout << d.n1_notice << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"network error correction reduction workbench"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--workers", cfg.workers, "worker threads for verification");
        sub->add_option("--max-patterns", cfg.max_patterns, "error pattern enumeration limit");
        sub->add_option("--max-messages", cfg.max_messages, "message enumeration limit");
        sub->add_option("--seed", cfg.seed, "seed recorded in the report");
        sub->add_option("--out", cfg.out_path, "output file (stdout when omitted)");
    };

    CLI::App* verify = app.add_subcommand("verify", "exhaustively verify a code on an instance");
    verify->add_option("--instance", cfg.instance_path)->required();
    verify->add_option("--code", cfg.code_path)->required();
    add_common(verify);

    CLI::App* reduce = app.add_subcommand("reduce", "build the reduction gadget");
    reduce->add_option("--instance", cfg.instance_path)->required();
    add_common(reduce);

    CLI::App* embed = app.add_subcommand("embed", "lift an inner unit-rate code to the gadget");
    embed->add_option("--instance", cfg.instance_path, "gadget instance file")->required();
    embed->add_option("--code", cfg.code_path, "inner unit-rate code")->required();
    add_common(embed);

    CLI::App* transfer =
        app.add_subcommand("transfer", "turn a rate-k gadget code into an inner code");
    transfer->add_option("--instance", cfg.instance_path, "gadget instance file")->required();
    transfer->add_option("--code", cfg.code_path, "rate-k gadget code")->required();
    transfer->add_option("--out-code", cfg.out_code_path, "file for the transferred code");
    add_common(transfer);

    CLI::App* analyze =
        app.add_subcommand("analyze", "full estimator, witness and bound analysis of a gadget code");
    analyze->add_option("--instance", cfg.instance_path, "gadget instance file")->required();
    analyze->add_option("--code", cfg.code_path)->required();
    add_common(analyze);

    CLI::App* cx = app.add_subcommand("cx", "build and verify the rate-gap family");
    cx->add_option("--k", cfg.k, "branch count");
    cx->add_option("--n", cfg.block_lengths, "block lengths to verify");
    cx->add_flag("--n1-search", cfg.n1_search, "run the exhaustive length-1 search (k=2)");
    add_common(cx);

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    storage.insert(storage.begin(), "necred");
    for (std::string& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return (cfg.command = "verify", cmd_verify(cfg));
        if (reduce->parsed()) return (cfg.command = "reduce", cmd_reduce(cfg));
        if (embed->parsed()) return (cfg.command = "embed", cmd_embed(cfg));
        if (transfer->parsed()) return (cfg.command = "transfer", cmd_transfer(cfg));
        if (analyze->parsed()) return (cfg.command = "analyze", cmd_analyze(cfg));
        if (cx->parsed()) return (cfg.command = "cx", cmd_cx(cfg));
    } catch (const LimitError& e) {
        std::cerr << "limit exceeded: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cerr << "no command given\n";
    return 2;
}

}  // namespace necred
