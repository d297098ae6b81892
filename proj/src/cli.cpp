#include "aed/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aed/errors.hpp"
#include "aed/rng.hpp"
#include "aed/verification.hpp"

namespace aed {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CodeArgs {
    std::string rm;
    std::string frozen_file;
};

void add_code_options(CLI::App* cmd, CodeArgs& args) {
    auto* rm = cmd->add_option("--rm", args.rm, "Reed-Muller code as r,m");
    auto* ff = cmd->add_option("--frozen-file", args.frozen_file, "frozen-set file (m=<int> line, then 0/1 pattern)");
    rm->excludes(ff);
}

std::pair<int, int> parse_rm(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("--rm expects r,m");
    try {
        std::size_t used_r = 0;
        std::size_t used_m = 0;
        const std::string rs = text.substr(0, comma);
        const std::string ms = text.substr(comma + 1);
        const int r = std::stoi(rs, &used_r);
        const int m = std::stoi(ms, &used_m);
        if (used_r != rs.size() || used_m != ms.size()) throw UsageError("--rm expects r,m");
        return {r, m};
    } catch (const std::logic_error&) {
        throw UsageError("--rm expects two integers r,m, got '" + text + "'");
    }
}

CodeSpec load_code(const CodeArgs& args) {
    if (!args.rm.empty()) {
        const auto [r, m] = parse_rm(args.rm);
        return rm_code(r, m);
    }
    if (!args.frozen_file.empty()) return read_frozen_file(args.frozen_file);
    throw UsageError("one of --rm or --frozen-file is required");
}

double parse_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError(std::string(what) + ": cannot parse '" + text + "' as a number");
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() == 1) return {parse_double(parts[0], "--ebn0")};
    if (parts.size() != 3) throw UsageError("--ebn0 expects start:stop:count");
    const double start = parse_double(parts[0], "--ebn0");
    const double stop = parse_double(parts[1], "--ebn0");
    const double count = parse_double(parts[2], "--ebn0");
    if (count < 1 || count != static_cast<double>(static_cast<std::size_t>(count)))
        throw UsageError("--ebn0 point count must be a positive integer");
    return ebn0_grid(start, stop, static_cast<std::size_t>(count));
}

json code_to_json(const CodeSpec& spec) {
    json j;
    j["name"] = spec.name();
    j["m"] = spec.m();
    if (spec.rm_order()) {
        j["family"] = "rm";
        j["r"] = *spec.rm_order();
    } else {
        j["family"] = "polar";
        j["frozen"] = to_string(spec.frozen());
    }
    return j;
}

CodeSpec code_from_json(const json& j) {
    const int m = j.at("m").get<int>();
    if (j.at("family").get<std::string>() == "rm") return rm_code(j.at("r").get<int>(), m);
    const auto text = j.at("frozen").get<std::string>();
    BitVector frozen(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '0' && text[i] != '1') throw ParameterError("manifest frozen pattern must contain only 0/1");
        frozen[i] = text[i] == '1';
    }
    return polar_code(m, frozen);
}

json record_to_json(const SimRecord& r, bool include_seconds) {
    return json{{"code", r.code},
                {"decoder", r.decoder},
                {"subgroup", r.subgroup},
                {"M", r.ensemble_size},
                {"L", r.list_size},
                {"ebn0_db", r.ebn0_db},
                {"frames", r.frames},
                {"block_errors", r.block_errors},
                {"bit_errors", r.bit_errors},
                {"bler", r.bler},
                {"ber", r.ber},
                {"avg_iters", r.avg_iterations},
                {"seconds", include_seconds ? json(r.wall_seconds) : json(nullptr)}};
}

void print_report(std::ostream& out, const VerificationReport& r) {
    out << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << " trials=" << r.trials << " failures=" << r.failures
        << "\n";
    for (const auto& w : r.witnesses) out << "  witness: " << w << "\n";
}

int cmd_code_info(const CodeArgs& args, bool as_json, std::ostream& out) {
    const auto spec = load_code(args);
    const bool decreasing = is_decreasing(spec);
    if (as_json) {
        json j = code_to_json(spec);
        j["N"] = spec.length();
        j["k"] = spec.dimension();
        j["rate"] = spec.rate();
        j["decreasing"] = decreasing;
        j["frozen"] = to_string(spec.frozen());
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    out << "code: " << spec.name() << "\n";
    out << "N: " << spec.length() << "\n";
    out << "k: " << spec.dimension() << "\n";
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6g", spec.rate());
    out << "rate: " << rate << "\n";
    out << "decreasing: " << (decreasing ? "yes" : "no") << "\n";
    out << "frozen: " << to_string(spec.frozen()) << "\n";
    return kExitOk;
}

struct SimulateArgs {
    CodeArgs code;
    std::string decoder = "sc";
    std::size_t list = 1;
    int iters = 200;
    bool no_stopping = false;
    bool reduced_graph = false;
    std::size_t ensemble = 0;
    std::string subgroup = "ga";
    bool resample = false;
    bool include_identity = false;
    bool allow_duplicates = false;
    std::string ebn0;
    std::uint64_t frames = 10000;
    std::uint64_t target_errors = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool all_zero = false;
    double llr_max = kDefaultLlrMax;
    std::string manifest_out = "aedec-manifest.json";
    std::string manifest_in;
    std::string format = "csv";
    bool no_timing = false;
};

RunManifest manifest_from_args(const SimulateArgs& a, const CLI::App& cmd) {
    RunManifest mf;
    mf.code = load_code(a.code);
    auto& c = mf.decoder.ensemble.constituent;
    c.kind = parse_constituent(a.decoder);
    if (cmd.count("--list") && c.kind != ConstituentKind::SCL) throw UsageError("--list requires --decoder scl");
    if ((cmd.count("--iters") || a.no_stopping || a.reduced_graph) && c.kind != ConstituentKind::BP)
        throw UsageError("--iters, --no-stopping and --reduced-graph require --decoder bp");
    if (a.list < 1) throw UsageError("--list must be at least 1");
    if (a.iters < 1) throw UsageError("--iters must be at least 1");
    c.list_size = c.kind == ConstituentKind::SCL ? a.list : 1;
    c.max_iters = a.iters;
    c.early_stopping = !a.no_stopping;
    c.reduced_graph = a.reduced_graph;

    const bool ensemble_flags = cmd.count("--subgroup") || a.resample || a.include_identity || a.allow_duplicates;
    if (cmd.count("--ensemble") == 0 && ensemble_flags) throw UsageError("ensemble options require --ensemble M");
    if (cmd.count("--ensemble")) {
        if (a.ensemble < 1) throw UsageError("--ensemble must be at least 1");
        auto& e = mf.decoder.ensemble;
        e.size = a.ensemble;
        e.subgroup = parse_subgroup(a.subgroup);
        e.resample_per_frame = a.resample;
        e.seed = a.seed;
        e.distinct = !a.allow_duplicates;
        e.include_identity = a.include_identity;
        if (mf.code.m() < 1) throw UsageError("automorphism ensembles need m >= 1");
        if (!e.resample_per_frame) mf.decoder.perms = ensemble_from_config(mf.code.m(), e);
    } else {
        mf.decoder.ensemble.size = 0;
    }

    if (a.ebn0.empty()) throw UsageError("--ebn0 is required");
    mf.ebn0_db = parse_grid(a.ebn0);
    if (a.frames < 1) throw UsageError("--frames must be at least 1");
    mf.options.max_frames = a.frames;
    mf.options.target_errors = a.target_errors;
    mf.options.seed = a.seed;
    mf.options.all_zero = a.all_zero;
    if (!(a.llr_max > 0.0)) throw UsageError("--llr-max must be positive");
    mf.options.llr_max = a.llr_max;
    if (mf.code.dimension() == 0) throw UsageError("cannot simulate a code of dimension 0");
    return mf;
}

int cmd_simulate(const SimulateArgs& a, const CLI::App& cmd, std::ostream& out, std::ostream& err) {
    RunManifest mf;
    if (!a.manifest_in.empty()) {
        for (const char* opt : {"--rm", "--frozen-file", "--decoder", "--list", "--iters", "--ensemble", "--subgroup",
                                "--ebn0", "--frames", "--target-errors", "--seed"})
            if (cmd.count(opt)) throw UsageError(std::string(opt) + " cannot be combined with --from-manifest");
        std::ifstream in(a.manifest_in);
        if (!in) throw UsageError("cannot open manifest '" + a.manifest_in + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError("malformed manifest: " + std::string(e.what()));
        }
        mf = manifest_from_json(j);
    } else {
        mf = manifest_from_args(a, cmd);
    }
    mf.options.threads = a.threads;
    if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");

    const json manifest = manifest_to_json(mf);
    if (!a.manifest_out.empty() && a.manifest_in.empty()) {
        std::ofstream file(a.manifest_out);
        if (!file) throw UsageError("cannot write manifest '" + a.manifest_out + "'");
        file << manifest.dump(2) << "\n";
        err << "manifest: " << a.manifest_out << "\n";
    }

    std::vector<SimRecord> records;
    if (a.format == "csv") out << csv_header() << "\n";
    for (double ebn0 : mf.ebn0_db) {
        records.push_back(run_mc(mf.code, mf.decoder, ebn0, mf.options));
        if (a.format == "csv") out << csv_row(records.back(), !a.no_timing) << "\n" << std::flush;
    }
    if (a.format == "json") {
        json j;
        j["manifest"] = manifest;
        j["records"] = json::array();
        for (const auto& r : records) j["records"].push_back(record_to_json(r, !a.no_timing));
        out << j.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_verify(const CodeArgs& args, std::size_t trials, std::uint64_t seed, std::ostream& out) {
    const auto spec = load_code(args);
    const bool decreasing = is_decreasing(spec);
    const int m = spec.m();
    bool failed = false;
    auto report = [&](const VerificationReport& r) {
        print_report(out, r);
        failed = failed || !r.passed();
    };
    auto skip = [&](const char* name, const char* why) { out << name << ": SKIP (" << why << ")\n"; };
    auto rng_for = [&](std::uint64_t check) { return make_rng(seed, check, Stream::Verification); };

    out << "code: " << spec.name() << " N=" << spec.length() << " k=" << spec.dimension() << "\n";
    if (m >= 1) {
        auto rng = rng_for(1);
        if (m <= 3) report(verify_mlup_recomposition(m, 0, rng, true));
        report(verify_mlup_recomposition(m, trials, rng));
    } else {
        skip("mlup-recomposition", "m = 0");
    }

    const char* scope = "out of theorem scope";
    if (m >= 1 && decreasing) {
        auto rng = rng_for(2);
        report(verify_lta_commutation(spec, trials, rng));
        rng = rng_for(3);
        report(verify_lta_absorption(spec, trials, rng));
    } else {
        skip("lta-commutation", m >= 1 ? scope : "m = 0");
        skip("lta-absorption", m >= 1 ? scope : "m = 0");
    }

    {
        auto rng = rng_for(4);
        report(verify_sc_linearity(spec, trials, rng));
    }

    if (m >= 1 && decreasing) {
        auto rng = rng_for(5);
        report(verify_plotkin_split(spec, trials, rng));
        rng = rng_for(6);
        report(verify_product_closure(spec, trials, rng));
    } else {
        skip("plotkin-split", m >= 1 ? scope : "m = 0");
        skip("product-closure", m >= 1 ? scope : "m = 0");
    }

    out << (failed ? "verify: FAIL" : "verify: PASS") << "\n";
    return failed ? kExitVerifyFailed : kExitOk;
}

}  // namespace

nlohmann::json manifest_to_json(const RunManifest& mf) {
    json j;
    j["tool"] = "aedec";
    j["version"] = kToolVersion;
    j["code"] = code_to_json(mf.code);
    const auto& c = mf.decoder.ensemble.constituent;
    j["decoder"] = json{{"kind", std::string(to_string(c.kind))},
                        {"list", c.list_size},
                        {"iters", c.max_iters},
                        {"stopping", c.early_stopping},
                        {"reduced_graph", c.reduced_graph}};
    if (mf.decoder.is_plain()) {
        j["ensemble"] = nullptr;
    } else {
        const auto& e = mf.decoder.ensemble;
        json auts = json::array();
        for (const auto& p : mf.decoder.perms) auts.push_back(p.to_text());
        j["ensemble"] = json{{"M", e.size},
                             {"subgroup", std::string(to_string(e.subgroup))},
                             {"resample_per_frame", e.resample_per_frame},
                             {"seed", e.seed},
                             {"distinct", e.distinct},
                             {"include_identity", e.include_identity},
                             {"automorphisms", auts}};
    }
    j["ebn0_db"] = mf.ebn0_db;
    j["run"] = json{{"frames", mf.options.max_frames},
                    {"target_errors", mf.options.target_errors},
                    {"seed", mf.options.seed},
                    {"all_zero", mf.options.all_zero},
                    {"llr_max", mf.options.llr_max}};
    return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    try {
        RunManifest mf;
        mf.code = code_from_json(j.at("code"));
        const auto& d = j.at("decoder");
        auto& c = mf.decoder.ensemble.constituent;
        c.kind = parse_constituent(d.at("kind").get<std::string>());
        c.list_size = d.at("list").get<std::size_t>();
        c.max_iters = d.at("iters").get<int>();
        c.early_stopping = d.at("stopping").get<bool>();
        c.reduced_graph = d.at("reduced_graph").get<bool>();
        const auto& e = j.at("ensemble");
        if (e.is_null()) {
            mf.decoder.ensemble.size = 0;
        } else {
            auto& ec = mf.decoder.ensemble;
            ec.size = e.at("M").get<std::size_t>();
            ec.subgroup = parse_subgroup(e.at("subgroup").get<std::string>());
            ec.resample_per_frame = e.at("resample_per_frame").get<bool>();
            ec.seed = e.at("seed").get<std::uint64_t>();
            ec.distinct = e.at("distinct").get<bool>();
            ec.include_identity = e.at("include_identity").get<bool>();
            for (const auto& text : e.at("automorphisms")) mf.decoder.perms.push_back(AffineAutomorphism::parse(text.get<std::string>()));
            validate(ec);
        }
        mf.ebn0_db = j.at("ebn0_db").get<std::vector<double>>();
        const auto& r = j.at("run");
        mf.options.max_frames = r.at("frames").get<std::uint64_t>();
        mf.options.target_errors = r.at("target_errors").get<std::uint64_t>();
        mf.options.seed = r.at("seed").get<std::uint64_t>();
        mf.options.all_zero = r.at("all_zero").get<bool>();
        mf.options.llr_max = r.at("llr_max").get<double>();
        return mf;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("malformed manifest: " + std::string(e.what()));
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Automorphism ensemble decoding of Reed-Muller and polar codes", "aedec"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CodeArgs info_code;
    bool info_json = false;
    auto* info = app.add_subcommand("code-info", "print length, dimension, frozen pattern and decreasing verdict");
    add_code_options(info, info_code);
    info->add_flag("--json", info_json, "print JSON instead of text");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BLER/BER over BPSK-AWGN, one CSV row per Eb/N0");
    add_code_options(simulate, sim.code);
    simulate->add_option("--decoder", sim.decoder, "constituent decoder: sc, scl or bp");
    simulate->add_option("--list", sim.list, "SCL list size");
    simulate->add_option("--iters", sim.iters, "BP iteration limit");
    simulate->add_flag("--no-stopping", sim.no_stopping, "BP: always run the full iteration limit");
    simulate->add_flag("--reduced-graph", sim.reduced_graph, "BP: skip updates on edges fixed by the frozen set");
    simulate->add_option("--ensemble", sim.ensemble, "ensemble size M");
    simulate->add_option("--subgroup", sim.subgroup, "automorphism subgroup: ga, lta, uta or pi");
    simulate->add_flag("--resample-per-frame", sim.resample, "draw a new ensemble for every frame");
    simulate->add_flag("--include-identity", sim.include_identity, "make the identity the first ensemble member");
    simulate->add_flag("--allow-duplicates", sim.allow_duplicates, "allow repeated automorphisms in an ensemble");
    simulate->add_option("--ebn0", sim.ebn0, "Eb/N0 grid in dB as start:stop:count, or a single value");
    simulate->add_option("--frames", sim.frames, "frame budget per point");
    simulate->add_option("--target-errors", sim.target_errors, "stop a point after this many block errors (0 = off)");
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--threads", sim.threads, "worker threads (0 = all cores)");
    simulate->add_flag("--all-zero", sim.all_zero, "transmit the all-zero codeword");
    simulate->add_option("--llr-max", sim.llr_max, "channel LLR saturation");
    simulate->add_option("--manifest", sim.manifest_out, "where to write the run manifest (empty = do not write)");
    simulate->add_option("--from-manifest", sim.manifest_in, "rerun the configuration stored in a manifest");
    simulate->add_option("--format", sim.format, "output format: csv or json");
    simulate->add_flag("--no-timing", sim.no_timing, "print '-' instead of wall-clock seconds");

    CodeArgs verify_code;
    std::size_t trials = 1000;
    std::uint64_t verify_seed = 0;
    auto* verify = app.add_subcommand("verify", "run the structural and decoder identity checks");
    add_code_options(verify, verify_code);
    verify->add_option("--trials", trials, "random trials per check");
    verify->add_option("--seed", verify_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (info->parsed()) return cmd_code_info(info_code, info_json, out);
        if (simulate->parsed()) return cmd_simulate(sim, *simulate, out, err);
        if (verify->parsed()) return cmd_verify(verify_code, trials, verify_seed, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << "\n";
        return kExitVerifyFailed;
    } catch (const ParameterError& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace aed
