#include <cmath>
#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "widegaps/axioms.hpp"
#include "widegaps/cli.hpp"
#include "widegaps/clusterers.hpp"
#include "widegaps/error.hpp"
#include "widegaps/generators.hpp"
#include "widegaps/separability.hpp"
#include "widegaps/transforms.hpp"

namespace widegaps::cli {

namespace {

namespace fs = std::filesystem;

// JSON has no infinity; an undefined minimum (k == 1) is written as null.
Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

BlockShape parse_shape(std::string_view name) {
    if (name == "gaussian") return BlockShape::gaussian;
    if (name == "fixed_pair") return BlockShape::fixed_pair;
    if (name == "split_blobs") return BlockShape::split_blobs;
    throw Error(Errc::ConfigInvalid, "unknown shape '" + std::string(name) + "'");
}

void hash_input(RunManifest& m, const std::string& role, const std::string& path) {
    if (!path.empty()) m.input_hashes[role] = sha256_hex(read_file(path));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Inputs {
    std::string points;
    std::string distances;
    std::string labels;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool with_labels) {
    cmd->add_option("--points", in.points, "points CSV (header x0,x1,...)");
    cmd->add_option("--distances", in.distances, "square distance matrix CSV");
    if (with_labels) cmd->add_option("--labels", in.labels, "labels CSV, one integer per row");
}

// ---- generate ----

struct GenerateArgs {
    GeneratorConfig config;
    std::string kind = "variational";
    std::string shape = "gaussian";
    int range_K = 0;
    std::string out;
    bool emit_distances = false;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    GeneratorConfig cfg = a.config;
    cfg.kind = parse_separation(a.kind);
    cfg.shape = parse_shape(a.shape);
    const PlantedData data = a.range_K > 0 ? generate_range_clusterable(cfg, a.range_K) : generate_clusterable(cfg);

    RunManifest m;
    m.command = "generate";
    m.config = {{"k", cfg.k},
                {"sizes", cfg.sizes},
                {"dim", cfg.dim},
                {"kind", a.kind},
                {"shape", a.shape},
                {"gap_margin", cfg.gap_margin},
                {"intra_spread", cfg.intra_spread},
                {"split_gap", cfg.split_gap},
                {"range_K", a.range_K},
                {"seed", cfg.rng_seed},
                {"emit_distances", a.emit_distances}};

    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_file(dir / "points.csv", points_csv(*data.dataset.embedding()));
    write_file(dir / "labels.csv", labels_csv(data.planted.labels()));
    if (a.emit_distances) write_file(dir / "distances.csv", distances_csv(data.dataset.distances()));
    write_file(dir / "manifest.json", dump(m.to_json()));
    out << fmt::format("wrote n={} k={} to {}\n", data.dataset.size(), data.planted.k(), dir.string());
    return kExitOk;
}

// ---- check ----

struct CheckArgs {
    Inputs in;
    std::string kind = "variational";
    int range_K = 0;
    std::uint64_t seed = 0;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
    const Dataset ds = load_dataset(a.in.points, a.in.distances);
    if (a.in.labels.empty()) throw Error(Errc::InvalidArgs, "--labels is required");
    const Clustering cl = Clustering::from_labels(parse_labels_csv(read_file(a.in.labels)));
    require_compatible(ds, cl);
    const Separation kind = parse_separation(a.kind);

    const CostReport cost = cost_report(ds, cl);
    const SeparabilityReport rep = a.range_K > 0 ? check_range(ds, cl, kind, a.range_K, RangeCheckOptions{a.seed})
                                                 : check_separation(ds, cl, kind);
    Json j;
    j["q"] = cost.q;
    j["sigma"] = cost.sigma;
    j["beta"] = cost.beta;
    j["threshold"] = rep.threshold;
    j["min_inter"] = number_or_null(rep.min_inter);
    j["separable"] = rep.separable;
    if (rep.level) j["level"] = *rep.level;
    if (rep.witness_pair) j["witness_pair"] = {rep.witness_pair->first, rep.witness_pair->second};
    out << dump(j);
    return kExitOk;
}

// ---- cluster ----

struct ClusterArgs {
    Inputs in;
    int kx = 2;
    std::string kind = "variational";
    std::uint64_t seed = 0;
    int restarts = 8;
    std::string out;
};

int cmd_cluster(const ClusterArgs& a, std::ostream& out) {
    const Dataset ds = load_dataset(a.in.points, a.in.distances);
    const Separation kind = parse_separation(a.kind);
    if (a.restarts < 1) throw Error(Errc::InvalidArgs, "--restarts must be >= 1");
    const RangeResult r = discover_range(ds, a.kx, kind, a.seed, RangeOptions{a.restarts});

    RunManifest m;
    m.command = "cluster";
    m.config = {{"points", a.in.points}, {"distances", a.in.distances}, {"kx", a.kx},
                {"kind", a.kind},        {"seed", a.seed},              {"restarts", a.restarts}};
    hash_input(m, "points", a.in.points);
    hash_input(m, "distances", a.in.distances);

    Json log = Json::array();
    for (const RangeStep& s : r.per_k_log)
        log.push_back({{"k", s.k},
                       {"separable", s.separable},
                       {"sub_structure", s.sub_structure},
                       {"best_q", s.best_q},
                       {"best_restart", s.best_restart}});
    Json report;
    report["k"] = r.k;
    report["per_k_log"] = log;
    report["q"] = cost_q(ds, r.clustering);
    report["manifest"] = m.to_json();

    if (!a.out.empty()) {
        const fs::path dir(a.out);
        fs::create_directories(dir);
        write_file(dir / "labels.csv", labels_csv(r.clustering.labels()));
        write_file(dir / "report.json", dump(report));
    }
    out << dump(report);
    return kExitOk;
}

// ---- transform ----

struct TransformArgs {
    Inputs in;
    std::string kind;
    std::optional<double> alpha, delta, intra_factor, inter_growth;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_transform(const TransformArgs& a, std::ostream& out, std::ostream& err) {
    const Dataset ds = load_dataset(a.in.points, a.in.distances);
    TransformSpec spec;
    spec.kind = parse_transform_kind(a.kind);
    spec.alpha = a.alpha;
    spec.delta = a.delta;
    spec.intra_factor = a.intra_factor;
    spec.inter_growth = a.inter_growth;
    if (!a.in.labels.empty()) {
        Clustering cl = Clustering::from_labels(parse_labels_csv(read_file(a.in.labels)));
        require_compatible(ds, cl);
        spec.clustering = std::move(cl);
    }
    spec.validate();

    const Dataset moved = apply_transform(ds, spec, a.seed);
    const TransformVerification ver = verify_transform(ds, moved, spec);

    RunManifest m;
    m.command = "transform";
    m.config = {{"points", a.in.points}, {"distances", a.in.distances}, {"labels", a.in.labels},
                {"kind", a.kind},        {"seed", a.seed}};
    auto echo = [&](const char* key, const std::optional<double>& v) {
        m.config[key] = v ? Json(*v) : Json(nullptr);
    };
    echo("alpha", a.alpha);
    echo("delta", a.delta);
    echo("intra_factor", a.intra_factor);
    echo("inter_growth", a.inter_growth);
    hash_input(m, "points", a.in.points);
    hash_input(m, "distances", a.in.distances);
    hash_input(m, "labels", a.in.labels);

    Json violations = Json::array();
    for (const TransformViolation& v : ver.violations) {
        Json jv = {{"clause", clause_name(v.clause)}, {"i", v.i}, {"j", v.j}};
        if (v.l) jv["l"] = *v.l;
        violations.push_back(jv);
    }
    Json report;
    report["verification"] = {{"ok", ver.ok}, {"violation_count", ver.violation_count}, {"violations", violations}};
    report["manifest"] = m.to_json();

    if (!a.out.empty()) {
        const fs::path dir(a.out);
        fs::create_directories(dir);
        write_file(dir / "distances.csv", distances_csv(moved.distances()));
        write_file(dir / "report.json", dump(report));
    }
    if (!ver.ok) {
        err << "error: transformed matrix failed its own verification (" << ver.violation_count << " violations)\n";
        err << dump(report);
        return kExitInvariantBreach;
    }
    out << dump(report);
    return kExitOk;
}

// ---- verify-axioms ----

struct VerifyArgs {
    std::string suite = "all";
    int trials = 20;
    std::uint64_t seed = 0;
};

int cmd_verify_axioms(const VerifyArgs& a, std::ostream& out) {
    if (a.trials < 1) throw Error(Errc::InvalidArgs, "--trials must be >= 1");
    std::vector<SuiteResult> results;
    if (a.suite == "scale" || a.suite == "all") results.push_back(scale_suite(a.trials, a.seed));
    if (a.suite == "consistency" || a.suite == "all") results.push_back(consistency_suite(a.trials, a.seed));
    if (a.suite == "richness" || a.suite == "all") results.push_back(richness_suite(a.trials, a.seed));
    if (results.empty()) throw Error(Errc::InvalidArgs, "unknown suite '" + a.suite + "'");

    RunManifest m;
    m.command = "verify-axioms";
    m.config = {{"suite", a.suite}, {"trials", a.trials}, {"seed", a.seed}};

    Json suites = Json::array();
    bool all_ok = true;
    for (const SuiteResult& r : results) {
        Json failures = Json::array();
        for (const SuiteFailure& f : r.failures)
            failures.push_back({{"trial", f.trial}, {"seed", f.seed}, {"detail", f.detail}});
        suites.push_back({{"property", r.name}, {"passed", r.passed}, {"total", r.total}, {"failures", failures}});
        all_ok = all_ok && r.ok();
    }
    Json report;
    report["suites"] = suites;
    report["manifest"] = m.to_json();
    out << dump(report);
    return all_ok ? kExitOk : kExitPropertyFailure;
}

std::uint64_t default_seed() {
    const char* env = std::getenv("WIDE_GAPS_SEED");
    if (env == nullptr || *env == '\0') return 0;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw Error(Errc::InvalidArgs, std::string("WIDE_GAPS_SEED is not an unsigned integer: ") + env);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::uint64_t seed = 0;
    try {
        seed = default_seed();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    CLI::App app{"Clusterability criteria, range clustering and axiom checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    GenerateArgs gen;
    gen.config.rng_seed = seed;
    auto* g = app.add_subcommand("generate", "write a dataset with a planted separable clustering");
    g->add_option("--k", gen.config.k, "number of planted blocks")->required();
    g->add_option("--sizes", gen.config.sizes, "block sizes, comma separated")->delimiter(',')->required();
    g->add_option("--dim", gen.config.dim, "embedding dimension (raised to k-1 if smaller)");
    g->add_option("--kind", gen.kind, "variational|residual");
    g->add_option("--gap-margin", gen.config.gap_margin, "inter-block gap as a multiple of the threshold");
    g->add_option("--intra-spread", gen.config.intra_spread, "within-block scale");
    g->add_option("--shape", gen.shape, "gaussian|fixed_pair|split_blobs");
    g->add_option("--split-gap", gen.config.split_gap, "half separation for split_blobs");
    g->add_option("--range-K", gen.range_K, "also require no block to be k'-separable for k' <= K+1");
    g->add_option("--seed", gen.config.rng_seed, "RNG seed (default from WIDE_GAPS_SEED)");
    g->add_option("--out", gen.out, "output directory")->required();
    g->add_flag("--emit-distances", gen.emit_distances, "also write distances.csv");

    CheckArgs chk;
    chk.seed = seed;
    auto* c = app.add_subcommand("check", "report Q, sigma, beta and the separability verdict");
    add_inputs(c, chk.in, true);
    c->add_option("--kind", chk.kind, "variational|residual");
    c->add_option("--range-K", chk.range_K, "also test every block for sub-separations up to K");
    c->add_option("--seed", chk.seed, "seed for the heuristic sub-search of large blocks");

    ClusterArgs cl;
    cl.seed = seed;
    auto* k = app.add_subcommand("cluster", "range search for a separable clustering");
    add_inputs(k, cl.in, false);
    k->add_option("--kx", cl.kx, "largest k to try")->required();
    k->add_option("--kind", cl.kind, "variational|residual");
    k->add_option("--seed", cl.seed, "RNG seed (default from WIDE_GAPS_SEED)");
    k->add_option("--restarts", cl.restarts, "seeded restarts per k");
    k->add_option("--out", cl.out, "output directory for labels.csv and report.json");

    TransformArgs tr;
    tr.seed = seed;
    auto* t = app.add_subcommand("transform", "apply and verify an axiom transform");
    add_inputs(t, tr.in, true);
    t->add_option("--kind", tr.kind,
                  "scale|consistency|relative_consistency|lower_bounded_relative_consistency|delta_shift")
        ->required();
    t->add_option("--alpha", tr.alpha, "scale factor");
    t->add_option("--delta", tr.delta, "constant added to every squared distance");
    t->add_option("--intra-factor", tr.intra_factor, "lower end of the intra-block shrink range");
    t->add_option("--inter-growth", tr.inter_growth, "upper end of the inter-block growth range");
    t->add_option("--seed", tr.seed, "RNG seed (default from WIDE_GAPS_SEED)");
    t->add_option("--out", tr.out, "output directory for distances.csv and report.json");

    VerifyArgs va;
    va.seed = seed;
    auto* v = app.add_subcommand("verify-axioms", "end-to-end property suites");
    v->add_option("--suite", va.suite, "scale|consistency|richness|all");
    v->add_option("--trials", va.trials, "trials per suite");
    v->add_option("--seed", va.seed, "RNG seed (default from WIDE_GAPS_SEED)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (g->parsed()) return cmd_generate(gen, out);
        if (c->parsed()) return cmd_check(chk, out);
        if (k->parsed()) return cmd_cluster(cl, out);
        if (t->parsed()) return cmd_transform(tr, out, err);
        if (v->parsed()) return cmd_verify_axioms(va, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == Errc::InvariantBreach ? kExitInvariantBreach : kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInvariantBreach;
    }
    return kExitValidation;
}

}  // namespace widegaps::cli
