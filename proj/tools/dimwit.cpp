// dimwit: dimension-witness bounds, evaluation, photonic simulation and certification.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dimwit/dimwit.hpp"

namespace
{

using dimwit::io::json;

struct UsageError : dimwit::Error
{
    using dimwit::Error::Error;
};

int g_verbosity = 0;

void log(int level, const std::string& msg)
{
    if (g_verbosity >= level)
        std::cerr << "dimwit: " << msg << '\n';
}

struct WitnessChoice
{
    std::string name = "i4";
    std::string file;
};

dimwit::WitnessSpec resolve_witness(const WitnessChoice& w)
{
    if (!w.file.empty())
        return dimwit::io::witness_spec_from_json(dimwit::io::read_json_file(w.file), w.file);
    if (w.name == "i4" || w.name == "I4")
        return dimwit::i4_spec();
    throw UsageError("unknown witness '" + w.name + "' (builtin: i4; or pass --witness-file)");
}

void add_witness_options(CLI::App* cmd, WitnessChoice& w)
{
    auto* name = cmd->add_option("--witness", w.name, "Builtin witness name (i4)")->capture_default_str();
    auto* file = cmd->add_option("--witness-file", w.file, "Witness spec JSON file");
    name->excludes(file);
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty() || out_path == "-")
    {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write '" + out_path + "'");
    out << text;
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// --- bounds ----------------------------------------------------------------

struct BoundsArgs
{
    std::string model = "classical";
    WitnessChoice witness;
    int d = 2;
    dimwit::SeesawConfig seesaw;
    double cap = 1e9;
    bool symmetry = false;
    unsigned threads = 0;
    std::string out;
};

void run_bounds(const BoundsArgs& a)
{
    const auto spec = resolve_witness(a.witness);
    dimwit::BoundResult r;
    if (a.model == "classical")
    {
        dimwit::ClassicalOptions opts;
        opts.max_strategies = a.cap;
        opts.symmetry_reduction = a.symmetry;
        opts.threads = a.threads;
        log(1, "enumerating classical strategies, d=" + std::to_string(a.d));
        r = dimwit::classical_bound(spec, a.d, opts);
    }
    else
    {
        auto cfg = a.seesaw;
        cfg.threads = a.threads;
        log(1, "see-saw with " + std::to_string(cfg.restarts) + " restarts, d=" + std::to_string(a.d));
        r = dimwit::seesaw_bound(spec, a.d, cfg);
    }
    json j = dimwit::io::to_json(r);
    if (r.model == dimwit::Model::quantum)
    {
        j["seed"] = a.seesaw.seed;
        j["max_iters"] = a.seesaw.max_iters;
        j["tol"] = a.seesaw.tol;
        j["ceiling"] = spec.correlator_ceiling();
    }
    emit(dump(j), a.out);
}

// --- eval ------------------------------------------------------------------

struct EvalArgs
{
    WitnessChoice witness;
    std::string probs;
    std::string counts;
    std::string out;
};

void run_eval(const EvalArgs& a)
{
    const auto spec = resolve_witness(a.witness);
    json j{{"witness", spec.name()}};
    if (!a.probs.empty())
    {
        const auto table = dimwit::io::probability_table_from_json(dimwit::io::read_json_file(a.probs), a.probs);
        try
        {
            j["value"] = dimwit::eval_witness(spec, table);
        }
        catch (const dimwit::ShapeError& e)
        {
            throw UsageError(a.probs + ": " + e.what());
        }
    }
    else
    {
        const auto counts = dimwit::io::counts_from_json(dimwit::io::read_json_file(a.counts), a.counts);
        try
        {
            const auto est = dimwit::witness_with_error(spec, counts);
            j["value"] = est.value;
            j["sigma"] = est.sigma;
            j["wilson_sigma"] = est.wilson_sigma;
        }
        catch (const dimwit::ShapeError& e)
        {
            throw UsageError(a.counts + ": " + e.what());
        }
    }
    emit(dump(j), a.out);
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs
{
    std::string scenario = "qutrit";
    double dl = dimwit::kDefaultDl;
    double tau_min = 0.0;
    double tau_max = 2.0 * dimwit::kDefaultDl;
    int steps = 101;
    double phi = dimwit::kPresetPhiDeg;
    double visibility = 1.0;
    std::string out;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::optional<double> counts_tau;
    std::string counts_out = "counts.json";
};

void run_simulate(const SimulateArgs& a)
{
    dimwit::Scenario scenario;
    try
    {
        scenario = dimwit::Scenario::parse(a.scenario);
    }
    catch (const dimwit::ValidationError& e)
    {
        throw UsageError(e.what());
    }
    if (!(a.dl > 0.0))
        throw UsageError("--dl must be > 0");
    if (a.steps < 1)
        throw UsageError("--steps must be >= 1");

    dimwit::ScanOptions opts{a.phi, a.visibility};
    const auto grid = dimwit::linspace(a.tau_min, a.tau_max, a.steps);
    const auto curve = dimwit::scan_delay(scenario, a.dl, grid, opts);

    std::ostringstream csv;
    csv << "delta_fs,gamma,i4\n";
    for (const auto& p : curve)
        csv << format_number(p.delta) << ',' << format_number(p.gamma) << ',' << format_number(p.i4) << '\n';
    emit(csv.str(), a.out);

    if (a.shots > 0)
    {
        const double tau = a.counts_tau.value_or(0.5 * a.dl);
        const double g = scenario.forced_gamma.value_or(dimwit::gamma_of_delay({a.dl, tau}));
        const auto states = dimwit::ensemble_preset(scenario, g, a.phi, a.visibility);
        const auto obs = dimwit::measurement_preset(scenario.kind);
        const auto table = dimwit::probs_from_quantum(states, obs);
        const auto counts = dimwit::simulate_counts(table, a.shots, a.seed);
        if ((a.out.empty() || a.out == "-") && a.counts_out == "-")
            throw UsageError("--counts-out - needs --out to send the curve elsewhere");
        log(1, "writing counts at tau=" + format_number(tau) + " fs to " + a.counts_out);
        emit(dump(dimwit::io::to_json(counts)), a.counts_out);
    }
}

// --- certify ---------------------------------------------------------------

struct CertifyArgs
{
    WitnessChoice witness;
    std::optional<double> value;
    std::optional<double> sigma;
    double k = 0.0;
    std::string counts;
    bool recompute = false;
    int d_max = 4;
    dimwit::SeesawConfig seesaw;
    unsigned threads = 0;
    std::string out;
};

void run_certify(CertifyArgs a)
{
    const auto spec = resolve_witness(a.witness);

    json estimate;
    if (!a.counts.empty())
    {
        const auto counts = dimwit::io::counts_from_json(dimwit::io::read_json_file(a.counts), a.counts);
        dimwit::WitnessEstimate est;
        try
        {
            est = dimwit::witness_with_error(spec, counts);
        }
        catch (const dimwit::ShapeError& e)
        {
            throw UsageError(a.counts + ": " + e.what());
        }
        a.value = est.value;
        a.sigma = est.sigma;
        estimate = json{{"source", a.counts}, {"wilson_sigma", est.wilson_sigma}};
    }
    if (!a.value)
        throw UsageError("certify needs --value (with --sigma) or --counts");

    std::optional<dimwit::BoundsTable> bounds;
    if (a.recompute)
    {
        a.seesaw.threads = a.threads;
        dimwit::ClassicalOptions copts;
        copts.threads = a.threads;
        log(1, "recomputing bounds up to d=" + std::to_string(a.d_max));
        bounds = dimwit::compute_bounds(spec, a.d_max, a.seesaw, copts);
    }
    else
    {
        if (spec.name() != "I4")
            throw UsageError("no builtin bounds for witness '" + spec.name() + "'; pass --recompute");
        bounds = dimwit::builtin_i4_bounds();
    }

    auto report = dimwit::certify(*a.value, a.sigma.value_or(0.0), a.k, *bounds);
    json j = dimwit::io::to_json(report);
    j["witness"] = spec.name();
    j["bounds"] = dimwit::io::to_json(*bounds)["rows"];
    if (!estimate.is_null())
        j["estimate"] = estimate;
    emit(dump(j), a.out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Prepare-and-measure dimension witnesses: bounds, evaluation, simulation, certification"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", g_verbosity, "Log progress to stderr (repeat for more)");
    app.set_version_flag("--version", "dimwit 1.0.0");

    BoundsArgs bounds;
    auto* b = app.add_subcommand("bounds", "Classical (exact) or quantum (see-saw lower bound) maximum of a witness");
    b->add_option("--model", bounds.model, "classical | quantum")
        ->check(CLI::IsMember({"classical", "quantum"}))
        ->capture_default_str();
    add_witness_options(b, bounds.witness);
    b->add_option("--d", bounds.d, "System dimension")->required()->check(CLI::Range(1, 64));
    b->add_option("--restarts", bounds.seesaw.restarts, "See-saw restarts")->capture_default_str()->check(CLI::PositiveNumber);
    b->add_option("--max-iters", bounds.seesaw.max_iters, "See-saw iterations per restart")->capture_default_str()->check(CLI::PositiveNumber);
    b->add_option("--tol", bounds.seesaw.tol, "Relative improvement threshold")->capture_default_str()->check(CLI::PositiveNumber);
    b->add_option("--seed", bounds.seesaw.seed, "RNG seed; restart r uses seed + r")->capture_default_str();
    b->add_option("--cap", bounds.cap, "Refuse classical enumerations above this many strategies")->capture_default_str();
    b->add_flag("--symmetry", bounds.symmetry, "Enumerate only canonical dit labelings");
    b->add_option("--threads", bounds.threads, "Worker threads (0: DIMWIT_THREADS or hardware)")->capture_default_str();
    b->add_option("--out", bounds.out, "Output path (default stdout)");

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Evaluate a witness on a probability table or counts");
    add_witness_options(e, eval.witness);
    auto* probs_opt = e->add_option("--probs", eval.probs, "Probability table JSON")->check(CLI::ExistingFile);
    auto* counts_opt = e->add_option("--counts", eval.counts, "Counts JSON")->check(CLI::ExistingFile);
    probs_opt->excludes(counts_opt);
    e->add_option("--out", eval.out, "Output path (default stdout)");

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Scan the photonic preset over the delay line; CSV delta_fs,gamma,i4");
    s->add_option("--scenario", sim.scenario, "qubit | qutrit | quart | bit | trit")
        ->check(CLI::IsMember({"qubit", "qutrit", "quart", "bit", "trit"}))
        ->capture_default_str();
    s->add_option("--dl", sim.dl, "Group-velocity mismatch times crystal length, fs")->capture_default_str();
    s->add_option("--tau-min", sim.tau_min, "First delay, fs")->capture_default_str();
    s->add_option("--tau-max", sim.tau_max, "Last delay, fs")->capture_default_str();
    s->add_option("--steps", sim.steps, "Number of delay points")->capture_default_str();
    s->add_option("--phi", sim.phi, "Polarizer angle of the first two preparations, degrees")->capture_default_str();
    s->add_option("--visibility", sim.visibility, "Multiplier on off-diagonal coherences")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    s->add_option("--out", sim.out, "CSV output path (default stdout)");
    s->add_option("--shots", sim.shots, "Also sample counts with this many shots per setting");
    s->add_option("--seed", sim.seed, "Seed for --shots")->capture_default_str();
    s->add_option("--counts-tau", sim.counts_tau, "Delay of the sampled table, fs (default DL/2)");
    s->add_option("--counts-out", sim.counts_out, "Counts JSON path ('-' for stdout)")->capture_default_str();

    CertifyArgs cert;
    auto* c = app.add_subcommand("certify", "Minimum classical/quantum dimension consistent with a witness value");
    add_witness_options(c, cert.witness);
    auto* value_opt = c->add_option("--value", cert.value, "Measured witness value");
    c->add_option("--sigma", cert.sigma, "Standard error of the value")->needs(value_opt)->check(CLI::NonNegativeNumber);
    auto* ccounts = c->add_option("--counts", cert.counts, "Counts JSON; value and sigma are estimated from it")->check(CLI::ExistingFile);
    ccounts->excludes(value_opt);
    c->add_option("--k", cert.k, "Confidence multiplier on sigma")->capture_default_str()->check(CLI::NonNegativeNumber);
    c->add_flag("--recompute", cert.recompute, "Recompute bounds (enumeration and see-saw) instead of the builtin table");
    c->add_option("--d-max", cert.d_max, "Largest dimension for --recompute")->capture_default_str()->check(CLI::Range(1, 16));
    c->add_option("--restarts", cert.seesaw.restarts, "See-saw restarts for --recompute")->capture_default_str();
    c->add_option("--seed", cert.seesaw.seed, "See-saw seed for --recompute")->capture_default_str();
    c->add_option("--threads", cert.threads, "Worker threads (0: DIMWIT_THREADS or hardware)")->capture_default_str();
    c->add_option("--out", cert.out, "Output path (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success& ex)
    {
        return app.exit(ex);
    }
    catch (const CLI::ParseError& ex)
    {
        app.exit(ex);
        return 2;
    }

    try
    {
        if (b->parsed())
            run_bounds(bounds);
        else if (e->parsed())
        {
            if (eval.probs.empty() && eval.counts.empty())
                throw UsageError("eval needs --probs or --counts");
            run_eval(eval);
        }
        else if (s->parsed())
            run_simulate(sim);
        else if (c->parsed())
            run_certify(cert);
    }
    catch (const UsageError& ex)
    {
        std::cerr << "dimwit: " << ex.what() << '\n';
        return 2;
    }
    catch (const dimwit::FormatError& ex)
    {
        std::cerr << "dimwit: " << ex.what() << '\n';
        return 2;
    }
    catch (const dimwit::ShapeError& ex)
    {
        std::cerr << "dimwit: " << ex.what() << '\n';
        return 2;
    }
    catch (const std::exception& ex)
    {
        std::cerr << "dimwit: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
