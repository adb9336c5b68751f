// diracalg: batch driver for the graded-ring engine. One job per invocation;
// the JSON report goes to stdout, data artifacts to the requested path.

#include "cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <iostream>
#include <string>
#include <thread>
#include <utility>

#include "CLI11.hpp"

#include "dirac/descent.hpp"
#include "dirac/io.hpp"

namespace {

using dirac::io::JobSpec;
using nlohmann::json;
namespace io = dirac::io;

struct JobResult {
    std::string status = "pass";
    json payload = json::object();
    std::string data;  // artifact body; empty when the report itself is the artifact
};

const std::string& input_path(const JobSpec& job, const std::string& role) {
    auto it = job.input_paths.find(role);
    if (it == job.input_paths.end())
        throw dirac::ParseError("command '" + job.command + "' needs input role '" + role + "'");
    return it->second;
}

void check_params(const JobSpec& job, std::initializer_list<const char*> allowed) {
    for (auto it = job.params.begin(); it != job.params.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a)
                known = true;
        if (!known)
            throw dirac::ParseError("command '" + job.command + "' does not take parameter '" +
                                    it.key() + "'");
    }
}

void check_inputs(const JobSpec& job, std::initializer_list<const char*> allowed) {
    for (const auto& [role, path] : job.input_paths) {
        bool known = false;
        for (const char* a : allowed)
            if (role == a)
                known = true;
        if (!known)
            throw dirac::ParseError("command '" + job.command + "' does not take input role '" +
                                    role + "'");
    }
}

std::string pick_format(const std::string& requested, const std::string& fallback,
                        std::initializer_list<const char*> allowed) {
    std::string f = requested.empty() ? fallback : requested;
    for (const char* a : allowed)
        if (f == a)
            return f;
    throw dirac::ParseError("format '" + f + "' is not available for this command");
}

std::string emit_page(const dirac::E2Page& page, const std::string& fmt) {
    if (fmt == "csv")
        return io::e2_to_csv(page);
    if (fmt == "text")
        return io::e2_to_text(page);
    return io::dump(io::e2_to_json(page));
}

JobResult run_fgl_check(const JobSpec& job) {
    check_params(job, {});
    check_inputs(job, {"law"});
    dirac::FormalGroupLaw law = io::fgl_from_json(io::load_json_file(input_path(job, "law")));
    dirac::FGLReport rep = dirac::check_axioms(law);
    JobResult r;
    r.status = rep.all_ok() ? "pass" : "fail";
    r.payload = io::fgl_report_to_json(rep);
    r.data = io::dump(r.payload);
    return r;
}

JobResult run_fgl_invert(const JobSpec& job) {
    check_params(job, {});
    check_inputs(job, {"law"});
    dirac::FormalGroupLaw law = io::fgl_from_json(io::load_json_file(input_path(job, "law")));
    dirac::SeriesFamily inv = dirac::inverse_series(law);
    JobResult r;
    r.payload["dimension"] = law.dimension();
    r.payload["order"] = law.order();
    r.data = io::dump(io::family_to_json(inv, law.coordinate_degrees()));
    return r;
}

JobResult run_fgl_act(const JobSpec& job) {
    check_params(job, {});
    check_inputs(job, {"law", "change"});
    dirac::FormalGroupLaw law = io::fgl_from_json(io::load_json_file(input_path(job, "law")));
    dirac::CoordinateChange change =
        io::change_from_json(io::load_json_file(input_path(job, "change")));
    dirac::FormalGroupLaw moved = dirac::act(change, law);
    JobResult r;
    r.payload["dimension"] = moved.dimension();
    r.payload["order"] = moved.order();
    r.data = io::dump(io::fgl_to_json(moved));
    return r;
}

JobResult run_lazard_ranks(const JobSpec& job, const io::Config& cfg, const std::string& fmt,
                           unsigned width) {
    check_params(job, {"max_degree"});
    check_inputs(job, {});
    std::int64_t max_degree = io::int_field(job.params, "max_degree");
    std::vector<dirac::LazardRankRow> rows =
        dirac::lazard_graded_ranks(max_degree, width, cfg.lazard_degree_bound);
    std::string f = pick_format(fmt, "csv", {"csv", "json"});
    JobResult r;
    r.payload = io::lazard_to_json(rows);
    r.data = f == "csv" ? io::lazard_to_csv(rows) : io::dump(r.payload);
    return r;
}

JobResult run_steenrod_psi(const JobSpec& job) {
    check_params(job, {});
    check_inputs(job, {"element"});
    dirac::SteenrodElement x =
        io::steenrod_from_json(io::load_json_file(input_path(job, "element")));
    dirac::TensorElement t = dirac::psi(x);
    JobResult r;
    r.payload["input_terms"] = x.terms().size();
    r.payload["output_terms"] = t.terms().size();
    r.data = io::dump(io::tensor_to_json(t));
    return r;
}

JobResult run_steenrod_poincare(const JobSpec& job, const std::string& fmt) {
    check_params(job, {"p", "max_degree"});
    check_inputs(job, {});
    std::vector<dirac::PoincareRow> rows = dirac::poincare_dims(
        io::int_field(job.params, "p"), io::int_field(job.params, "max_degree"));
    std::string f = pick_format(fmt, "csv", {"csv", "json"});
    JobResult r;
    r.payload = io::poincare_to_json(rows);
    r.data = f == "csv" ? io::poincare_to_csv(rows) : io::dump(r.payload);
    return r;
}

JobResult run_steenrod_verify(const JobSpec& job, const std::string& fmt, unsigned width) {
    check_params(job, {"p", "max_degree"});
    check_inputs(job, {});
    dirac::HopfReport rep = dirac::verify_hopf(io::int_field(job.params, "p"),
                                               io::int_field(job.params, "max_degree"), width);
    std::string f = pick_format(fmt, "json", {"csv", "json"});
    JobResult r;
    r.status = rep.ok() ? "pass" : "fail";
    r.payload = io::hopf_report_to_json(rep);
    r.data = f == "csv" ? io::hopf_report_to_csv(rep) : io::dump(r.payload);
    return r;
}

JobResult run_steenrod_duality(const JobSpec& job, const io::Config& cfg,
                               const std::string& fmt) {
    check_params(job, {"p", "jet_order", "orientation"});
    check_inputs(job, {});
    std::string orient =
        io::opt_str_field(job.params, "orientation", cfg.duality_orientation);
    dirac::DualityReport rep =
        dirac::duality_check(io::int_field(job.params, "p"),
                             io::int_field(job.params, "jet_order"),
                             io::orientation_from_name(orient));
    std::string f = pick_format(fmt, "json", {"csv", "json"});
    JobResult r;
    r.status = rep.ok() ? "pass" : "fail";
    r.payload = io::duality_report_to_json(rep);
    r.data = f == "csv" ? io::duality_report_to_csv(rep) : io::dump(r.payload);
    return r;
}

JobResult run_amitsur_e2(const JobSpec& job, const io::Config& cfg, const std::string& fmt) {
    check_params(job, {"levels"});
    check_inputs(job, {"algebra", "coefficients"});
    std::int64_t levels = io::int_field(job.params, "levels");
    if (levels < 0)
        throw dirac::ParseError("'levels' must be nonnegative");
    dirac::FiniteGradedAlgebra target =
        io::finite_algebra_from_json(io::load_json_file(input_path(job, "algebra")));
    dirac::RingMapSpec spec = [&] {
        auto it = job.input_paths.find("coefficients");
        if (it == job.input_paths.end())
            return dirac::RingMapSpec(std::move(target));
        return dirac::RingMapSpec(std::move(target),
                                  io::space_from_json(io::load_json_file(it->second)));
    }();
    dirac::E2Page page =
        dirac::amitsur_e2(spec, static_cast<std::size_t>(levels), cfg.amitsur_dim_cap);
    std::string f = pick_format(fmt, "csv", {"csv", "json", "text"});
    JobResult r;
    r.payload = io::e2_to_json(page);
    r.data = emit_page(page, f);
    return r;
}

JobResult run_adams_e2(const JobSpec& job, const io::Config& cfg, const std::string& fmt) {
    check_params(job, {"p", "max_s", "max_t"});
    check_inputs(job, {"comodule"});
    std::int64_t max_s = io::int_field(job.params, "max_s");
    std::int64_t max_t = io::int_field(job.params, "max_t");
    dirac::E2Page page;
    auto it = job.input_paths.find("comodule");
    if (it != job.input_paths.end()) {
        dirac::HopfComoduleSpec comodule = io::comodule_from_json(io::load_json_file(it->second));
        if (io::opt_int_field(job.params, "p", comodule.p()) != comodule.p())
            throw dirac::ParseError("'p' disagrees with the comodule file");
        page = dirac::adams_e2_for_comodule(comodule, max_s, max_t, cfg.cobar_basis_cap);
    } else {
        page = dirac::adams_e2(io::int_field(job.params, "p"), max_s, max_t,
                               cfg.cobar_basis_cap);
    }
    std::string f = pick_format(fmt, "csv", {"csv", "json", "text"});
    JobResult r;
    r.payload = io::e2_to_json(page);
    r.data = emit_page(page, f);
    return r;
}

JobResult run_flatness_witness(const JobSpec& job) {
    check_params(job, {"mode", "min_degree", "max_degree"});
    check_inputs(job, {"system"});
    std::string mode = io::opt_str_field(job.params, "mode", "check");
    JobResult r;
    if (mode == "check") {
        io::PolyWitnessFile file =
            io::poly_witness_from_json(io::load_json_file(input_path(job, "system")));
        dirac::FlatnessReport rep = dirac::check_flatness_witness(file.system, file.witness);
        r.status = rep.ok ? "pass" : "fail";
        r.payload = io::flatness_report_to_json(rep);
    } else if (mode == "search") {
        dirac::FiniteSystem sys =
            io::finite_system_from_json(io::load_json_file(input_path(job, "system")));
        dirac::Degree lo{io::opt_int_field(job.params, "min_degree", -128)};
        dirac::Degree hi{io::opt_int_field(job.params, "max_degree", 128)};
        auto solution = dirac::search_faithful_flatness_witness(sys, lo, hi);
        r.payload["window"]["min_degree"] = lo.value;
        r.payload["window"]["max_degree"] = hi.value;
        r.payload["found"] = solution.has_value();
        if (solution) {
            json sol = json::array();
            for (const dirac::FpVec& v : *solution)
                sol.push_back(io::fpvec_to_json(v));
            r.payload["solution"] = std::move(sol);
        } else {
            r.status = "fail";
            r.payload["solution"] = nullptr;
            r.payload["detail"] = "not found in window";
        }
    } else {
        throw dirac::ParseError("flatness-witness mode must be 'check' or 'search'");
    }
    r.data = io::dump(r.payload);
    return r;
}

JobResult dispatch(const JobSpec& job, const io::Config& cfg, const std::string& fmt,
                   unsigned width) {
    if (job.command == "fgl-check")
        return run_fgl_check(job);
    if (job.command == "fgl-invert")
        return run_fgl_invert(job);
    if (job.command == "fgl-act")
        return run_fgl_act(job);
    if (job.command == "lazard-ranks")
        return run_lazard_ranks(job, cfg, fmt, width);
    if (job.command == "steenrod-psi")
        return run_steenrod_psi(job);
    if (job.command == "steenrod-poincare")
        return run_steenrod_poincare(job, fmt);
    if (job.command == "steenrod-verify")
        return run_steenrod_verify(job, fmt, width);
    if (job.command == "steenrod-duality")
        return run_steenrod_duality(job, cfg, fmt);
    if (job.command == "amitsur-e2")
        return run_amitsur_e2(job, cfg, fmt);
    if (job.command == "adams-e2")
        return run_adams_e2(job, cfg, fmt);
    if (job.command == "flatness-witness")
        return run_flatness_witness(job);
    throw dirac::InternalError("dispatch: unhandled command '" + job.command + "'");
}

int run(int argc, char** argv) {
    CLI::App app{"diracalg: exact computer algebra for Koszul-signed graded rings"};
    std::string job_path, out_path, config_path, format;
    std::int64_t threads = -1;
    app.add_option("--job", job_path, "job file (JSON)")->required();
    app.add_option("--out", out_path, "data output path (overrides the job's output_path)");
    app.add_option("--config", config_path,
                   "config file (JSON); default taken from $DIRACALG_CONFIG");
    app.add_option("--threads", threads, "engine parallelism width (0 = hardware)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--format", format, "data output format")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto started = std::chrono::steady_clock::now();
    io::Config cfg;
    if (config_path.empty())
        if (const char* env = std::getenv("DIRACALG_CONFIG"))
            config_path = env;
    if (!config_path.empty())
        cfg = io::config_from_json(io::load_json_file(config_path));
    if (threads >= 0)
        cfg.threads = static_cast<unsigned>(threads);
    unsigned width = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());

    JobSpec job = io::job_from_json(io::load_json_file(job_path));
    if (!out_path.empty())
        job.output_path = out_path;

    JobResult res = dispatch(job, cfg, format, width);

    if (!res.data.empty()) {
        if (!job.output_path.empty()) {
            io::write_text_file(job.output_path, res.data);
            res.payload["output_path"] = job.output_path;
        } else {
            res.payload["output"] = res.data;
        }
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cout << io::dump(io::make_report(job.command, res.status, std::move(res.payload),
                                          seconds));
    return 0;
}

int report_error(const char* code, const std::string& message, int exit_code) {
    json j;
    j["status"] = "error";
    j["error_code"] = code;
    j["message"] = message;
    std::cout << j.dump(2) << "\n";
    std::cerr << "error: " << message << "\n";
    return exit_code;
}

}  // namespace

namespace dirac::cli {

int run_main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dirac::ParseError& e) {
        return report_error("parse", e.what(), 2);
    } catch (const dirac::DomainError& e) {
        return report_error("domain", e.what(), 3);
    } catch (const dirac::ResourceError& e) {
        return report_error("resource", e.what(), 4);
    } catch (const dirac::InternalError& e) {
        return report_error("internal", e.what(), 5);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), 5);
    }
}

}  // namespace dirac::cli
