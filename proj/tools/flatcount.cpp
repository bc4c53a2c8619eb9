#include "flatcount/report.hpp"
#include "flatcount/templates.hpp"
#include "flatcount/verify.hpp"
#include "flatcount/windtree.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fc = flatcount;
namespace fs = std::filesystem;

namespace {

struct SurfaceArgs {
    std::string tmpl;
    std::string file;
    std::string a = "1/2", b = "1/2";
};

void add_surface_options(CLI::App* cmd, SurfaceArgs& args) {
    cmd->add_option("--template", args.tmpl, "builtin template: torus|pillowcase|lab|staircase|qtemplate1|qtemplate2");
    cmd->add_option("--file", args.file, "surface JSON file");
    cmd->add_option("--a", args.a, "lab parameter a, exact (e.g. 1/3 or 3-2√2)");
    cmd->add_option("--b", args.b, "lab parameter b, exact");
}

std::shared_ptr<const fc::FlatSurface> load_surface(const SurfaceArgs& args) {
    if (!args.tmpl.empty() && !args.file.empty())
        throw fc::ValidationError("give either --template or --file, not both");
    if (!args.tmpl.empty())
        return fc::template_by_name(args.tmpl, fc::Scalar::parse(args.a), fc::Scalar::parse(args.b));
    if (!args.file.empty()) {
        std::ifstream in(args.file);
        if (!in) throw fc::ValidationError("cannot read '" + args.file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return std::make_shared<const fc::FlatSurface>(fc::surface_from_json(ss.str()));
    }
    throw fc::ValidationError("a surface is required (--template or --file)");
}

int thread_count(int cli_value) {
    if (cli_value > 0) return cli_value;
    if (const char* env = std::getenv("FLATCOUNT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

void write_or_print(const std::string& out_dir, const std::string& name, const std::string& payload) {
    if (out_dir.empty()) {
        std::cout << payload;
        return;
    }
    fs::create_directories(out_dir);
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    f << payload;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flatcount: exact flat-surface cylinder counting and Siegel-Veech verification"};
    app.require_subcommand(1);

    // --- stratum ---
    auto* stratum = app.add_subcommand("stratum", "print stratum, genus, area and cone table");
    SurfaceArgs stratum_args;
    add_surface_options(stratum, stratum_args);
    std::string emit_path;
    bool stratum_json = false;
    stratum->add_option("--emit", emit_path, "write the surface JSON to this path");
    stratum->add_flag("--json", stratum_json, "machine-readable output");

    // --- count ---
    auto* count = app.add_subcommand("count", "enumerate cylinders and emit reports");
    SurfaceArgs count_args;
    add_surface_options(count, count_args);
    std::string length = "10", filter = "all", out_dir, format = "json";
    int threads_opt = 0, csv_rows = 20;
    count->add_option("--length", length, "length bound L (exact scalar)");
    count->add_option("--filter", filter, "all | profile=pq | wpair[=a,b] | joins=a,b");
    count->add_option("--threads", threads_opt, "worker threads (or FLATCOUNT_THREADS)");
    count->add_option("--out", out_dir, "write cylinders.jsonl and convergence.csv here");
    count->add_option("--format", format, "json|csv (stdout format)")->check(CLI::IsMember({"json", "csv"}));
    count->add_option("--csv-rows", csv_rows, "rows in the convergence table");

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "run the verification battery");
    std::string suite = "all";
    verify->add_option("suite", suite, "all | constants | covers | counterexample | windtree");
    double tol_torus = 0.02, tol_windtree = 0.15;
    int verify_threads = 0;
    bool verify_json = false;
    verify->add_option("--tolerance-torus", tol_torus, "relative tolerance for the torus check");
    verify->add_option("--tolerance-windtree", tol_windtree, "relative tolerance for wind-tree estimates");
    verify->add_option("--threads", verify_threads, "worker threads");
    verify->add_flag("--json", verify_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*stratum) {
            auto s = load_surface(stratum_args);
            auto sig = fc::stratum_signature(*s);
            if (stratum_json) {
                nlohmann::ordered_json j;
                j["stratum"] = sig.display();
                j["kind"] = s->kind() == fc::Kind::abelian ? "abelian" : "quadratic";
                j["genus"] = sig.genus;
                j["area"] = {{"exact", s->area().str()}, {"float", s->area().to_double()}};
                nlohmann::ordered_json cones = nlohmann::ordered_json::array();
                for (const auto& cp : s->cone_points()) {
                    nlohmann::ordered_json c;
                    c["name"] = cp.name;
                    c["angle_pi"] = cp.angle_pi;
                    c["order"] = cp.order;
                    c["pole"] = cp.is_pole;
                    cones.push_back(std::move(c));
                }
                j["cone_points"] = std::move(cones);
                nlohmann::ordered_json marks = nlohmann::ordered_json::array();
                for (const auto& m : s->markings()) marks.push_back(m.name);
                j["markings"] = std::move(marks);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << sig.display() << ", genus " << sig.genus << ", area " << s->area().str() << "\n";
                for (const auto& cp : s->cone_points())
                    std::cout << "  " << cp.name << ": angle " << cp.angle_pi << "*pi, order " << cp.order
                              << (cp.is_pole ? " (pole)" : "") << "\n";
                for (const auto& m : s->markings()) std::cout << "  marking " << m.name << "\n";
            }
            if (!emit_path.empty()) {
                std::ofstream f(emit_path, std::ios::binary);
                f << fc::surface_to_json(*s);
            }
            return 0;
        }
        if (*count) {
            auto s = load_surface(count_args);
            fc::CountOptions opt;
            opt.L = fc::Scalar::parse(length);
            opt.filter = filter;
            opt.threads = thread_count(threads_opt);
            opt.csv_rows = csv_rows;
            auto rep = fc::make_count_report(*s, opt);
            if (!out_dir.empty()) {
                write_or_print(out_dir, "cylinders.jsonl", rep.jsonl);
                write_or_print(out_dir, "convergence.csv", rep.csv);
            } else {
                std::cout << (format == "json" ? rep.jsonl : rep.csv);
            }
            return 0;
        }
        if (*verify) {
            fc::VerifyOptions opt;
            opt.tol_torus = tol_torus;
            opt.tol_windtree = tol_windtree;
            opt.threads = thread_count(verify_threads);
            auto results = fc::verify_suite(suite, opt);
            bool all_pass = true;
            if (verify_json) {
                nlohmann::ordered_json j;
                j["suite"] = suite;
                nlohmann::ordered_json checks = nlohmann::ordered_json::array();
                for (const auto& r : results) {
                    all_pass = all_pass && r.pass;
                    nlohmann::ordered_json c;
                    c["name"] = r.name;
                    c["pass"] = r.pass;
                    c["detail"] = r.detail;
                    c["seconds"] = r.seconds;
                    checks.push_back(std::move(c));
                }
                j["checks"] = std::move(checks);
                j["pass"] = all_pass;
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& r : results) {
                    all_pass = all_pass && r.pass;
                    std::printf("[%s] %s (%.2fs) %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                                r.detail.c_str());
                }
            }
            return all_pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
