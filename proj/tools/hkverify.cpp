// hkverify: verification suites and single-instance commands.
//
// Exit status: 0 when every check passes, 1 when some check fails, 2 on input
// errors (bad flags, unreadable or malformed JSON, guard rejections).

#include <hk/cli/commands.hpp>
#include <hk/cli/suites.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::optional<double> tol;
    std::string out;
    bool json_only = false;
};

int finish(const hk::cli::Report& report, const Globals& g, const std::string& headline) {
    if (!g.out.empty()) hk::cli::write_report(report, g.out);
    if (g.json_only) {
        std::cout << hk::canonical_dump(report.to_json());
    } else {
        if (!headline.empty()) std::cout << headline;
        std::cout << report.summary_text();
        if (!g.out.empty()) std::cout << "report written to " << g.out << "\n";
    }
    return report.failures() == 0 ? 0 : 1;
}

std::string torus_headline(const hk::cli::Report& report) {
    const hk::Json doc = report.to_json();
    const auto& model = doc["details"]["model"];
    std::string line = "r = " + std::to_string(model["rank"].get<int>()) +
                       ", model dimension " + std::to_string(model["model_dim"].get<int>()) +
                       ", verdict " + model["verdict"].get<std::string>() + " (" +
                       model["label"].get<std::string>() + ")\n";
    if (doc["details"].contains("oracle")) {
        const auto& o = doc["details"]["oracle"];
        line += "lattice N = " + std::to_string(o["N"].get<int>()) + ": kernel_dim " +
                std::to_string(o["kernel_dim"].get<int>()) + "\n";
    }
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for hyper-Kähler linear algebra and flat-torus moduli"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Seed for randomized trials");
    app.add_option("--tol", g.tol, "Identity tolerance (verify) or validation tolerance (reconstruct)");
    app.add_option("--out", g.out, "Write the JSON report to this path");
    app.add_flag("--json-only", g.json_only, "Print the JSON report instead of the summary");

    hk::cli::SuiteConfig suite;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", suite.suite, "Suite name")
        ->check(CLI::IsMember(hk::cli::kSuiteNames));
    verify->add_option("--k", suite.ks, "Quaternionic dimensions k (comma separated)")
        ->delimiter(',');
    verify->add_option("--trials", suite.trials, "Random trials per k");
    verify->add_option("--oracle-grid", suite.oracle_grid, "Lattice grid for the oracle run (0 skips)");

    std::string input;
    auto* rec = app.add_subcommand("reconstruct", "Reconstruct a metric from a triple of 2-forms");
    rec->add_option("--input", input, "Triple JSON {dim, W_I, W_J, W_K}")->required();

    std::vector<double> angles;
    double scale = 1.0;
    std::optional<int> oracle;
    auto* torus = app.add_subcommand("torus", "Check the moduli metric at an su(2) holonomy on T^4");
    torus->add_option("--angles", angles, "Four holonomy angles")->required()->delimiter(',');
    torus->add_option("--scale", scale, "Torus side length");
    torus->add_option("--oracle", oracle, "Run the lattice oracle on an N^4 grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) {
            suite.seed = g.seed;
            if (g.tol) suite.tolerances.identity = *g.tol;
            return finish(hk::cli::run_suite(suite), g, "");
        }
        if (*rec) {
            const hk::cli::Report report = hk::cli::reconstruct_cmd(input, g.tol.value_or(1e-9));
            const std::string verdict = report.to_json()["details"]["verdict"].get<std::string>();
            return finish(report, g, "verdict: " + verdict + "\n");
        }
        const hk::cli::Report report = hk::cli::torus_cmd(angles, scale, oracle, g.seed);
        return finish(report, g, torus_headline(report));
    } catch (const hk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
