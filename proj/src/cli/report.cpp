#include <hk/cli/report.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hk::cli {

Report::Report(std::string command, Json config)
    : command_(std::move(command)), config_(std::move(config)) {}

void Report::add(std::string name, std::string_view anchor, double residual, double tolerance) {
    checks_.push_back({std::move(name), std::string(anchor), residual, tolerance, residual < tolerance});
}

void Report::add_exact(std::string name, std::string_view anchor, double residual) {
    checks_.push_back({std::move(name), std::string(anchor), residual, 0.0, residual == 0.0});
}

void Report::add_flag(std::string name, std::string_view anchor, bool pass) {
    checks_.push_back({std::move(name), std::string(anchor), pass ? 0.0 : 1.0, 0.5, pass});
}

void Report::set_detail(const std::string& key, Json value) { details_[key] = std::move(value); }

int Report::failures() const {
    int n = 0;
    for (const auto& c : checks_) n += c.pass ? 0 : 1;
    return n;
}

Json Report::to_json() const {
    Json checks = Json::array();
    for (const auto& c : checks_) {
        checks.push_back(Json{{"name", c.name},
                              {"paper_anchor", c.paper_anchor},
                              {"residual", c.residual},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
    }
    const int failed = failures();
    const int total = static_cast<int>(checks_.size());
    Json out{{"schema", kSchemaVersion},
             {"tool_version", std::string(kToolVersion)},
             {"command", command_},
             {"config", config_},
             {"checks", std::move(checks)}};
    if (!details_.empty()) out["details"] = details_;
    out["summary"] = Json{{"total", total}, {"passed", total - failed}, {"failed", failed}};
    return out;
}

std::string Report::summary_text() const {
    std::ostringstream out;
    for (const auto& c : checks_) {
        if (c.pass) continue;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e (tol %.1e)", c.residual, c.tolerance);
        out << "  FAIL " << c.name << "  residual " << buf << "\n";
    }
    const int failed = failures();
    out << command_ << ": " << checks_.size() - static_cast<std::size_t>(failed) << "/"
        << checks_.size() << " checks passed";
    if (failed > 0) out << ", " << failed << " failed";
    out << "\n";
    return out.str();
}

void write_report(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write report to '" + path + "'");
    out << canonical_dump(report.to_json());
    if (!out) throw Error("failed while writing report to '" + path + "'");
}

}  // namespace hk::cli
