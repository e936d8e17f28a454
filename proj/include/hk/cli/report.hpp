#pragma once

// Check records and the report document shared by all hkverify commands.

#include <hk/io.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace hk::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.3.0";

/// Anchor strings attached to check records.
namespace anchor {
inline constexpr std::string_view kHodgeStar = "the Hodge star operator";
inline constexpr std::string_view kTopPower = "ω_I^n=n!·vol_g";
inline constexpr std::string_view kQuaternionic = "e:quaternionic";
inline constexpr std::string_view kKeyIdentity = "★^{-1}∘L_I^{n-1}=n!·I^*";
inline constexpr std::string_view kComposite = "e:conds2";
inline constexpr std::string_view kTripleRelations = "e:conds";
inline constexpr std::string_view kReconstruction = "p:hyper-kahler";
inline constexpr std::string_view kDefinite = "e:posdef";
inline constexpr std::string_view kL2Metric = "p:linalg";
inline constexpr std::string_view kModuli = "t:moduli";
inline constexpr std::string_view kHodgeIso = "e:hodge";
inline constexpr std::string_view kTangent = "e:tangent";
}  // namespace anchor

struct CheckRecord {
    std::string name;
    std::string paper_anchor;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

class Report {
public:
    Report(std::string command, Json config);

    /// pass = residual < tolerance (NaN fails).
    void add(std::string name, std::string_view anchor, double residual, double tolerance);
    /// Exact identities: tolerance 0, pass iff residual == 0.
    void add_exact(std::string name, std::string_view anchor, double residual);
    /// For checks whose outcome is not a residual comparison.
    void add_flag(std::string name, std::string_view anchor, bool pass);
    void set_detail(const std::string& key, Json value);

    [[nodiscard]] const std::vector<CheckRecord>& checks() const { return checks_; }
    [[nodiscard]] int failures() const;
    [[nodiscard]] Json to_json() const;
    [[nodiscard]] std::string summary_text() const;

private:
    std::string command_;
    Json config_;
    Json details_ = Json::object();
    std::vector<CheckRecord> checks_;
};

/// Writes canonical_dump(report.to_json()); throws Error when the path is not
/// writable.
void write_report(const Report& report, const std::string& path);

}  // namespace hk::cli
