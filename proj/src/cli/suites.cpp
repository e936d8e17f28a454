#include <hk/cli/suites.hpp>

#include <hk/lattice_oracle.hpp>
#include <hk/lefschetz.hpp>
#include <hk/random.hpp>
#include <hk/reconstruct.hpp>
#include <hk/torus_moduli.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace hk::cli {

namespace {

std::string tag(const std::string& base, int k) { return base + "[k=" + std::to_string(k) + "]"; }

std::string tag(const std::string& base, int k, Axis a) {
    return base + "[k=" + std::to_string(k) + ",axis=" + std::string(axis_name(a)) + "]";
}

double relative(const Eigen::MatrixXd& diff, const Eigen::MatrixXd& ref) {
    const double s = ref.norm();
    return s > 0.0 ? diff.norm() / s : diff.norm();
}

// Worst residual over trials, NaN-sticky.
struct Worst {
    double value = 0.0;
    void update(double r) {
        if (std::isnan(r) || std::isnan(value)) {
            value = std::numeric_limits<double>::quiet_NaN();
        } else {
            value = std::max(value, r);
        }
    }
};

void for_trials(const SuiteConfig& c, int k, const std::function<void(std::uint64_t)>& body) {
    for (int t = 0; t < c.trials; ++t) {
        body(trial_seed(c.seed ^ (static_cast<std::uint64_t>(k) << 56), static_cast<std::uint64_t>(t)));
    }
}

void exterior_laws(const SuiteConfig& c, int k, Report& rep) {
    const int dim = 4 * k;
    Worst anti, assoc, star, double_star;
    for_trials(c, k, [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> deg(0, dim);
        const int p = deg(rng);
        const int q = deg(rng);
        const int r = deg(rng);
        const KForm a = random_form(dim, p, rng, 12);
        const KForm b = random_form(dim, q, rng, 12);
        const KForm e = random_form(dim, r, rng, 12);
        const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
        anti.update((wedge(a, b) - sign * wedge(b, a)).max_abs());

        const KForm left = wedge(wedge(a, b), e);
        const KForm right = wedge(a, wedge(b, e));
        const double scale = std::max(left.norm(), a.norm() * b.norm() * e.norm());
        assoc.update(scale > 0.0 ? (left - right).norm() / scale : 0.0);

        const Metric metric = random_space(k, splitmix64(seed)).metric();
        const KForm alpha = random_form(dim, p, rng, 6);
        const KForm beta = random_form(dim, p, rng, 6);
        const double lhs = volume_ratio(wedge(beta, hodge_star(alpha, metric)), metric);
        const double rhs = inner_product(beta, alpha, metric);
        const double bound = std::sqrt(inner_product(alpha, alpha, metric) *
                                       inner_product(beta, beta, metric));
        star.update(bound > 0.0 ? std::abs(lhs - rhs) / bound : 0.0);

        const Metric flat = Metric::euclidean(dim);
        const double law = (p * (dim - p)) % 2 == 0 ? 1.0 : -1.0;
        for (Mask s : blades(dim, p)) {
            const KForm blade = KForm::blade(dim, s);
            double_star.update((hodge_star(hodge_star(blade, flat), flat) - law * blade).max_abs());
        }
    });
    rep.add_exact(tag("exterior.anticommutativity", k), anchor::kHodgeStar, anti.value);
    rep.add(tag("exterior.associativity", k), anchor::kHodgeStar, assoc.value, 1e-12);
    rep.add(tag("exterior.star_defining_property", k), anchor::kHodgeStar, star.value, 1e-12);
    rep.add_exact(tag("exterior.double_star_sign", k), anchor::kHodgeStar, double_star.value);
}

void quaternionic(const SuiteConfig& c, int k, Report& rep) {
    Worst relations, compat;
    std::array<Worst, 3> top;
    const int n = 2 * k;
    const double nf = factorial(n);
    for_trials(c, k, [&](std::uint64_t seed) {
        const HyperKahlerSpace s = random_space(k, seed);
        const QuaternionicReport q = check_quaternionic(s, c.tolerances.validation);
        relations.update(q.relations.max());
        for (double r : q.compatibility) compat.update(r);
        const KahlerForms forms = kahler_forms(s);
        for (Axis a : kAxes) {
            const double ratio = volume_ratio(wedge_power(forms.form(a), n), s.metric());
            top[axis_index(a)].update(std::abs(ratio - nf) / nf);
        }
    });
    rep.add(tag("quaternionic.relations", k), anchor::kQuaternionic, relations.value,
            c.tolerances.validation);
    rep.add(tag("quaternionic.compatibility", k), anchor::kQuaternionic, compat.value,
            c.tolerances.validation);
    for (Axis a : kAxes) {
        rep.add(tag("quaternionic.top_power", k, a), anchor::kTopPower, top[axis_index(a)].value,
                c.tolerances.validation);
    }
}

void lefschetz_identities(const SuiteConfig& c, int k, Report& rep) {
    std::array<Worst, 3> key, cyclic, anti;
    Worst fitted;
    const double constant = factorial(2 * k - 1);
    for_trials(c, k, [&](std::uint64_t seed) {
        const HyperKahlerSpace s = random_space(k, seed);
        const CompositeIdentityReport comp = composite_identity_report(s, c.tolerances.identity);
        for (Axis a : kAxes) {
            const std::size_t i = axis_index(a);
            key[i].update(key_identity_residual(s, a, IdentityScale::NMinusOneFactorial));
            cyclic[i].update(comp.cyclic[i]);
            anti[i].update(comp.anticommutation[i]);
            fitted.update(std::abs(fitted_identity_constant(s, a) - constant) / constant);
        }
    });
    for (Axis a : kAxes) {
        const std::size_t i = axis_index(a);
        rep.add(tag("lefschetz.key_identity", k, a), anchor::kKeyIdentity, key[i].value,
                c.tolerances.identity);
        rep.add(tag("lefschetz.cyclic_quotient", k, a), anchor::kComposite, cyclic[i].value,
                c.tolerances.identity);
        rep.add(tag("lefschetz.anticommutation", k, a), anchor::kComposite, anti[i].value,
                c.tolerances.identity);
    }
    rep.set_detail(tag("lefschetz.identity_constant", k),
                   Json{{"expected", constant},
                        {"n_factorial", factorial(2 * k)},
                        {"max_relative_fit_error", fitted.value}});
}

void reconstruct_roundtrip(const SuiteConfig& c, int k, Report& rep) {
    Worst metric, structures, validation;
    bool verdicts = true;
    bool flipped = true;
    for_trials(c, k, [&](std::uint64_t seed) {
        const HyperKahlerSpace s = random_space(k, seed);
        SymplecticTriple t = SymplecticTriple::from(kahler_forms(s));
        const ReconstructionResult r = reconstruct(t, c.tolerances.validation);
        verdicts = verdicts && r.verdict == Verdict::HyperKahler;
        if (r.g.size() == 0) {
            metric.update(std::numeric_limits<double>::infinity());
            return;
        }
        validation.update(std::max({r.validation.relation_residuals[0],
                                    r.validation.relation_residuals[1],
                                    r.validation.relation_residuals[2]}));
        metric.update(relative(r.g - s.gram(), s.gram()));
        if (r.structures[0].size() > 0) {
            for (Axis a : kAxes) {
                structures.update(relative(r.structures[axis_index(a)] - s.structure(a),
                                           s.structure(a)));
            }
        }
        t.forms[axis_index(Axis::K)] *= -1.0;
        const ReconstructionResult neg = reconstruct(t, c.tolerances.validation);
        flipped = flipped && neg.verdict == Verdict::PseudoHyperKahler &&
                  neg.signature == Signature{0, 4 * k, 0};
    });
    rep.add(tag("reconstruct.triple_relations", k), anchor::kTripleRelations, validation.value,
            c.tolerances.validation);
    rep.add(tag("reconstruct.metric", k), anchor::kReconstruction, metric.value,
            c.tolerances.symmetry);
    rep.add(tag("reconstruct.structures", k), anchor::kReconstruction, structures.value,
            c.tolerances.symmetry);
    rep.add_flag(tag("reconstruct.verdict_hyperkahler", k), anchor::kDefinite, verdicts);
    rep.add_flag(tag("reconstruct.flipped_k_signature", k), anchor::kDefinite, flipped);
}

void torus_theorem(const SuiteConfig& c, int k, Report& rep) {
    Worst l2, quat;
    bool verdicts = true;
    bool generic = true;
    HolonomyTuple first;
    for_trials(c, k, [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> angle(0.2, std::numbers::pi - 0.2);
        std::vector<double> theta(static_cast<std::size_t>(4 * k));
        for (double& t : theta) t = angle(rng);
        const HolonomyTuple tuple = su2_holonomy_from_angles(theta);
        if (first.generators.empty()) first = tuple;
        const TangentModel model = tangent_model(tuple, k, 1.0);
        const ModuliReport m = moduli_hyperkahler_check(model, c.tolerances.symmetry);
        l2.update(m.l2_residual);
        quat.update(m.reconstruction.quaternionic_residuals.max());
        verdicts = verdicts && m.reconstruction.verdict == Verdict::HyperKahler;
        generic = generic && m.generic;
    });
    rep.add(tag("torus.l2_metric", k), anchor::kL2Metric, l2.value, c.tolerances.symmetry);
    rep.add(tag("torus.quaternionic", k), anchor::kModuli, quat.value, c.tolerances.validation);
    rep.add_flag(tag("torus.verdict_hyperkahler", k), anchor::kModuli, verdicts);
    rep.add_flag(tag("torus.generic_stratum", k), anchor::kTangent, generic);
    if (k == 1 && c.oracle_grid > 0 && !first.generators.empty()) {
        const OracleResult o = lattice_harmonic_oracle(first, 1, c.oracle_grid, c.seed);
        const int r = invariant_subalgebra(first).dim();
        rep.add_exact(tag("torus.lattice_kernel", k), anchor::kHodgeIso,
                      std::abs(o.kernel_dim - 4 * r));
        rep.set_detail("torus.lattice_oracle", oracle_to_json(o));
    }
}

using SuiteFn = void (*)(const SuiteConfig&, int, Report&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table{
        {"exterior-laws", exterior_laws},
        {"quaternionic", quaternionic},
        {"lefschetz-identities", lefschetz_identities},
        {"reconstruct-roundtrip", reconstruct_roundtrip},
        {"torus-theorem", torus_theorem}};
    return table;
}

}  // namespace

Json SuiteConfig::to_json() const {
    return Json{{"suite", suite},
                {"k", ks},
                {"seed", seed},
                {"trials", trials},
                {"oracle_grid", oracle_grid},
                {"tolerances",
                 Json{{"validation", tolerances.validation},
                      {"symmetry", tolerances.symmetry},
                      {"identity", tolerances.identity}}}};
}

void validate_config(const SuiteConfig& config) {
    if (std::find(kSuiteNames.begin(), kSuiteNames.end(), config.suite) == kSuiteNames.end()) {
        std::string names;
        for (const auto& n : kSuiteNames) names += (names.empty() ? "" : ", ") + n;
        throw Error("unknown suite '" + config.suite + "' (expected one of: " + names + ")");
    }
    if (config.ks.empty()) throw Error("no k values given");
    for (int k : config.ks) {
        if (k < 1 || k > 3) throw Error("k must lie in [1, 3], got " + std::to_string(k));
    }
    if (config.trials < 1) throw Error("trials must be positive");
    if (config.oracle_grid != 0 &&
        (config.oracle_grid < kOracleMinGrid || config.oracle_grid > kOracleMaxGrid)) {
        throw Error("oracle grid must be 0 or lie in [4, 10]");
    }
}

Report run_suite(const SuiteConfig& config) {
    validate_config(config);
    Report rep("verify", config.to_json());
    for (const auto& [name, fn] : suite_table()) {
        if (config.suite != "all" && config.suite != name) continue;
        for (int k : config.ks) fn(config, k, rep);
    }
    return rep;
}

}  // namespace hk::cli
