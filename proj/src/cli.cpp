#include "glmpss/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "glmpss/csv.hpp"
#include "glmpss/glm_fit.hpp"
#include "glmpss/power.hpp"
#include "glmpss/scenario.hpp"
#include "glmpss/sensitivity.hpp"

namespace glmpss {

namespace {

constexpr const char* kVersion = "1.0.0";

// Expands "--config FILE" into --key=value tokens for every key=value line
// of FILE that is not already given on the command line, so explicit flags
// win. Keys mirror the long option names without the leading dashes; a bare
// key line sets a flag.
std::vector<std::string> expand_config_args(
    const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::set<std::string> given;
    for (const auto& a : args) {
        if (a.rfind("--", 0) == 0 && a.size() > 2) {
            given.insert(a.substr(2, a.find('=') - 2));
        }
    }
    auto trim = [](const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        std::size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::vector<std::string> out = args;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') {
            continue;
        }
        std::string key, value;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            key = t;
            value = "true";
        } else {
            key = trim(t.substr(0, eq));
            value = trim(t.substr(eq + 1));
        }
        if (key.rfind("--", 0) == 0) {
            key = key.substr(2);
        }
        if (key.empty()) {
            throw ConfigError("config file '" + path + "': malformed line " +
                              std::to_string(line_no));
        }
        if (given.count(key)) {
            continue;
        }
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        std::size_t b = item.find_first_not_of(" \t");
        std::size_t e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& item : split_names(s)) {
        double v = 0;
        const char* first = item.data();
        const char* last = first + item.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            throw ConfigError(std::string("cannot parse '") + item + "' in " +
                              what);
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError(std::string(what) + " has no values");
    }
    return out;
}

struct MetaWriter {
    std::ostringstream out;
    explicit MetaWriter(const std::string& command) {
        out << "# glmpss " << kVersion << "\n# command: " << command << "\n";
    }
    void add(const std::string& key, const std::string& value) {
        out << "# " << key << ": " << value << "\n";
    }
    void add(const std::string& key, double value) {
        add(key, format_full(value));
    }
};

void print_kv(const std::string& key, double v) {
    std::cout << key << " " << format_human(v) << "\n";
}

void print_kv_opt(const std::string& key, const std::optional<double>& v) {
    std::cout << key << " " << (v ? format_human(*v) : std::string(kNaToken))
              << "\n";
}

// Scenario flags shared by effectsize --scenario, relerror-sweep and
// (implicitly, through ranges) sensitivity.
struct ScenarioFlags {
    std::string family, link;
    double aux = 1.0;
    double a_x = 1, b_x = 1, a_z = 1, b_z = 1;
    double s_x = 0, s_z = 0;
    double rho = 0;
    double ref_mean = 0;
    int n_mc = 50000;
    std::uint64_t seed = 0;
    bool w1_at_ref_mean = false;

    void attach(CLI::App* cmd, bool scenario_required) {
        cmd->add_option("--family", family, "Response family")
            ->required(scenario_required);
        cmd->add_option("--link", link, "Link function")
            ->required(scenario_required);
        cmd->add_option("--aux", aux,
                        "sigma^2 (normal) or shape k (gamma, inverse-gaussian)");
        cmd->add_option("--a-x", a_x, "Predictor Beta shape a");
        cmd->add_option("--b-x", b_x, "Predictor Beta shape b");
        cmd->add_option("--a-z", a_z, "Adjustor Beta shape a");
        cmd->add_option("--b-z", b_z, "Adjustor Beta shape b");
        cmd->add_option("--s-x", s_x, "Predictor eta contribution sd");
        cmd->add_option("--s-z", s_z, "Adjustor eta contribution sd");
        cmd->add_option("--rho", rho, "Copula correlation");
        cmd->add_option("--ref-mean", ref_mean, "Reference response mean");
        cmd->add_option("--n-mc", n_mc, "Monte Carlo draws per scenario");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_flag("--w1-at-ref-mean", w1_at_ref_mean,
                      "Evaluate w1 at g(ref-mean) instead of g(E[mu])");
    }

    ScenarioConfig to_config() const {
        ScenarioConfig cfg;
        cfg.fl = FamilyLink::parse(family, link, aux);
        cfg.a_x = a_x;
        cfg.b_x = b_x;
        cfg.a_z = a_z;
        cfg.b_z = b_z;
        cfg.s_x = s_x;
        cfg.s_z = s_z;
        cfg.rho = rho;
        cfg.ref_mean = ref_mean;
        cfg.n_mc = n_mc;
        cfg.seed = seed;
        cfg.w1_at_ref_mean = w1_at_ref_mean;
        return cfg;
    }

    void echo(MetaWriter& meta) const {
        meta.add("family", family);
        meta.add("link", link);
        meta.add("aux", aux);
        meta.add("a_x", a_x);
        meta.add("b_x", b_x);
        meta.add("a_z", a_z);
        meta.add("b_z", b_z);
        meta.add("s_x", s_x);
        meta.add("s_x_var", s_x * s_x);
        meta.add("s_z", s_z);
        meta.add("s_z_var", s_z * s_z);
        meta.add("rho", rho);
        meta.add("ref_mean", ref_mean);
        meta.add("n_mc", static_cast<double>(n_mc));
        meta.add("seed", std::to_string(seed));
        meta.add("w1_convention",
                 w1_at_ref_mean ? "at-ref-mean" : "at-mean-response");
    }
};

// Design CSV flags shared by effectsize and verify.
struct DesignFlags {
    std::string path, z_cols, x_cols, y_col, coef;
    std::string family, link;
    double aux = 1.0;
    bool aux_given = false;

    void attach(CLI::App* cmd, bool required_design) {
        cmd->add_option("--design", path, "Design CSV file")
            ->required(required_design);
        cmd->add_option("--z-cols", z_cols,
                        "Comma-separated adjustor columns (intercept implicit)");
        cmd->add_option("--x-cols", x_cols,
                        "Comma-separated predictor columns")
            ->required(required_design);
        cmd->add_option("--y-col", y_col, "Response column (fit coefficients)");
        cmd->add_option("--coef", coef,
                        "Coefficients: intercept, adjustors, then predictors");
        cmd->add_option("--family", family, "Response family")
            ->required(required_design);
        cmd->add_option("--link", link, "Link function")
            ->required(required_design);
        auto* aux_opt = cmd->add_option(
            "--aux", aux,
            "sigma^2 (normal) or shape k (gamma, inverse-gaussian); Pearson "
            "estimate when fitting without it");
        cmd->parse_complete_callback(
            [this, aux_opt]() { aux_given = aux_opt->count() > 0; });
    }

    DesignCsvSpec to_spec() const {
        DesignCsvSpec spec;
        spec.path = path;
        spec.z_cols = split_names(z_cols);
        spec.x_cols = split_names(x_cols);
        spec.y_col = y_col;
        if (!coef.empty()) {
            auto values = parse_numbers(coef, "--coef");
            spec.coefficients =
                Eigen::Map<Eigen::VectorXd>(values.data(),
                                            static_cast<long>(values.size()));
        }
        spec.fl = FamilyLink::parse(family, link, aux);
        bool dispersion_family = spec.fl.family() == Family::Normal ||
                                 spec.fl.family() == Family::Gamma ||
                                 spec.fl.family() == Family::InverseGaussian;
        spec.estimate_aux = dispersion_family && !aux_given && !y_col.empty();
        if (dispersion_family && !aux_given && y_col.empty()) {
            throw ConfigError(
                "--aux is required for " + spec.fl.family_name() +
                " when coefficients are given (nothing to estimate it from)");
        }
        return spec;
    }
};

void print_effects(const EffectSummary& e) {
    print_kv("phi", e.phi);
    print_kv("pseudo_r2", e.pseudo_r2);
    print_kv("f2", e.f2);
    print_kv("f2_phi", e.f2_phi);
    print_kv("f2_r", e.f2_r);
    print_kv_opt("re_phi", e.re_phi);
    print_kv_opt("re_r", e.re_r);
    print_kv("mean_y", e.mean_y);
    print_kv("w1", e.w1);
}

std::string effects_csv_fields(const EffectSummary& e) {
    auto opt = [](const std::optional<double>& v) {
        return v ? format_full(*v) : std::string(kNaToken);
    };
    return format_full(e.phi) + "," + format_full(e.pseudo_r2) + "," +
           format_full(e.f2) + "," + format_full(e.f2_phi) + "," +
           format_full(e.f2_r) + "," + opt(e.re_phi) + "," + opt(e.re_r) +
           "," + format_full(e.mean_y) + "," + format_full(e.w1);
}

}  // namespace

EmpiricalDesign load_design_csv(const DesignCsvSpec& spec) {
    RawTable table = read_csv(spec.path);
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    if (n < 1) {
        throw IngestError("'" + spec.path + "' has no data rows");
    }
    if (spec.x_cols.empty()) {
        throw ConfigError("at least one predictor column is required");
    }
    EmpiricalDesign design;
    design.z.resize(n, 1 + static_cast<Eigen::Index>(spec.z_cols.size()));
    design.z.col(0).setOnes();
    for (std::size_t j = 0; j < spec.z_cols.size(); ++j) {
        auto col = numeric_column(table, spec.z_cols[j]);
        design.z.col(1 + static_cast<Eigen::Index>(j)) =
            Eigen::Map<Eigen::VectorXd>(col.data(), n);
    }
    design.x.resize(n, static_cast<Eigen::Index>(spec.x_cols.size()));
    for (std::size_t j = 0; j < spec.x_cols.size(); ++j) {
        auto col = numeric_column(table, spec.x_cols[j]);
        design.x.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<Eigen::VectorXd>(col.data(), n);
    }
    const Eigen::Index d = design.z.cols() + design.x.cols();

    if (spec.coefficients) {
        if (!spec.y_col.empty()) {
            throw ConfigError(
                "give either --coef or --y-col, not both (ambiguous)");
        }
        if (spec.coefficients->size() != d) {
            throw ConfigError("--coef has " +
                              std::to_string(spec.coefficients->size()) +
                              " values, expected " + std::to_string(d) +
                              " (intercept + adjustors + predictors)");
        }
        design.fl = spec.fl;
        design.lambda = spec.coefficients->head(design.z.cols());
        design.beta = spec.coefficients->tail(design.x.cols());
    } else {
        if (spec.y_col.empty()) {
            throw ConfigError("need --coef or --y-col to define the effect");
        }
        auto yv = numeric_column(table, spec.y_col);
        Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(yv.data(), n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!spec.fl.y_in_support(y[i])) {
                throw IngestError(
                    "response " + format_full(y[i]) + " at row " +
                    std::to_string(i + 1) + ", column '" + spec.y_col +
                    "' outside the support of " + spec.fl.family_name());
            }
        }
        Eigen::MatrixXd full(n, d);
        full << design.z, design.x;
        FamilyLink fit_fl(spec.fl.family(), spec.fl.link(), 1.0);
        FitResult fit = irls_fit(full, y, fit_fl);
        if (!fit.converged) {
            throw ConvergenceError("IRLS did not converge in " +
                                   std::to_string(fit.iterations) +
                                   " iterations");
        }
        design.lambda = fit.coefficients.head(design.z.cols());
        design.beta = fit.coefficients.tail(design.x.cols());
        double aux = spec.fl.aux();
        if (spec.estimate_aux) {
            double disp = pearson_dispersion(full, y, fit_fl,
                                             fit.coefficients);
            aux = spec.fl.family() == Family::Normal ? disp : 1.0 / disp;
        }
        design.fl = FamilyLink(spec.fl.family(), spec.fl.link(), aux);
    }
    try {
        design.validate();
    } catch (const NumericError& e) {
        throw IngestError(e.what());
    }
    return design;
}

EffectSummary compute_empirical_effects(const EmpiricalDesign& design) {
    return effect_sizes_from_draws(design.draws());
}

namespace {

void cmd_power(long n, double f2, int df, double alpha,
               const std::string& out_path) {
    double value = pss::power(n, f2, df, alpha);
    print_kv("power", value);
    if (!out_path.empty()) {
        MetaWriter meta("power");
        meta.add("n", static_cast<double>(n));
        meta.add("f2", f2);
        meta.add("df", static_cast<double>(df));
        meta.add("alpha", alpha);
        std::string body = "n,f2,df,alpha,power\n" + std::to_string(n) + "," +
                           format_full(f2) + "," + std::to_string(df) + "," +
                           format_full(alpha) + "," + format_full(value) +
                           "\n";
        write_text_atomic(out_path, meta.out.str() + body);
    }
}

struct SampleSizeArgs {
    double target = 0.8;
    double f2 = -1, phi = -1, r2 = -1, mean_y = -1;
    std::string family, link;
    double aux = 1.0;
    int df = 1;
    double alpha = 0.05;
    std::string out_path;
};

void cmd_samplesize(const SampleSizeArgs& a) {
    int given = (a.f2 >= 0 ? 1 : 0) + (a.phi >= 0 ? 1 : 0) +
                (a.r2 >= 0 ? 1 : 0);
    if (given != 1) {
        throw ConfigError(
            "exactly one of --f2, --phi (with --mean-y, --family, --link) or "
            "--r2 must be given");
    }
    std::optional<double> w1;
    double f2;
    if (a.f2 >= 0) {
        f2 = a.f2;
    } else if (a.phi >= 0) {
        if (a.family.empty() || a.link.empty() || a.mean_y < 0) {
            throw ConfigError(
                "--phi needs --mean-y, --family and --link to locate w1");
        }
        FamilyLink fl = FamilyLink::parse(a.family, a.link, a.aux);
        w1 = fl.eval(fl.link_value(a.mean_y)).w;
        f2 = f2_phi_approx(a.phi, *w1);
    } else {
        f2 = f2_r_approx(a.r2);
    }
    double nu = pss::noncentrality_for_power(a.target, a.df, a.alpha);
    long n = pss::sample_size(a.target, f2, a.df, a.alpha);
    double attained = pss::power(n, f2, a.df, a.alpha);
    if (w1) {
        print_kv("w1", *w1);
    }
    print_kv("f2", f2);
    print_kv("nu_star", nu);
    std::cout << "n " << n << "\n";
    print_kv("power_at_n", attained);
    if (!a.out_path.empty()) {
        MetaWriter meta("samplesize");
        meta.add("target_power", a.target);
        meta.add("df", static_cast<double>(a.df));
        meta.add("alpha", a.alpha);
        if (w1) meta.add("w1", *w1);
        std::string body = "target_power,f2,df,alpha,nu_star,n,power_at_n\n" +
                           format_full(a.target) + "," + format_full(f2) +
                           "," + std::to_string(a.df) + "," +
                           format_full(a.alpha) + "," + format_full(nu) + "," +
                           std::to_string(n) + "," + format_full(attained) +
                           "\n";
        write_text_atomic(a.out_path, meta.out.str() + body);
    }
}

void cmd_effectsize_scenario(const ScenarioFlags& flags,
                             const std::string& out_path) {
    ScenarioConfig cfg = flags.to_config();
    ScenarioResult result = run_scenario(cfg);
    print_effects(result.effects);
    print_kv("moment_condition", result.moment_condition);
    if (!out_path.empty()) {
        MetaWriter meta("effectsize");
        flags.echo(meta);
        meta.add("stream_id", std::to_string(result.stream_id));
        std::ostringstream body;
        write_scenario_csv_header(body);
        ScenarioRow row;
        row.config = cfg;
        row.effects = result.effects;
        write_scenario_csv_row(body, row);
        write_text_atomic(out_path, meta.out.str() + body.str());
    }
}

void cmd_effectsize_design(const DesignFlags& flags,
                           const std::string& out_path) {
    DesignCsvSpec spec = flags.to_spec();
    EmpiricalDesign design = load_design_csv(spec);
    EffectSummary effects = compute_empirical_effects(design);
    bool fitted = !spec.coefficients.has_value();
    if (fitted) {
        for (Eigen::Index i = 0; i < design.lambda.size(); ++i) {
            print_kv("lambda_" + std::to_string(i), design.lambda[i]);
        }
        for (Eigen::Index i = 0; i < design.beta.size(); ++i) {
            print_kv("beta_" + std::to_string(i), design.beta[i]);
        }
        print_kv("aux", design.fl.aux());
    }
    print_effects(effects);
    if (!out_path.empty()) {
        MetaWriter meta("effectsize");
        meta.add("design", spec.path);
        meta.add("family", design.fl.family_name());
        meta.add("link", design.fl.link_name());
        meta.add("aux", design.fl.aux());
        meta.add("rows", static_cast<double>(design.z.rows()));
        if (fitted) {
            meta.add("information", "expected-at-fitted-coefficients");
            std::string coefs;
            for (Eigen::Index i = 0; i < design.lambda.size(); ++i) {
                coefs += (coefs.empty() ? "" : ",") +
                         format_full(design.lambda[i]);
            }
            for (Eigen::Index i = 0; i < design.beta.size(); ++i) {
                coefs += "," + format_full(design.beta[i]);
            }
            meta.add("coefficients", coefs);
        }
        std::string body =
            "phi,pseudo_r2,f2,f2_phi,f2_r,re_phi,re_r,mean_y,w1\n" +
            effects_csv_fields(effects) + "\n";
        write_text_atomic(out_path, meta.out.str() + body);
    }
}

void cmd_relerror_sweep(const ScenarioFlags& flags,
                        const std::vector<std::string>& axis_specs,
                        const std::string& out_path) {
    ScenarioConfig base = flags.to_config();
    std::vector<SweepAxis> axes;
    axes.reserve(axis_specs.size());
    for (const auto& spec : axis_specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--axis expects name=v1,v2,... got '" + spec +
                              "'");
        }
        SweepAxis axis;
        axis.name = spec.substr(0, eq);
        axis.values = parse_numbers(spec.substr(eq + 1), "--axis values");
        axes.push_back(std::move(axis));
    }
    MetaWriter meta("relerror-sweep");
    flags.echo(meta);
    for (const auto& axis : axes) {
        std::string values;
        for (double v : axis.values) {
            values += (values.empty() ? "" : ",") + format_full(v);
        }
        meta.add("axis " + axis.name, values);
    }
    std::ostringstream body;
    long rows = sweep_grid(base, axes, body);
    write_text_atomic(out_path, meta.out.str() + body.str());
    std::cout << "rows " << rows << "\n";
    std::cout << "out " << out_path << "\n";
}

void summary_csv_row(std::ostringstream& out, const std::string& name,
                     const MeasureSummary& s) {
    out << name << ',' << s.n_used << ',' << s.n_dropped << ','
        << (s.zero_marker ? 1 : 0);
    if (s.zero_marker) {
        for (int i = 0; i < 6; ++i) {
            out << ',' << kNaToken;
        }
    } else {
        out << ',' << format_full(s.mean) << ',' << format_full(s.min) << ','
            << format_full(s.q1) << ',' << format_full(s.median) << ','
            << format_full(s.q3) << ',' << format_full(s.max);
    }
    out << '\n';
}

void print_summary(const std::string& name, const MeasureSummary& s) {
    std::cout << name << "_zero_marker " << (s.zero_marker ? 1 : 0) << "\n";
    std::cout << name << "_n_used " << s.n_used << "\n";
    std::cout << name << "_n_dropped " << s.n_dropped << "\n";
    if (!s.zero_marker) {
        print_kv(name + "_mean", s.mean);
        print_kv(name + "_min", s.min);
        print_kv(name + "_q1", s.q1);
        print_kv(name + "_median", s.median);
        print_kv(name + "_q3", s.q3);
        print_kv(name + "_max", s.max);
    }
}

struct SensitivityArgs {
    std::string family, link;
    double aux = 1.0;
    int draws = 1000;
    int n_mc = 50000;
    std::uint64_t seed = 0;
    std::string out_path, summary_path, prcc_path;
};

void cmd_sensitivity(const SensitivityArgs& a) {
    FamilyLink fl = FamilyLink::parse(a.family, a.link, a.aux);
    SensitivityResult result = run_sensitivity(fl, a.draws, a.n_mc, a.seed);

    MetaWriter meta("sensitivity");
    meta.add("family", fl.family_name());
    meta.add("link", fl.link_name());
    meta.add("aux", fl.aux());
    meta.add("draws", static_cast<double>(a.draws));
    meta.add("n_mc", static_cast<double>(a.n_mc));
    meta.add("seed", std::to_string(a.seed));
    for (const auto& r : result.ranges) {
        meta.add("range " + r.name,
                 format_full(r.lo) + ".." + format_full(r.hi));
    }

    if (!a.out_path.empty()) {
        std::ostringstream body;
        write_scenario_csv_header(body);
        for (const auto& row : result.rows) {
            write_scenario_csv_row(body, row);
        }
        write_text_atomic(a.out_path, meta.out.str() + body.str());
    }
    if (!a.summary_path.empty()) {
        std::ostringstream body;
        body << "measure,n_used,n_dropped,zero_marker,mean,min,q1,median,q3,"
                "max\n";
        summary_csv_row(body, "re_phi_pct", result.phi_summary);
        summary_csv_row(body, "re_r_pct", result.r_summary);
        write_text_atomic(a.summary_path, meta.out.str() + body.str());
    }
    if (!a.prcc_path.empty()) {
        std::ostringstream body;
        body << "measure";
        for (const auto& r : result.ranges) {
            body << ',' << r.name;
        }
        body << '\n';
        auto row = [&](const std::string& name,
                       const std::optional<Eigen::VectorXd>& v) {
            body << name;
            for (Eigen::Index i = 0;
                 i < static_cast<Eigen::Index>(result.ranges.size()); ++i) {
                body << ',' << (v ? format_full((*v)[i])
                                  : std::string(kNaToken));
            }
            body << '\n';
        };
        row("re_phi_pct", result.prcc_phi);
        row("re_r_pct", result.prcc_r);
        write_text_atomic(a.prcc_path, meta.out.str() + body.str());
    }

    std::cout << "failed_scenarios " << result.failed_scenarios << "\n";
    print_summary("re_phi", result.phi_summary);
    print_summary("re_r", result.r_summary);
    auto print_prcc = [&](const std::string& name,
                          const std::optional<Eigen::VectorXd>& v) {
        if (!v) return;
        for (Eigen::Index i = 0;
             i < static_cast<Eigen::Index>(result.ranges.size()); ++i) {
            print_kv(name + "_prcc_" + result.ranges[i].name, (*v)[i]);
        }
    };
    print_prcc("re_phi", result.prcc_phi);
    print_prcc("re_r", result.prcc_r);
}

struct VerifyArgs {
    DesignFlags design;
    double target_f2 = -1;
    double target_power = -1;
    long n = -1;
    int reps = 2000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::string out_path;
};

void cmd_verify(const VerifyArgs& a) {
    if ((a.target_power > 0) == (a.n > 0)) {
        throw ConfigError("give exactly one of --power or --n");
    }
    if (a.reps < 1) {
        throw ConfigError("--reps must be >= 1");
    }
    EmpiricalDesign design = load_design_csv(a.design.to_spec());
    double delta = 1.0;
    if (a.target_f2 > 0) {
        delta = rescale_beta_to_f2(design, a.target_f2);
        design.beta *= delta;
    }
    EffectSummary effects = compute_empirical_effects(design);
    const auto p = static_cast<int>(design.x.cols());
    long n = a.n;
    if (n < 0) {
        n = pss::sample_size(a.target_power, effects.f2, p, a.alpha);
    }
    double asym = pss::power(n, effects.f2, p, a.alpha);
    PowerSim sim = simulate_power(design, static_cast<int>(n), a.reps, a.alpha,
                                  a.seed);
    print_kv("delta", delta);
    print_kv("f2", effects.f2);
    std::cout << "n " << n << "\n";
    print_kv("asymptotic_power", asym);
    print_kv("rejection_rate", sim.rejection_rate);
    print_kv("mc_stderr", sim.mc_stderr);
    std::cout << "fit_failures " << sim.fit_failures << "\n";
    std::cout << "replicates " << sim.replicates << "\n";
    if (!a.out_path.empty()) {
        MetaWriter meta("verify");
        meta.add("design", a.design.path);
        meta.add("family", design.fl.family_name());
        meta.add("link", design.fl.link_name());
        meta.add("aux", design.fl.aux());
        meta.add("alpha", a.alpha);
        meta.add("seed", std::to_string(a.seed));
        std::string body =
            "delta,f2,n,asymptotic_power,rejection_rate,mc_stderr,"
            "fit_failures,replicates\n" +
            format_full(delta) + "," + format_full(effects.f2) + "," +
            std::to_string(n) + "," + format_full(asym) + "," +
            format_full(sim.rejection_rate) + "," +
            format_full(sim.mc_stderr) + "," +
            std::to_string(sim.fit_failures) + "," +
            std::to_string(sim.replicates) + "\n";
        write_text_atomic(a.out_path, meta.out.str() + body);
    }
}

void cmd_table1(const std::string& targets_str, const std::string& res_str,
                int df, double alpha, const std::string& out_path) {
    auto targets = parse_numbers(targets_str, "--targets");
    auto res = parse_numbers(res_str, "--rel-errors");
    auto table = pss::power_error_table(targets, res, df, alpha);
    std::ostringstream body;
    body << "target_power";
    for (double re : res) {
        body << ",re_" << format_full(re);
    }
    body << '\n';
    for (std::size_t i = 0; i < targets.size(); ++i) {
        body << format_full(targets[i]);
        for (double v : table[i]) {
            body << ',' << format_full(v);
        }
        body << '\n';
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        MetaWriter meta("table1");
        meta.add("df", static_cast<double>(df));
        meta.add("alpha", alpha);
        write_text_atomic(out_path, meta.out.str() + body.str());
        std::cout << "out " << out_path << "\n";
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Power and sample size for Wald tests in generalized linear "
                 "models"};
    app.require_subcommand(1);

    // One sink serves every subcommand; the file is expanded into the
    // argument list before parsing (see expand_config_args).
    std::string config_path;
    auto add_config = [&config_path](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "Key=value parameter file; explicit flags win");
    };

    // power
    auto* power_cmd =
        app.add_subcommand("power", "Asymptotic power at a sample size");
    long power_n = 0;
    double power_f2 = 0, power_alpha = 0.05;
    int power_df = 1;
    std::string power_out;
    power_cmd->add_option("--n", power_n, "Sample size")->required();
    power_cmd->add_option("--f2", power_f2, "Noncentrality rate f2")
        ->required();
    power_cmd->add_option("--df", power_df, "Numerator degrees of freedom");
    power_cmd->add_option("--alpha", power_alpha, "Test size");
    power_cmd->add_option("--out", power_out, "CSV output path");
    add_config(power_cmd);

    // samplesize
    auto* ss_cmd = app.add_subcommand(
        "samplesize", "Smallest n attaining a target power");
    SampleSizeArgs ss;
    ss_cmd->add_option("--power", ss.target, "Target power")->required();
    ss_cmd->add_option("--f2", ss.f2, "Noncentrality rate f2");
    ss_cmd->add_option("--phi", ss.phi, "Linear-predictor effect size phi");
    ss_cmd->add_option("--r2", ss.r2, "Partial pseudo-R2");
    ss_cmd->add_option("--mean-y", ss.mean_y, "Mean response (locates w1)");
    ss_cmd->add_option("--family", ss.family, "Response family");
    ss_cmd->add_option("--link", ss.link, "Link function");
    ss_cmd->add_option("--aux", ss.aux, "Dispersion parameter");
    ss_cmd->add_option("--df", ss.df, "Numerator degrees of freedom");
    ss_cmd->add_option("--alpha", ss.alpha, "Test size");
    ss_cmd->add_option("--out", ss.out_path, "CSV output path");
    add_config(ss_cmd);

    // effectsize
    auto* es_cmd = app.add_subcommand(
        "effectsize", "Effect sizes from a design CSV or a scenario");
    bool es_scenario = false;
    es_cmd->add_flag("--scenario", es_scenario,
                     "Monte Carlo scenario instead of a design CSV");
    ScenarioFlags es_scn;
    DesignFlags es_design;
    std::string es_out;
    // Shared names (--family/--link/--aux) are attached once.
    es_scn.attach(es_cmd, false);
    es_cmd->add_option("--design", es_design.path, "Design CSV file");
    es_cmd->add_option("--z-cols", es_design.z_cols,
                       "Comma-separated adjustor columns");
    es_cmd->add_option("--x-cols", es_design.x_cols,
                       "Comma-separated predictor columns");
    es_cmd->add_option("--y-col", es_design.y_col, "Response column");
    es_cmd->add_option("--coef", es_design.coef,
                       "Coefficients: intercept, adjustors, then predictors");
    es_cmd->add_option("--out", es_out, "CSV output path");
    add_config(es_cmd);

    // relerror-sweep
    auto* sweep_cmd = app.add_subcommand(
        "relerror-sweep", "Approximation error over a scenario grid");
    ScenarioFlags sweep_scn;
    sweep_scn.attach(sweep_cmd, true);
    std::vector<std::string> sweep_axes;
    std::string sweep_out;
    sweep_cmd->add_option("--axis", sweep_axes,
                          "Sweep axis name=v1,v2,... (repeatable)")
        ->required();
    sweep_cmd->add_option("--out", sweep_out, "CSV output path")->required();
    add_config(sweep_cmd);

    // sensitivity
    auto* sens_cmd = app.add_subcommand(
        "sensitivity", "Latin hypercube sweep with PRCC attribution");
    SensitivityArgs sens;
    sens_cmd->add_option("--family", sens.family, "Response family")
        ->required();
    sens_cmd->add_option("--link", sens.link, "Link function")->required();
    sens_cmd->add_option("--aux", sens.aux, "Dispersion parameter");
    sens_cmd->add_option("--draws", sens.draws, "Latin hypercube draws");
    sens_cmd->add_option("--n-mc", sens.n_mc, "Monte Carlo draws per scenario");
    sens_cmd->add_option("--seed", sens.seed, "RNG seed");
    sens_cmd->add_option("--out", sens.out_path, "Per-draw CSV output path");
    sens_cmd->add_option("--summary-out", sens.summary_path,
                         "Summary CSV output path");
    sens_cmd->add_option("--prcc-out", sens.prcc_path, "PRCC CSV output path");
    add_config(sens_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "Finite-sample rejection rate against asymptotic power");
    VerifyArgs verify;
    verify.design.attach(verify_cmd, true);
    verify_cmd->add_option("--target-f2", verify.target_f2,
                           "Rescale beta to this f2 first");
    verify_cmd->add_option("--power", verify.target_power,
                           "Size n for this target power");
    verify_cmd->add_option("--n", verify.n, "Replicate sample size");
    verify_cmd->add_option("--reps", verify.reps, "Monte Carlo replicates");
    verify_cmd->add_option("--alpha", verify.alpha, "Test size");
    verify_cmd->add_option("--seed", verify.seed, "RNG seed");
    verify_cmd->add_option("--out", verify.out_path, "CSV output path");
    add_config(verify_cmd);

    // table1
    auto* t1_cmd = app.add_subcommand(
        "table1", "Power error from relative noncentrality errors");
    std::string t1_targets = "0.60,0.64,0.68,0.72,0.76,0.80,0.84,0.88";
    std::string t1_res = "-0.15,-0.10,-0.05,0.05,0.10,0.15";
    int t1_df = 1;
    double t1_alpha = 0.05;
    std::string t1_out;
    t1_cmd->add_option("--targets", t1_targets, "Target powers");
    t1_cmd->add_option("--rel-errors", t1_res, "Relative noncentrality errors");
    t1_cmd->add_option("--df", t1_df, "Numerator degrees of freedom");
    t1_cmd->add_option("--alpha", t1_alpha, "Test size");
    t1_cmd->add_option("--out", t1_out, "CSV output path");
    add_config(t1_cmd);

    try {
        std::vector<std::string> expanded = expand_config_args(args);
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);

        if (app.got_subcommand(power_cmd)) {
            cmd_power(power_n, power_f2, power_df, power_alpha, power_out);
        } else if (app.got_subcommand(ss_cmd)) {
            cmd_samplesize(ss);
        } else if (app.got_subcommand(es_cmd)) {
            if (es_scn.family.empty() || es_scn.link.empty()) {
                throw ConfigError("effectsize needs --family and --link");
            }
            if (es_scenario) {
                cmd_effectsize_scenario(es_scn, es_out);
            } else {
                if (es_design.path.empty()) {
                    throw ConfigError(
                        "effectsize needs --design or --scenario");
                }
                es_design.family = es_scn.family;
                es_design.link = es_scn.link;
                es_design.aux = es_scn.aux;
                es_design.aux_given =
                    es_cmd->get_option("--aux")->count() > 0;
                cmd_effectsize_design(es_design, es_out);
            }
        } else if (app.got_subcommand(sweep_cmd)) {
            cmd_relerror_sweep(sweep_scn, sweep_axes, sweep_out);
        } else if (app.got_subcommand(sens_cmd)) {
            cmd_sensitivity(sens);
        } else if (app.got_subcommand(verify_cmd)) {
            cmd_verify(verify);
        } else if (app.got_subcommand(t1_cmd)) {
            cmd_table1(t1_targets, t1_res, t1_df, t1_alpha, t1_out);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const IngestError& e) {
        std::cerr << "ingestion error: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 5;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace glmpss
