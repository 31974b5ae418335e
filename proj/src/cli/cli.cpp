#include "phs/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "phs/diagnostics.hpp"
#include "phs/domains.hpp"
#include "phs/errors.hpp"
#include "phs/field_svg.hpp"
#include "phs/format.hpp"
#include "phs/interpolation.hpp"
#include "phs/kernels.hpp"
#include "phs/point_io.hpp"
#include "phs/serialization.hpp"
#include "phs/unisolvence.hpp"

namespace phs::cli {

namespace {

// Raised for usage-level problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what)
{
    std::vector<T> out;
    for (const auto& tok : split(text, ',')) {
        T v{};
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
            throw UsageError(std::string("invalid ") + what + " list '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
    return out;
}

template <class T>
std::string join_list(const std::vector<T>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_floating_point_v<T>)
            out += format_double(values[i]);
        else
            out += std::to_string(values[i]);
    }
    return out;
}

// "poly" -> kernel default, "poly:q" -> q.
std::optional<int> parse_augment(const std::string& spec, bool requested)
{
    if (!requested) return std::nullopt;
    if (spec == "poly") return -1;
    if (spec.rfind("poly:", 0) == 0) {
        const auto q = parse_list<int>(spec.substr(5), "degree");
        if (q.size() != 1 || q.front() < 0) throw UsageError("augmentation degree must be one nonnegative integer");
        return q.front();
    }
    throw UsageError("--augment expects poly or poly:<q>, got '" + spec + "'");
}

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("RBF_SEED")) {
        std::uint64_t seed = 0;
        const std::string s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
        if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return seed;
        throw UsageError("RBF_SEED must be an unsigned 64-bit integer, got '" + s + "'");
    }
    return 0;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot write '" + path + "'");
    file << text;
    if (!file) throw InputError("failed writing '" + path + "'");
}

std::string json_text(const Json& doc) { return doc.dump(2) + "\n"; }

std::string null_rows_message(const PointSet& points, const Kernel& kernel, double eps)
{
    const InterpMatrix v = assemble(points, kernel, eps);
    std::string rows;
    for (Eigen::Index i = 0; i < v.entries.rows(); ++i) {
        if ((v.entries.row(i).array() == 0.0).all()) {
            if (!rows.empty()) rows += ',';
            rows += std::to_string(i + 1);
        }
    }
    if (rows.empty()) return {};
    return "interpolation matrix has a null row (row " + rows + " is identically zero)";
}

// Common --seed handling: explicit flag wins, then RBF_SEED, then 0.
struct SeedOption {
    std::uint64_t value = 0;
    CLI::Option* option = nullptr;

    void add(CLI::App* app) { option = app->add_option("--seed", value, "Master seed (default: $RBF_SEED or 0)"); }
    std::uint64_t resolve() const { return option && option->count() ? value : default_seed(); }
};

// ---------------------------------------------------------------------------

int cmd_sample(int dim, int n, std::uint64_t seed, const std::string& domain_spec, const std::string& density_spec,
               bool with_values, const std::string& out_path, std::ostream& out)
{
    const Domain domain = Domain::parse(domain_spec, dim);
    const Density density = Density::parse(density_spec, dim);
    const PointSet points = sample(domain, density, n, seed);
    std::ostringstream csv;
    if (with_values) {
        const Eigen::VectorXd values = sample_function(points);
        write_points_csv(csv, points, &values);
    } else {
        write_points_csv(csv, points);
    }
    write_text(out_path, csv.str(), out);
    return kExitOk;
}

int cmd_interp(const std::string& kernel_spec, const std::string& points_path, const std::string& model_path,
               double eps, double tau, std::optional<int> augment, const std::string& eval_path,
               const std::string& pred_path, std::ostream& out, std::ostream& err)
{
    const Kernel kernel = Kernel::parse(kernel_spec);
    const PointData data = read_points_csv_file(points_path);
    if (!data.values) throw InputError(points_path + ": interpolation needs a 'value' column");

    std::optional<InterpolationModel> model;
    try {
        if (augment) {
            std::optional<int> degree = *augment >= 0 ? std::optional<int>(*augment) : std::nullopt;
            model = solve_augmented(data.points, *data.values, kernel, eps, degree, tau);
        } else {
            model = solve_unaugmented(data.points, *data.values, kernel, eps, tau);
        }
    } catch (const SingularSystemError& e) {
        err << "error: singular system: " << e.what() << '\n';
        const std::string null_row = null_rows_message(data.points, kernel, eps);
        if (!null_row.empty()) err << "error: " << null_row << '\n';
        return kExitFailure;
    } catch (const AugmentationRankError& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }

    write_text(model_path, json_text(to_json(*model)), out);
    if (!eval_path.empty()) {
        const PointData queries = read_points_csv_file(eval_path);
        const Eigen::VectorXd pred = model->evaluate(queries.points.coords());
        std::ostringstream csv;
        write_points_csv(csv, queries.points, &pred);
        write_text(pred_path, csv.str(), out);
    }
    if (model->diagnostics()) err << "solved: " << model->diagnostics()->summary() << '\n';
    return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& points_path, const std::string& out_path,
             std::ostream& out)
{
    std::ifstream in(model_path);
    if (!in) throw InputError("cannot open '" + model_path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::exception& e) {
        throw InputError(model_path + ": " + e.what());
    }
    const InterpolationModel model = model_from_json(doc);
    const PointData queries = read_points_csv_file(points_path);
    const Eigen::VectorXd pred = model.evaluate(queries.points.coords());
    std::ostringstream csv;
    write_points_csv(csv, queries.points, &pred);
    write_text(out_path, csv.str(), out);
    return kExitOk;
}

struct VerifyArgs {
    std::string kernel;
    int dim = 2;
    std::string n_list = "10";
    int trials = 100;
    double tau = kDefaultSingularityThreshold;
    double eps = 1.0;
    std::string domain = "box";
    std::string density = "uniform";
    std::string json_path;
    std::string csv_path;
    int threads = 0;
};

int cmd_verify(const VerifyArgs& a, std::uint64_t seed, std::ostream& out)
{
    MonteCarloConfig config{.kernel = Kernel::parse(a.kernel),
                            .epsilon = a.eps,
                            .domain = Domain::parse(a.domain, a.dim),
                            .density = Density::parse(a.density, a.dim),
                            .n_list = parse_list<int>(a.n_list, "size"),
                            .trials = a.trials,
                            .seed = seed,
                            .tau = a.tau,
                            .threads = a.threads};
    if (!(a.eps > 0.0)) throw UsageError("--eps must be positive");

    const UnisolvenceReport report = monte_carlo(config);
    Json doc = to_json(report);
    doc["config"]["cli"] = "verify --kernel " + config.kernel.to_string() + " --dim " + std::to_string(a.dim) +
                           " --n " + join_list(config.n_list) + " --trials " + std::to_string(a.trials) +
                           " --seed " + std::to_string(seed) + " --tau " + format_double(a.tau) + " --eps " +
                           format_double(a.eps) + " --domain " + config.domain.to_string() + " --density " +
                           config.density.to_string();

    if (report.exploratory) out << "EXPLORATORY: " << *report.exploratory << " (results are report-only)\n";
    out << "kernel " << config.kernel.to_string() << ", d=" << a.dim << ", trials=" << a.trials
        << ", seed=" << seed << ", tau=" << format_double(a.tau) << '\n';
    out << std::setw(8) << "n" << std::setw(10) << "failures" << std::setw(14) << "failure_rate" << std::setw(16)
        << "min_sigma_ratio" << std::setw(16) << "max_condition" << '\n';
    for (const auto& agg : report.aggregates) {
        out << std::setw(8) << agg.n << std::setw(10) << agg.failures << std::setw(14) << agg.failure_rate
            << std::setw(16) << agg.min_sigma_ratio << std::setw(16) << agg.max_condition << '\n';
    }

    if (!a.json_path.empty()) write_text(a.json_path, json_text(doc), out);
    if (!a.csv_path.empty()) {
        std::ostringstream csv;
        write_records_csv(csv, report);
        write_text(a.csv_path, csv.str(), out);
    }

    if (report.exploratory) return kExitOk;
    if (report.total_failures() > 0) {
        out << "FAIL: " << report.total_failures() << " numerically singular matrices in a proven case\n";
        return kExitFailure;
    }
    out << "PASS: no numerically singular matrices\n";
    return kExitOk;
}

int cmd_counterexample(int dim, int n, int k, const std::string& kernel_spec, const std::string& center_spec,
                       double tau, const std::string& json_path, std::ostream& out)
{
    if (dim < 2) throw UsageError("--dim must be at least 2");
    if (n < 2) throw UsageError("--n must be at least 2 (center plus at least one sphere point)");
    const Kernel kernel = kernel_spec.empty() ? Kernel::tps(k) : Kernel::parse(kernel_spec);

    Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
    if (!center_spec.empty()) {
        const auto c = parse_list<double>(center_spec, "center");
        if (c.size() != static_cast<std::size_t>(dim)) throw UsageError("--center needs exactly dim coordinates");
        for (int i = 0; i < dim; ++i) center[i] = c[static_cast<std::size_t>(i)];
    }

    const PointSet points = sphere_counterexample(dim, n, center);
    const InterpMatrix v = assemble(points, kernel, 1.0);
    const MatrixDiagnostics diag = diagnostics(v.entries, tau);
    const bool exact = diag.det_sign == 0 && diag.sigma_min == 0.0;
    const bool zero_row = (v.entries.row(0).array() == 0.0).all();

    out << "sphere configuration: center + " << (n - 1) << " points at distance exactly 1, d=" << dim << '\n';
    out << "kernel " << kernel.to_string() << ": " << diag.summary() << '\n';

    std::string note;
    int code = kExitOk;
    if (kernel.is_tps()) {
        if (exact) {
            note = "exact singularity: the center's row is identically zero (phi(1) = 0)";
        } else {
            note = "expected an exactly singular matrix but did not get one";
            code = kExitFailure;
        }
    } else {
        note = diag.singular_verdict
                   ? "radial power: matrix reported singular on this configuration"
                   : "radial power: nonsingular verdict; the null-row mechanism is specific to thin-plate splines";
    }
    out << note << '\n';

    if (!json_path.empty()) {
        Json points_json = Json::array();
        for (int j = 0; j < points.size(); ++j) {
            Json p = Json::array();
            for (int i = 0; i < dim; ++i) p.push_back(points.coords()(i, j));
            points_json.push_back(std::move(p));
        }
        Json doc;
        doc["config"] = Json{{"dim", dim},
                             {"n", n},
                             {"kernel", kernel.to_string()},
                             {"center", std::vector<double>(center.data(), center.data() + dim)},
                             {"tau", tau},
                             {"cli", "counterexample --dim " + std::to_string(dim) + " --n " + std::to_string(n) +
                                         " --kernel " + kernel.to_string() + " --center " +
                                         join_list(std::vector<double>(center.data(), center.data() + dim)) +
                                         " --tau " + format_double(tau)}};
        doc["points"] = std::move(points_json);
        doc["diagnostics"] = to_json(diag);
        doc["null_row"] = zero_row;
        doc["exact_singularity"] = exact;
        doc["note"] = note;
        write_text(json_path, json_text(doc), out);
    }
    return code;
}

struct ScaleArgs {
    std::string kernel;
    std::string eps_list;
    std::string augment;
    bool augment_given = false;
    std::string points_path;
    int n = 12;
    int dim = 2;
    std::string domain = "box";
    double tau = kDefaultSingularityThreshold;
    std::string json_path;
};

int cmd_scale_check(const ScaleArgs& a, std::uint64_t seed, std::ostream& out, std::ostream& err)
{
    const Kernel kernel = Kernel::parse(a.kernel);
    const auto epsilons = parse_list<double>(a.eps_list, "scale");
    if (epsilons.size() < 2) throw UsageError("--eps needs at least two scales");
    for (double e : epsilons)
        if (!(e > 0.0)) throw UsageError("scales must be positive");
    std::optional<int> degree = parse_augment(a.augment, a.augment_given);
    if (degree && *degree < 0) degree = kernel.info().cpd_order - 1;

    std::optional<PointData> data;
    std::string source;
    if (!a.points_path.empty()) {
        data = read_points_csv_file(a.points_path);
        source = "--points " + a.points_path;
    } else {
        const Domain domain = Domain::parse(a.domain, a.dim);
        data = PointData{sample(domain, Density::uniform(), a.n, seed), std::nullopt};
        source = "--n " + std::to_string(a.n) + " --dim " + std::to_string(a.dim) + " --domain " +
                 domain.to_string() + " --seed " + std::to_string(seed);
    }
    const Eigen::VectorXd values = data->values ? *data->values : sample_function(data->points);

    ScaleCheckReport report;
    try {
        report = scale_invariance_check(data->points, values, kernel, epsilons, degree, a.tau);
    } catch (const SingularSystemError& e) {
        err << "error: singular system at one of the scales: " << e.what() << '\n';
        return kExitFailure;
    } catch (const AugmentationRankError& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }

    Json doc = to_json(report);
    doc["cli"] = "scale-check --kernel " + kernel.to_string() + " --eps " + join_list(epsilons) +
                 (degree ? " --augment poly:" + std::to_string(*degree) : std::string()) + " " + source +
                 " --tau " + format_double(a.tau);

    out << "kernel " << report.kernel << " regime " << report.regime << '\n';
    for (std::size_t i = 0; i < report.epsilons.size(); ++i)
        out << "  eps=" << format_double(report.epsilons[i]) << " cond=" << format_double(report.conditions[i])
            << '\n';
    out << "max interpolant deviation " << format_double(report.max_interpolant_deviation) << '\n';
    if (report.max_cardinal_deviation)
        out << "max cardinal deviation " << format_double(*report.max_cardinal_deviation) << '\n';
    out << "max condition deviation " << format_double(report.max_condition_deviation) << '\n';
    if (!a.json_path.empty()) write_text(a.json_path, json_text(doc), out);

    if (!report.asserted) {
        out << "INFO: deviation reported only (no invariance bound asserted for this case)\n";
        return kExitOk;
    }
    out << (report.passed ? "PASS" : "FAIL") << ": bound " << format_double(report.bound) << '\n';
    return report.passed ? kExitOk : kExitFailure;
}

struct FieldArgs {
    std::string kernel;
    int dim = 2;
    std::string points_path;
    int n = 5;
    std::string domain = "box";
    std::string grid = "101,101";
    std::string bounds;
    double eps = 1.0;
    double tau = kDefaultSingularityThreshold;
    std::string out_path;
    std::string svg_path;
};

int cmd_field(const FieldArgs& a, std::uint64_t seed, std::ostream& out)
{
    if (a.dim != 2) throw UsageError("field plots are defined for --dim 2 only");
    const Kernel kernel = Kernel::parse(a.kernel);

    std::optional<PointSet> nodes;
    std::string source;
    if (!a.points_path.empty()) {
        nodes = read_points_csv_file(a.points_path).points;
        if (nodes->dim() != 2) throw UsageError("field plots need planar points (x1,x2)");
        source = "--points " + a.points_path;
    } else {
        const Domain domain = Domain::parse(a.domain, 2);
        nodes = sample(domain, Density::uniform(), a.n, seed);
        source = "--n " + std::to_string(a.n) + " --domain " + domain.to_string() + " --seed " + std::to_string(seed);
    }

    const auto counts = parse_list<int>(a.grid, "grid");
    if (counts.size() != 2 || counts[0] < 2 || counts[1] < 2) throw UsageError("--grid expects NX,NY with both >= 2");
    GridSpec grid;
    grid.nx = counts[0];
    grid.ny = counts[1];
    if (!a.bounds.empty()) {
        const auto b = parse_list<double>(a.bounds, "bounds");
        if (b.size() != 4 || !(b[0] < b[1]) || !(b[2] < b[3]))
            throw UsageError("--bounds expects xmin,xmax,ymin,ymax with min < max");
        grid.x_min = b[0];
        grid.x_max = b[1];
        grid.y_min = b[2];
        grid.y_max = b[3];
    } else {
        const Eigen::Vector2d lo = nodes->coords().rowwise().minCoeff();
        const Eigen::Vector2d hi = nodes->coords().rowwise().maxCoeff();
        const Eigen::Vector2d pad = ((hi - lo) * 0.25).cwiseMax(0.5);
        grid.x_min = lo[0] - pad[0];
        grid.x_max = hi[0] + pad[0];
        grid.y_min = lo[1] - pad[1];
        grid.y_max = hi[1] + pad[1];
    }

    const BorderedSystem system(*nodes, kernel, a.eps, a.tau);
    const FieldGrid field = f_n_grid(system, grid);

    const std::string echo = "field --kernel " + kernel.to_string() + " --dim 2 " + source + " --grid " +
                             std::to_string(grid.nx) + "," + std::to_string(grid.ny) + " --bounds " +
                             join_list(std::vector<double>{grid.x_min, grid.x_max, grid.y_min, grid.y_max}) +
                             " --eps " + format_double(a.eps) + " --tau " + format_double(a.tau);

    std::ostringstream csv;
    csv << "# " << echo << '\n' << "x,y,value\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            csv << format_double(grid.x(i)) << ',' << format_double(grid.y(j)) << ','
                << format_double(field.values(j, i)) << '\n';
    write_text(a.out_path, csv.str(), out);
    if (!a.svg_path.empty()) write_text(a.svg_path, render_field_svg(field, *nodes, echo), out);
    return kExitOk;
}

struct GrowArgs {
    std::string kernel;
    int dim = 2;
    int n_max = 30;
    std::string domain = "box";
    std::string density = "uniform";
    double eps = 1.0;
    double tau = kDefaultSingularityThreshold;
    std::string json_path;
};

int cmd_grow(const GrowArgs& a, std::uint64_t seed, std::ostream& out)
{
    GrowthConfig config{.kernel = Kernel::parse(a.kernel),
                        .epsilon = a.eps,
                        .domain = Domain::parse(a.domain, a.dim),
                        .density = Density::parse(a.density, a.dim),
                        .n_max = a.n_max,
                        .seed = seed,
                        .tau = a.tau};
    const GrowthReport report = incremental_growth(config);
    Json doc = to_json(report);
    doc["config"]["cli"] = "grow --kernel " + config.kernel.to_string() + " --dim " + std::to_string(a.dim) +
                           " --n-max " + std::to_string(a.n_max) + " --seed " + std::to_string(seed) + " --domain " +
                           config.domain.to_string() + " --density " + config.density.to_string() + " --eps " +
                           format_double(a.eps) + " --tau " + format_double(a.tau);

    int flagged = 0;
    out << std::setw(6) << "n" << std::setw(6) << "sign" << ' ' << std::setw(24) << "log|f_n|" << ' '
        << std::setw(24) << "rel_diff" << ' ' << std::setw(24) << "cond(V_n)" << '\n';
    for (const auto& s : report.steps) {
        const SignedLogDet f = s.schur.value_or(s.direct);
        out << std::setw(6) << s.n << std::setw(6) << f.sign << ' ' << std::setw(24) << format_double(f.log_abs)
            << ' ' << std::setw(24) << format_double(s.rel_disagreement) << ' ' << std::setw(24)
            << format_double(s.base_condition)
            << (s.ill_conditioned ? "  ill-conditioned" : "") << '\n';
        flagged += s.ill_conditioned ? 1 : 0;
    }
    out << "steps " << report.steps.size() << ", ill-conditioning events " << flagged << '\n';
    if (!a.json_path.empty()) write_text(a.json_path, json_text(doc), out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Polyharmonic spline interpolation and unisolvence experiments", "phs"};
    app.require_subcommand(1);

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Draw random points and write them as CSV");
    int sample_dim = 2;
    int sample_n = 10;
    std::string sample_domain = "box";
    std::string sample_density = "uniform";
    bool sample_values = false;
    std::string sample_out;
    SeedOption sample_seed;
    sample_cmd->add_option("--dim", sample_dim, "Dimension")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--n", sample_n, "Number of points")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--domain", sample_domain, "box[:lo..,hi..] or ball[:c..,r]");
    sample_cmd->add_option("--density", sample_density, "uniform or gauss:mu=..,sd=..");
    sample_cmd->add_flag("--values", sample_values, "Append a value column from a smooth test function");
    sample_cmd->add_option("--out", sample_out, "Output CSV (default stdout)");
    sample_seed.add(sample_cmd);

    // interp
    auto* interp_cmd = app.add_subcommand("interp", "Fit an interpolant to CSV data and export it as JSON");
    std::string interp_kernel;
    std::string interp_points;
    std::string interp_out = "model.json";
    double interp_eps = 1.0;
    double interp_tau = kDefaultSingularityThreshold;
    std::string interp_augment;
    std::string interp_eval;
    std::string interp_pred;
    interp_cmd->add_option("--kernel", interp_kernel, "tps:k=<int> or rp:nu=<float>")->required();
    interp_cmd->add_option("--points", interp_points, "CSV x1,..,xd,value")->required();
    interp_cmd->add_option("--out", interp_out, "Model JSON path");
    interp_cmd->add_option("--eps", interp_eps, "Scale parameter")->check(CLI::PositiveNumber);
    interp_cmd->add_option("--tau", interp_tau, "Relative singularity threshold")->check(CLI::PositiveNumber);
    auto* interp_aug_opt = interp_cmd->add_option("--augment", interp_augment, "poly or poly:<q>");
    interp_cmd->add_option("--eval", interp_eval, "Query CSV to evaluate the interpolant at");
    interp_cmd->add_option("--pred", interp_pred, "Prediction CSV path (default stdout)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model at query points");
    std::string eval_model;
    std::string eval_points;
    std::string eval_out;
    eval_cmd->add_option("--model", eval_model, "Model JSON")->required();
    eval_cmd->add_option("--points", eval_points, "Query CSV")->required();
    eval_cmd->add_option("--out", eval_out, "Prediction CSV path (default stdout)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo nonsingularity experiment");
    VerifyArgs verify_args;
    SeedOption verify_seed;
    verify_cmd->add_option("--kernel", verify_args.kernel, "tps:k=<int> or rp:nu=<float>")->required();
    verify_cmd->add_option("--dim", verify_args.dim, "Dimension")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--n", verify_args.n_list, "Comma-separated matrix sizes");
    verify_cmd->add_option("--trials", verify_args.trials, "Trials per size")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--tau", verify_args.tau, "Relative singularity threshold")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--eps", verify_args.eps, "Scale parameter")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--domain", verify_args.domain, "box[:lo..,hi..] or ball[:c..,r]");
    verify_cmd->add_option("--density", verify_args.density, "uniform or gauss:mu=..,sd=..");
    verify_cmd->add_option("--json", verify_args.json_path, "Report JSON path");
    verify_cmd->add_option("--csv", verify_args.csv_path, "Per-trial CSV path");
    verify_cmd->add_option("--threads", verify_args.threads, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    verify_seed.add(verify_cmd);

    // counterexample
    auto* counter_cmd = app.add_subcommand("counterexample", "Center plus points on the unit sphere around it");
    int counter_dim = 2;
    int counter_n = 5;
    int counter_k = 1;
    std::string counter_kernel;
    std::string counter_center;
    double counter_tau = kDefaultSingularityThreshold;
    std::string counter_json;
    counter_cmd->add_option("--dim", counter_dim, "Dimension (>= 2)");
    counter_cmd->add_option("--n", counter_n, "Total points including the center (>= 2)");
    counter_cmd->add_option("--k", counter_k, "Thin-plate order k");
    counter_cmd->add_option("--kernel", counter_kernel, "Kernel override, e.g. rp:nu=1");
    counter_cmd->add_option("--center", counter_center, "Comma-separated center (default origin)");
    counter_cmd->add_option("--tau", counter_tau, "Relative singularity threshold")->check(CLI::PositiveNumber);
    counter_cmd->add_option("--json", counter_json, "Diagnostics JSON path");

    // scale-check
    auto* scale_cmd = app.add_subcommand("scale-check", "Compare interpolants across scale parameters");
    ScaleArgs scale_args;
    SeedOption scale_seed;
    scale_cmd->add_option("--kernel", scale_args.kernel, "tps:k=<int> or rp:nu=<float>")->required();
    scale_cmd->add_option("--eps", scale_args.eps_list, "Comma-separated scales (>= 2)")->required();
    auto* scale_aug_opt = scale_cmd->add_option("--augment", scale_args.augment, "poly or poly:<q>");
    scale_cmd->add_option("--points", scale_args.points_path, "CSV x1,..,xd[,value] (default: random points)");
    scale_cmd->add_option("--n", scale_args.n, "Random point count")->check(CLI::PositiveNumber);
    scale_cmd->add_option("--dim", scale_args.dim, "Dimension for random points")->check(CLI::PositiveNumber);
    scale_cmd->add_option("--domain", scale_args.domain, "Domain for random points");
    scale_cmd->add_option("--tau", scale_args.tau, "Relative singularity threshold")->check(CLI::PositiveNumber);
    scale_cmd->add_option("--json", scale_args.json_path, "Report JSON path");
    scale_seed.add(scale_cmd);

    // field
    auto* field_cmd = app.add_subcommand("field", "Evaluate the bordered determinant f_n on a planar grid");
    FieldArgs field_args;
    SeedOption field_seed;
    field_cmd->add_option("--kernel", field_args.kernel, "tps:k=<int> or rp:nu=<float>")->required();
    field_cmd->add_option("--dim", field_args.dim, "Must be 2");
    field_cmd->add_option("--points", field_args.points_path, "Node CSV (default: random nodes)");
    field_cmd->add_option("--n", field_args.n, "Random node count")->check(CLI::PositiveNumber);
    field_cmd->add_option("--domain", field_args.domain, "Domain for random nodes");
    field_cmd->add_option("--grid", field_args.grid, "NX,NY lattice size");
    field_cmd->add_option("--bounds", field_args.bounds, "xmin,xmax,ymin,ymax");
    field_cmd->add_option("--eps", field_args.eps, "Scale parameter")->check(CLI::PositiveNumber);
    field_cmd->add_option("--tau", field_args.tau, "Relative singularity threshold")->check(CLI::PositiveNumber);
    field_cmd->add_option("--out", field_args.out_path, "Field CSV path (default stdout)");
    field_cmd->add_option("--svg", field_args.svg_path, "SVG rendering path");
    field_seed.add(field_cmd);

    // grow
    auto* grow_cmd = app.add_subcommand("grow", "Add random points one at a time and check f_n(x_{n+1}) = det V_{n+1}");
    GrowArgs grow_args;
    SeedOption grow_seed;
    grow_cmd->add_option("--kernel", grow_args.kernel, "tps:k=<int> or rp:nu=<float>")->required();
    grow_cmd->add_option("--dim", grow_args.dim, "Dimension")->check(CLI::PositiveNumber);
    grow_cmd->add_option("--n-max", grow_args.n_max, "Final system size (>= 2)");
    grow_cmd->add_option("--domain", grow_args.domain, "box[:lo..,hi..] or ball[:c..,r]");
    grow_cmd->add_option("--density", grow_args.density, "uniform or gauss:mu=..,sd=..");
    grow_cmd->add_option("--eps", grow_args.eps, "Scale parameter")->check(CLI::PositiveNumber);
    grow_cmd->add_option("--tau", grow_args.tau, "Relative singularity threshold")->check(CLI::PositiveNumber);
    grow_cmd->add_option("--json", grow_args.json_path, "Report JSON path");
    grow_seed.add(grow_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        for (auto* sub : app.get_subcommands()) err << sub->help();
        return kExitUsage;
    }

    try {
        if (sample_cmd->parsed())
            return cmd_sample(sample_dim, sample_n, sample_seed.resolve(), sample_domain, sample_density, sample_values,
                              sample_out, out);
        if (interp_cmd->parsed())
            return cmd_interp(interp_kernel, interp_points, interp_out, interp_eps, interp_tau,
                              parse_augment(interp_augment, interp_aug_opt->count() > 0), interp_eval, interp_pred,
                              out, err);
        if (eval_cmd->parsed()) return cmd_eval(eval_model, eval_points, eval_out, out);
        if (verify_cmd->parsed()) return cmd_verify(verify_args, verify_seed.resolve(), out);
        if (counter_cmd->parsed())
            return cmd_counterexample(counter_dim, counter_n, counter_k, counter_kernel, counter_center, counter_tau,
                                      counter_json, out);
        if (scale_cmd->parsed()) {
            scale_args.augment_given = scale_aug_opt->count() > 0;
            return cmd_scale_check(scale_args, scale_seed.resolve(), out, err);
        }
        if (field_cmd->parsed()) return cmd_field(field_args, field_seed.resolve(), out);
        if (grow_cmd->parsed()) return cmd_grow(grow_args, grow_seed.resolve(), out);
    } catch (const SingularSystemError& e) {
        err << "error: singular system: " << e.what() << '\n';
        return kExitFailure;
    } catch (const DomainError& e) {
        err << "error: invalid parameter: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace phs::cli
