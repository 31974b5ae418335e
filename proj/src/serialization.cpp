#include "phs/serialization.hpp"

#include <cmath>
#include <ostream>

#include "phs/errors.hpp"
#include "phs/format.hpp"

namespace phs {

Json number_or_null(double value)
{
    return std::isfinite(value) ? Json(value) : Json(nullptr);
}

namespace {

Json signed_det_json(const SignedLogDet& d)
{
    return Json{{"sign", d.sign}, {"log_abs", number_or_null(d.log_abs)}};
}

Json vector_json(const Eigen::VectorXd& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const Json& arr, const char* what)
{
    if (!arr.is_array()) throw InputError(std::string("model field '") + what + "' must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw InputError(std::string("model field '") + what + "' must hold numbers");
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

}  // namespace

Json to_json(const MatrixDiagnostics& d)
{
    return Json{{"det_sign", d.det_sign},
                {"log_abs_det", number_or_null(d.log_abs_det)},
                {"sigma_min", d.sigma_min},
                {"sigma_max", d.sigma_max},
                {"condition", number_or_null(d.condition)},
                {"singular_verdict", d.singular_verdict},
                {"rel_threshold", d.rel_threshold}};
}

Json to_json(const InterpolationModel& model)
{
    Json points = Json::array();
    for (int j = 0; j < model.points().size(); ++j) points.push_back(vector_json(model.points().point(j)));
    Json doc;
    doc["kernel"] = model.kernel().to_string();
    doc["epsilon"] = model.epsilon();
    doc["points"] = std::move(points);
    doc["coefficients"] = vector_json(model.coefficients());
    if (model.tail())
        doc["tail"] = Json{{"degree", model.tail()->degree}, {"coeffs", vector_json(model.tail()->coefficients)}};
    else
        doc["tail"] = nullptr;
    if (model.diagnostics()) doc["diagnostics"] = to_json(*model.diagnostics());
    return doc;
}

InterpolationModel model_from_json(const Json& doc)
{
    try {
        const Kernel kernel = Kernel::parse(doc.at("kernel").get<std::string>());
        const double epsilon = doc.at("epsilon").get<double>();
        const Json& pts = doc.at("points");
        if (!pts.is_array() || pts.empty()) throw InputError("model needs a nonempty 'points' array");
        const auto dim = static_cast<Eigen::Index>(pts.front().size());
        Eigen::MatrixXd coords(dim, static_cast<Eigen::Index>(pts.size()));
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const Eigen::VectorXd p = vector_from_json(pts[j], "points");
            if (p.size() != dim) throw InputError("model points have inconsistent dimension");
            coords.col(static_cast<Eigen::Index>(j)) = p;
        }
        std::optional<PolynomialTail> tail;
        if (doc.contains("tail") && !doc.at("tail").is_null())
            tail = PolynomialTail{doc.at("tail").at("degree").get<int>(),
                                  vector_from_json(doc.at("tail").at("coeffs"), "tail.coeffs")};
        return InterpolationModel(PointSet(std::move(coords), DeterministicProvenance{"model"}), kernel, epsilon,
                                  vector_from_json(doc.at("coefficients"), "coefficients"), std::move(tail));
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed model document: ") + e.what());
    }
}

Json to_json(const UnisolvenceReport& report)
{
    const auto& c = report.config;
    Json n_list = Json::array();
    for (int n : c.n_list) n_list.push_back(n);

    Json doc;
    doc["config"] = Json{{"kernel", c.kernel.to_string()},
                         {"epsilon", c.epsilon},
                         {"dim", c.domain.dim()},
                         {"domain", c.domain.to_string()},
                         {"density", c.density.to_string()},
                         {"n_list", std::move(n_list)},
                         {"trials", c.trials},
                         {"seed", c.seed},
                         {"tau", c.tau}};
    doc["exploratory"] = report.exploratory ? Json(*report.exploratory) : Json(nullptr);

    Json aggregates = Json::array();
    for (const auto& a : report.aggregates) {
        aggregates.push_back(Json{{"n", a.n},
                                  {"failure_count", a.failures},
                                  {"failure_rate", a.failure_rate},
                                  {"min_sigma_ratio", a.min_sigma_ratio},
                                  {"max_condition", number_or_null(a.max_condition)}});
    }
    doc["aggregates"] = std::move(aggregates);

    Json records = Json::array();
    for (const auto& r : report.records) {
        records.push_back(Json{{"trial", r.trial},
                               {"n", r.n},
                               {"det_sign", r.det_sign},
                               {"log_abs_det", number_or_null(r.log_abs_det)},
                               {"sigma_min", r.sigma_min},
                               {"sigma_max", r.sigma_max},
                               {"condition", number_or_null(r.condition)},
                               {"min_pairwise_distance", number_or_null(r.min_pairwise_distance)},
                               {"singular", r.singular}});
    }
    doc["records"] = std::move(records);
    return doc;
}

void write_records_csv(std::ostream& out, const UnisolvenceReport& report)
{
    out << "n,trial,det_sign,log_abs_det,sigma_min,sigma_max,condition,min_dist\n";
    for (const auto& r : report.records) {
        out << r.n << ',' << r.trial << ',' << r.det_sign << ',' << format_double(r.log_abs_det) << ','
            << format_double(r.sigma_min) << ',' << format_double(r.sigma_max) << ','
            << format_double(r.condition) << ',' << format_double(r.min_pairwise_distance) << '\n';
    }
}

Json to_json(const GrowthReport& report)
{
    const auto& c = report.config;
    Json doc;
    doc["config"] = Json{{"kernel", c.kernel.to_string()}, {"epsilon", c.epsilon},
                         {"dim", c.domain.dim()},          {"domain", c.domain.to_string()},
                         {"density", c.density.to_string()}, {"n_max", c.n_max},
                         {"seed", c.seed},                 {"tau", c.tau}};
    Json steps = Json::array();
    for (const auto& s : report.steps) {
        steps.push_back(Json{{"n", s.n},
                             {"f_n_schur", s.schur ? signed_det_json(*s.schur) : Json(nullptr)},
                             {"f_n_direct", signed_det_json(s.direct)},
                             {"det_next", signed_det_json(s.det_next)},
                             {"base_condition", number_or_null(s.base_condition)},
                             {"rel_disagreement", s.rel_disagreement},
                             {"ill_conditioned", s.ill_conditioned},
                             {"singular_next", s.singular_next}});
    }
    doc["steps"] = std::move(steps);
    doc["sign_chain"] = report.sign_chain;
    return doc;
}

Json to_json(const ScaleCheckReport& r)
{
    Json conditions = Json::array();
    for (double c : r.conditions) conditions.push_back(number_or_null(c));
    Json doc;
    doc["kernel"] = r.kernel;
    doc["degree"] = r.degree ? Json(*r.degree) : Json(nullptr);
    doc["epsilons"] = r.epsilons;
    doc["conditions"] = std::move(conditions);
    doc["regime"] = r.regime;
    doc["max_interpolant_deviation"] = r.max_interpolant_deviation;
    doc["max_cardinal_deviation"] = r.max_cardinal_deviation ? Json(*r.max_cardinal_deviation) : Json(nullptr);
    doc["max_condition_deviation"] = r.max_condition_deviation;
    doc["asserted"] = r.asserted;
    doc["bound"] = r.asserted ? Json(r.bound) : Json(nullptr);
    doc["passed"] = r.passed;
    return doc;
}

}  // namespace phs
