#include "framekit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "framekit/error.hpp"

namespace framekit::io {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::invalid_input, "field '" + field + "' " + what);
}

double number_at(const Json& j, const std::string& field) {
    if (!j.is_number()) bad_field(field, "must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) bad_field(field, "must be finite");
    return x;
}

std::uint64_t unsigned_at(const Json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) bad_field(field, "must be non-negative");
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    bad_field(field, "must be a non-negative integer");
}

const Json& require(const Json& j, const std::string& field) {
    if (!j.is_object()) throw Error(ErrorCode::invalid_input, "expected a JSON object with field '" + field + "'");
    const auto it = j.find(field);
    if (it == j.end()) bad_field(field, "is missing");
    return *it;
}

Vector numbers(const Json& j, const std::string& field) {
    if (!j.is_array()) bad_field(field, "must be an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = number_at(j[i], field + "[" + std::to_string(i) + "]");
    return v;
}

Json number(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

Json numbers_json(const std::vector<double>& xs) {
    Json out = Json::array();
    for (double x : xs) out.push_back(number(x));
    return out;
}

Json vector_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
    return out;
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::invalid_input, "cannot read file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::invalid_input, "malformed JSON in '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::invalid_input, "cannot write file '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorCode::invalid_input, "failed writing '" + path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

FrameFamily family_from_json(const Json& j) {
    const std::uint64_t dim = unsigned_at(require(j, "dim"), "dim");
    if (dim == 0) bad_field("dim", "must be at least 1");
    if (dim > 4096) bad_field("dim", "exceeds the supported maximum of 4096");
    const Json& vectors = require(j, "vectors");
    if (!vectors.is_array() || vectors.empty()) bad_field("vectors", "must be a nonempty array of vectors");
    Matrix columns(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const std::string field = "vectors[" + std::to_string(i) + "]";
        const Vector v = numbers(vectors[i], field);
        if (static_cast<std::uint64_t>(v.size()) != dim)
            bad_field(field, "has length " + std::to_string(v.size()) + ", expected dim = " + std::to_string(dim));
        columns.col(static_cast<Eigen::Index>(i)) = v;
    }
    std::vector<std::string> labels;
    if (const auto it = j.find("labels"); it != j.end()) {
        if (!it->is_array()) bad_field("labels", "must be an array of strings");
        if (it->size() != vectors.size())
            bad_field("labels", "has " + std::to_string(it->size()) + " entries for " +
                                    std::to_string(vectors.size()) + " vectors");
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_string()) bad_field("labels[" + std::to_string(i) + "]", "must be a string");
            labels.push_back((*it)[i].get<std::string>());
        }
    }
    return FrameFamily(std::move(columns), std::move(labels));
}

Json to_json(const FrameFamily& f) {
    Json vectors = Json::array();
    for (std::size_t i = 0; i < f.size(); ++i) vectors.push_back(vector_json(f.vector(i)));
    return Json{{"dim", f.dim()}, {"vectors", std::move(vectors)}, {"labels", f.labels()}};
}

Vector vector_from_json(const Json& j) {
    const Vector out = numbers(j.is_array() ? j : require(j, "vector"), "vector");
    if (out.size() == 0) bad_field("vector", "must be nonempty");
    return out;
}

projection::Permutation permutation_from_json(const Json& j) {
    const Json& p = j.is_array() ? j : require(j, "permutation");
    if (!p.is_array()) bad_field("permutation", "must be an array of indices");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < p.size(); ++i)
        order.push_back(unsigned_at(p[i], "permutation[" + std::to_string(i) + "]"));
    return projection::Permutation(std::move(order));
}

constructions::ConstructionSpec spec_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::invalid_input, "construction spec must be a JSON object");
    constructions::ConstructionSpec spec;
    const Json& kind = require(j, "kind");
    if (!kind.is_string()) bad_field("kind", "must be a string");
    try {
        spec.kind = constructions::construction_kind_from_string(kind.get<std::string>());
    } catch (const Error&) {
        bad_field("kind", "must be one of onb, block_riesz, subframe_recipe, failing_family");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") continue;
        if (key == "dim") spec.dim = unsigned_at(value, key);
        else if (key == "k") spec.k = unsigned_at(value, key);
        else if (key == "K") spec.K = unsigned_at(value, key);
        else if (key == "A") spec.A = number_at(value, key);
        else if (key == "B") spec.B = number_at(value, key);
        else if (key == "n_h") spec.n_h = unsigned_at(value, key);
        else if (key == "n_k") spec.n_k = unsigned_at(value, key);
        else if (key == "h2_decay") spec.h2_decay = number_at(value, key);
        else if (key == "tail_decay") spec.tail_decay = number_at(value, key);
        else if (key == "m") spec.m = unsigned_at(value, key);
        else if (key == "seed") spec.seed = unsigned_at(value, key);
        else bad_field(key, "is not a construction spec field");
    }
    if (spec.dim > 4096) bad_field("dim", "exceeds the supported maximum of 4096");
    if (spec.n_h > 4096) bad_field("n_h", "exceeds the supported maximum of 4096");
    if (spec.k > 16) bad_field("k", "exceeds the supported maximum of 16");
    spec.validate();
    return spec;
}

Json to_json(const constructions::ConstructionSpec& spec) {
    return Json{{"kind", constructions::to_string(spec.kind)},
                {"dim", spec.dim},
                {"k", spec.k},
                {"K", spec.K},
                {"A", spec.A},
                {"B", spec.B},
                {"n_h", spec.n_h},
                {"n_k", spec.n_k},
                {"h2_decay", spec.h2_decay},
                {"tail_decay", spec.tail_decay},
                {"m", spec.m},
                {"seed", spec.seed}};
}

Json to_json(const TolerancePolicy& tol) {
    return Json{{"rank_tol_rel", tol.rank_tol_rel}, {"eig_tol", tol.eig_tol}};
}

Json to_json(const FrameBounds& b) {
    return Json{{"kind", to_string(b.kind)}, {"lower", number(b.lower)}, {"upper", number(b.upper)}};
}

Json to_json(const IndexSet& s) { return Json(s.values()); }

Json to_json(const subframe::RieszFrameReport& r) {
    return Json{{"riesz_lower", number(r.riesz_lower)},
                {"riesz_upper", number(r.riesz_upper)},
                {"exhaustive", r.exhaustive},
                {"subsets_examined", r.subsets_examined},
                {"subsets_skipped", r.subsets_skipped},
                {"worst_subset", to_json(r.worst.subset)},
                {"worst", Json{{"subset", to_json(r.worst.subset)},
                               {"lower", number(r.worst.lower)},
                               {"upper", number(r.worst.upper)}}}};
}

Json to_json(const subframe::RieszBasis& b) {
    return Json{{"indices", to_json(b.indices)}, {"constants", to_json(b.constants)}};
}

Json to_json(const subframe::SubframeDecomposition& d) {
    Json supports = Json::array();
    for (const auto& s : d.h_supports) supports.push_back(to_json(s));
    Json split = Json::array();
    for (const auto& [h1, h2] : d.h_split) split.push_back(Json{{"h1", vector_json(h1)}, {"h2", vector_json(h2)}});
    return Json{{"g", to_json(d.g)},          {"h", to_json(d.h)},
                {"k", to_json(d.k)},          {"m0", d.m0},
                {"h_supports", supports},     {"h_split", split},
                {"h2_energy", number(d.h2_energy)}};
}

Json to_json(const constructions::ConstructedFrame& c) {
    Json out = to_json(c.family);
    out["spec"] = to_json(c.spec);
    out["ground_truth"] = to_json(c.ground_truth);
    if (c.guaranteed) {
        out["guaranteed"] = Json{{"D", number(c.guaranteed->D)},
                                 {"lower", number(c.guaranteed->lower)},
                                 {"upper", number(c.guaranteed->upper)},
                                 {"coordinate_window", "A <= |f(n)|^2 <= B"}};
    }
    if (c.designed_failure) {
        const auto& f = *c.designed_failure;
        out["designed_failure"] = Json{{"subset", to_json(f.subset)},
                                       {"bound_ceiling", number(f.bound_ceiling)},
                                       {"designated_coordinates", f.designated_coordinates},
                                       {"column_sums", numbers_json(f.column_sums)},
                                       {"measured_lower", number(f.measured_lower)}};
    }
    return out;
}

Json to_json(const projection::ProjectionDiagnostics& d) {
    Json coord = Json::array();
    for (const auto& row : d.coord_errors) coord.push_back(numbers_json(row));
    return Json{{"levels", d.levels},
                {"tracked", to_json(d.tracked)},
                {"skipped_levels", d.skipped_levels},
                {"l2_errors", numbers_json(d.l2_errors)},
                {"max_coord_errors", numbers_json(d.max_coord_errors)},
                {"coord_errors", coord},
                {"dual_norms", numbers_json(d.dual_norms)},
                {"reference", numbers_json(d.reference)},
                {"reference_source", "coefficients of the full family"},
                {"trend", Json{{"l2_error", number(d.trend.l2_error)},
                               {"max_coord_error", number(d.trend.max_coord_error)},
                               {"max_dual_norm", number(d.trend.max_dual_norm)}}}};
}

std::string diagnostics_csv(const projection::ProjectionDiagnostics& d) {
    std::string out = "level,l2_error,max_coord_error,max_dual_norm\n";
    char line[128];
    for (std::size_t i = 0; i < d.levels.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", d.levels[i], d.l2_errors[i],
                      d.max_coord_errors[i], d.dual_norms[i]);
        out += line;
    }
    return out;
}

}  // namespace framekit::io
