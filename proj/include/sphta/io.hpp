#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphta/lp_feasibility.hpp"
#include "sphta/mvee.hpp"
#include "sphta/point_set.hpp"
#include "sphta/solver.hpp"
#include "sphta/vertex_enumeration.hpp"

namespace sphta {

using Json = nlohmann::json;

/// Parses "c1,c2,..." into a vector.
inline Vector parse_vector(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        vals.push_back(std::stod(item));
    }
    if (vals.empty()) throw std::invalid_argument("parse_vector: no values");
    Vector v(static_cast<Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Index>(i)] = vals[i];
    return v;
}

/// Reads a CSV of one point per row, m columns. `skip_header` drops the
/// first line.
inline Matrix read_points_csv(std::istream& in, bool skip_header = false) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("read_points_csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("read_points_csv: empty input");
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j)
            out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return out;
}

inline Matrix read_points_csv_file(const std::string& path, bool skip_header = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_points_csv(in, skip_header);
}

/// Writes one point per row with round-trip-exact formatting.
inline void write_points_csv(std::ostream& out, const Matrix& rows) {
    char buf[64];
    for (Index i = 0; i < rows.rows(); ++i) {
        for (Index j = 0; j < rows.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", rows(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

inline Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

/// The membership result document: status, epsilon, iterations,
/// elapsed_ms, coefficients as [index, weight] pairs, and the witness
/// block with its separating plane. Inapplicable fields are null.
inline Json chm_result_json(const ChmOutcome& out, double epsilon, double elapsed_ms) {
    Json doc;
    doc["epsilon"] = epsilon;
    doc["iterations"] = out.iterations;
    doc["elapsed_ms"] = elapsed_ms;
    doc["coefficients"] = nullptr;
    doc["witness"] = nullptr;
    const auto coeff_json = [](const Iterate& it) {
        Json arr = Json::array();
        for (const auto& [i, w] : it.coeffs) arr.push_back(Json::array({i, w}));
        return arr;
    };
    if (out.inside()) {
        doc["status"] = "inside";
        doc["residual"] = out.as_inside().residual;
        doc["coefficients"] = coeff_json(out.as_inside().iterate);
    } else if (out.witness()) {
        const auto& w = out.as_witness();
        doc["status"] = "outside";
        doc["witness"] = Json{{"point", vector_to_json(w.cert.witness.coords)},
                              {"plane", Json{{"normal", vector_to_json(w.raw_plane.normal)},
                                             {"offset", w.raw_plane.offset}}}};
        doc["coefficients"] = coeff_json(w.cert.witness);
    } else {
        doc["status"] = "limit";
        doc["residual"] = out.as_limit().residual;
        doc["coefficients"] = coeff_json(out.as_limit().best);
    }
    return doc;
}

inline Json strict_lp_result_json(const StrictLpResult& r, double epsilon, double elapsed_ms) {
    Json doc;
    doc["epsilon"] = epsilon;
    doc["iterations"] = r.iterations;
    doc["elapsed_ms"] = elapsed_ms;
    if (r.feasible()) {
        doc["status"] = "strictly-feasible";
        doc["x"] = vector_to_json(r.as_feasible().x);
    } else {
        const auto& c = r.as_infeasible();
        doc["status"] = "infeasible-within-tolerance";
        doc["y"] = vector_to_json(c.y);
        doc["s"] = c.s;
        doc["residual"] = c.residual;
        doc["exact_certificate"] = c.exact_certificate;
    }
    return doc;
}

inline Json lp_feas_result_json(const LpFeasResult& r, double epsilon, double elapsed_ms) {
    Json doc;
    doc["epsilon"] = epsilon;
    doc["iterations"] = r.iterations;
    doc["elapsed_ms"] = elapsed_ms;
    if (r.feasible()) {
        const auto& f = r.as_feasible();
        doc["status"] = "feasible";
        doc["x"] = vector_to_json(f.x);
        doc["gamma"] = f.gamma;
        doc["residual"] = f.residual;
    } else {
        const auto& plane = r.as_infeasible().certificate;
        doc["status"] = "infeasible";
        doc["certificate"] =
            Json{{"normal", vector_to_json(plane.normal)}, {"offset", plane.offset}};
    }
    return doc;
}

inline Json vertex_report_json(const VertexReport& rep, double elapsed_ms) {
    Json doc;
    doc["vertex_indices"] = rep.vertex_indices;
    Json labels = Json::array();
    for (const auto& l : rep.labels)
        labels.push_back(l == PointLabel::Vertex ? "vertex" : "redundant");
    doc["labels"] = labels;
    doc["queries"] = rep.queries;
    doc["diameter"] = rep.diameter_R;
    doc["degenerate_gamma"] = rep.degenerate_gamma;
    doc["elapsed_ms"] = elapsed_ms;
    return doc;
}

inline Json ellipsoid_json(const Ellipsoid& e, double elapsed_ms) {
    Json shape = Json::array();
    for (Index i = 0; i < e.shape_M.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < e.shape_M.cols(); ++j) row.push_back(e.shape_M(i, j));
        shape.push_back(row);
    }
    return Json{{"center", vector_to_json(e.center_b)},
                {"shape", shape},
                {"elapsed_ms", elapsed_ms}};
}

}  // namespace sphta
