#pragma once

// JSON serialization for polytopes, gluing specs, and reports.  Computed
// magnitudes travel as exact decimal strings ("p/q", the "/q" omitted when
// integral), so every round-trip is bit-exact.  Structural indices and
// weights stay plain JSON integers.

#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fano/classify.hpp"

namespace fano {

using Json = nlohmann::json;

// Parse without exceptions so malformed input surfaces as one tidy error.
inline Json parse_json_text(const std::string& text, const std::string& what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument(what + ": malformed JSON");
    return j;
}

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument(std::string(what) + ": missing field \"" + key + "\"");
    return j.at(key);
}

inline int require_int(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw std::invalid_argument(std::string(what) + ": expected an integer");
    return j.get<int>();
}

inline bool require_bool(const Json& j, const char* what) {
    if (!j.is_boolean()) throw std::invalid_argument(std::string(what) + ": expected a boolean");
    return j.get<bool>();
}

inline std::string require_string(const Json& j, const char* what) {
    if (!j.is_string()) throw std::invalid_argument(std::string(what) + ": expected a string");
    return j.get<std::string>();
}

inline Rat rat_from_json(const Json& j, const char* what) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return parse_rat(j.get<std::string>());
        } catch (const std::exception& e) {
            throw std::invalid_argument(std::string(what) + ": " + e.what());
        }
    }
    throw std::invalid_argument(std::string(what) + ": expected an exact number string");
}

inline Int int_from_json(const Json& j, const char* what) {
    Rat r = rat_from_json(j, what);
    if (r.get_den() != 1) throw std::invalid_argument(std::string(what) + ": expected an integer value");
    return r.get_num();
}

}  // namespace detail

inline Json polytope_to_json(const Polytope& P) {
    Json verts = Json::array();
    for (const auto& v : P.vertices()) {
        Json row = Json::array();
        for (const Rat& x : v) row.push_back(to_string(x));
        verts.push_back(std::move(row));
    }
    Json j = Json::object();
    j["dim"] = P.ambient_dim();
    j["vertices"] = std::move(verts);
    return j;
}

inline Polytope polytope_from_json(const Json& j) {
    const int dim = detail::require_int(detail::require_field(j, "dim", "polytope"), "polytope dim");
    if (dim < 1) throw std::invalid_argument("polytope: dim must be positive");
    const Json& verts = detail::require_field(j, "vertices", "polytope");
    if (!verts.is_array() || verts.empty()) throw std::invalid_argument("polytope: vertices must be a non-empty array");
    std::vector<RVec> pts;
    for (const Json& row : verts) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw std::invalid_argument("polytope: every vertex needs exactly dim coordinates");
        RVec v;
        for (const Json& x : row) v.push_back(detail::rat_from_json(x, "polytope coordinate"));
        pts.push_back(std::move(v));
    }
    return Polytope::hull(std::move(pts));
}

// Sorted integer arrays, one per lattice point.
inline Json lattice_points_to_json(const std::vector<IVec>& pts) {
    Json out = Json::array();
    for (const IVec& p : pts) {
        Json row = Json::array();
        for (const Int& x : p) {
            if (x.fits_slong_p())
                row.push_back(static_cast<std::int64_t>(x.get_si()));
            else
                row.push_back(x.get_str());
        }
        out.push_back(std::move(row));
    }
    return out;
}

inline Json weight_system_to_json(const WeightSystem& ws) {
    Json arr = Json::array();
    for (const Int& w : ws.w) {
        if (w.fits_slong_p())
            arr.push_back(static_cast<std::int64_t>(w.get_si()));
        else
            arr.push_back(w.get_str());
    }
    return arr;
}

inline WeightSystem weight_system_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("weight system: expected a non-empty array");
    std::vector<Int> w;
    for (const Json& x : j) w.push_back(detail::int_from_json(x, "weight"));
    return weight_system(std::move(w));
}

// {"weights": [[1,1,2],[1,1,1]], "matchings": {"1,2": [[0,1]]}}; matching
// keys name simplex pairs 1-based, the vertex index pairs are 0-based.
inline Json gluing_spec_to_json(const GluingSpec& spec) {
    Json ws = Json::array();
    for (const auto& w : spec.weights) ws.push_back(weight_system_to_json(w));
    Json match = Json::object();
    for (const auto& entry : spec.matchings) {
        Json arr = Json::array();
        for (const auto& pr : entry.second) arr.push_back(Json::array({pr.first, pr.second}));
        match[std::to_string(entry.first.first + 1) + "," + std::to_string(entry.first.second + 1)] = std::move(arr);
    }
    Json j = Json::object();
    j["weights"] = std::move(ws);
    j["matchings"] = std::move(match);
    return j;
}

inline GluingSpec gluing_spec_from_json(const Json& j) {
    GluingSpec spec;
    const Json& ws = detail::require_field(j, "weights", "gluing spec");
    if (!ws.is_array() || ws.empty()) throw std::invalid_argument("gluing spec: weights must be a non-empty array");
    for (const Json& w : ws) spec.weights.push_back(weight_system_from_json(w));
    const int t = static_cast<int>(spec.weights.size());

    const Json& match = detail::require_field(j, "matchings", "gluing spec");
    if (!match.is_object()) throw std::invalid_argument("gluing spec: matchings must be an object");
    for (auto it = match.begin(); it != match.end(); ++it) {
        const std::string& key = it.key();
        const auto comma = key.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == key.size())
            throw std::invalid_argument("gluing spec: matching keys look like \"1,2\"");
        int a = 0, b = 0;
        try {
            a = static_cast<int>(detail::int_from_json(Json(key.substr(0, comma)), "matching key").get_si());
            b = static_cast<int>(detail::int_from_json(Json(key.substr(comma + 1)), "matching key").get_si());
        } catch (const std::exception&) {
            throw std::invalid_argument("gluing spec: matching keys look like \"1,2\"");
        }
        if (a < 1 || b < 1 || a > t || b > t || a >= b)
            throw std::invalid_argument("gluing spec: matching key \"" + key + "\" out of range");
        if (!it.value().is_array()) throw std::invalid_argument("gluing spec: matchings must map to pair arrays");
        for (const Json& pr : it.value()) {
            if (!pr.is_array() || pr.size() != 2)
                throw std::invalid_argument("gluing spec: vertex identifications are index pairs");
            const int va = detail::require_int(pr[0], "gluing spec vertex index");
            const int vb = detail::require_int(pr[1], "gluing spec vertex index");
            if (va < 0 || vb < 0) throw std::invalid_argument("gluing spec: vertex indices are 0-based");
            spec.matchings[{a - 1, b - 1}].push_back({va, vb});
        }
    }
    return spec;
}

inline Json bound_report_to_json(const BoundReport& r) {
    Json j = Json::object();
    j["case"] = r.case_id;
    j["lhs"] = to_string(r.lhs);
    j["rhs"] = to_string(r.rhs);
    j["holds"] = r.holds;
    return j;
}

inline BoundReport bound_report_from_json(const Json& j) {
    BoundReport r;
    r.case_id = detail::require_string(detail::require_field(j, "case", "bound report"), "bound report case");
    r.lhs = detail::rat_from_json(detail::require_field(j, "lhs", "bound report"), "bound report lhs");
    r.rhs = detail::int_from_json(detail::require_field(j, "rhs", "bound report"), "bound report rhs");
    r.holds = detail::require_bool(detail::require_field(j, "holds", "bound report"), "bound report holds");
    return r;
}

inline Json exception_tuple_to_json(const ExceptionTuple& e) {
    Json dims = Json::array();
    for (int x : e.dims) dims.push_back(x);
    Json j = Json::object();
    j["d"] = e.d;
    j["dims"] = std::move(dims);
    return j;
}

inline Json theorem_check_to_json(const TheoremCheck& c) {
    Json j = Json::object();
    j["case"] = c.case_id;
    j["dim"] = c.dim;
    j["dual_vol"] = to_string(c.dual_vol);
    j["bound"] = to_string(c.bound);
    j["holds_strict"] = c.holds_strict;
    j["equality"] = c.equality;
    j["dual_of_reflexive_R"] = c.dual_of_reflexive_R;
    j["ok"] = c.ok;
    j["error"] = c.error;
    return j;
}

inline Json classification_summary_to_json(const ClassificationReport& rep) {
    Json dims = Json::array();
    for (int x : rep.dims) dims.push_back(x);
    Json j = Json::object();
    j["case"] = rep.case_name;
    j["d"] = rep.d;
    j["t"] = rep.t;
    j["dims"] = std::move(dims);
    j["candidates"] = rep.candidates;
    j["survivors"] = rep.survivors;
    j["classes"] = rep.rows.size();
    j["pass"] = rep.pass;
    return j;
}

inline Json classification_row_to_json(const ClassRow& row, std::size_t index) {
    Json j = Json::object();
    j["class"] = index;
    j["key"] = row.key;
    j["vol"] = to_string(row.vol);
    j["dual_vol"] = to_string(row.dual_vol);
    j["bound"] = to_string(row.bound);
    j["verdict"] = row.verdict;
    j["polytope"] = polytope_to_json(row.rep);
    j["spec"] = gluing_spec_to_json(row.spec);
    return j;
}

// One summary line followed by one line per class.
inline std::string classification_report_to_json_lines(const ClassificationReport& rep) {
    std::ostringstream os;
    os << classification_summary_to_json(rep).dump() << '\n';
    for (std::size_t i = 0; i < rep.rows.size(); ++i) os << classification_row_to_json(rep.rows[i], i).dump() << '\n';
    return os.str();
}

inline ClassificationReport classification_report_from_json_lines(std::istream& in) {
    std::string line;
    Json summary;
    bool have_summary = false;
    ClassificationReport rep;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j = parse_json_text(line, "classification report line");
        if (!have_summary) {
            summary = std::move(j);
            have_summary = true;
            rep.case_name = detail::require_string(detail::require_field(summary, "case", "classification summary"),
                                                   "classification case");
            rep.d = detail::require_int(detail::require_field(summary, "d", "classification summary"), "classification d");
            rep.t = detail::require_int(detail::require_field(summary, "t", "classification summary"), "classification t");
            const Json& dims = detail::require_field(summary, "dims", "classification summary");
            if (!dims.is_array()) throw std::invalid_argument("classification summary: dims must be an array");
            for (const Json& x : dims) rep.dims.push_back(detail::require_int(x, "classification dims"));
            rep.candidates = static_cast<std::size_t>(
                detail::require_int(detail::require_field(summary, "candidates", "classification summary"), "candidates"));
            rep.survivors = static_cast<std::size_t>(
                detail::require_int(detail::require_field(summary, "survivors", "classification summary"), "survivors"));
            rep.pass = detail::require_bool(detail::require_field(summary, "pass", "classification summary"), "pass");
            continue;
        }
        ClassRow row{
            detail::require_string(detail::require_field(j, "key", "classification row"), "classification key"),
            gluing_spec_from_json(detail::require_field(j, "spec", "classification row")),
            polytope_from_json(detail::require_field(j, "polytope", "classification row")),
            detail::rat_from_json(detail::require_field(j, "vol", "classification row"), "classification vol"),
            detail::rat_from_json(detail::require_field(j, "dual_vol", "classification row"), "classification dual_vol"),
            detail::int_from_json(detail::require_field(j, "bound", "classification row"), "classification bound"),
            detail::require_bool(detail::require_field(j, "verdict", "classification row"), "classification verdict"),
        };
        rep.rows.push_back(std::move(row));
    }
    if (!have_summary) throw std::invalid_argument("classification report: no summary line");
    const std::size_t classes = static_cast<std::size_t>(
        detail::require_int(detail::require_field(summary, "classes", "classification summary"), "classes"));
    if (classes != rep.rows.size())
        throw std::invalid_argument("classification report: class count does not match the row count");
    return rep;
}

// Input for the bulk integration check: two lists of exact barycentric
// vectors and the target dimension.
struct Int5Data {
    int d = 0;
    std::vector<BarycentricVector> list1;
    std::vector<BarycentricVector> list2;
};

inline Int5Data int5_data_from_json(const Json& j) {
    Int5Data data;
    data.d = detail::require_int(detail::require_field(j, "d", "integration data"), "integration data d");
    for (const char* name : {"list1", "list2"}) {
        const Json& arr = detail::require_field(j, name, "integration data");
        if (!arr.is_array() || arr.empty())
            throw std::invalid_argument(std::string("integration data: ") + name + " must be a non-empty array");
        auto& dst = (std::string(name) == "list1") ? data.list1 : data.list2;
        for (const Json& row : arr) {
            if (!row.is_array() || row.empty())
                throw std::invalid_argument("integration data: entries are barycentric coordinate arrays");
            BarycentricVector b;
            for (const Json& x : row) b.push_back(detail::rat_from_json(x, "barycentric coordinate"));
            dst.push_back(std::move(b));
        }
    }
    return data;
}

inline Json int5_data_to_json(const Int5Data& data) {
    Json j = Json::object();
    j["d"] = data.d;
    for (const char* name : {"list1", "list2"}) {
        const auto& src = (std::string(name) == "list1") ? data.list1 : data.list2;
        Json arr = Json::array();
        for (const auto& b : src) {
            Json row = Json::array();
            for (const Rat& x : b) row.push_back(to_string(x));
            arr.push_back(std::move(row));
        }
        j[name] = std::move(arr);
    }
    return j;
}

}  // namespace fano
