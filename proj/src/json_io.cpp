#include "quiverforge/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace quiverforge {

namespace {

void write_escaped(std::ostream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
        switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            case '\r': os << "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    os << buf;
                } else {
                    os << c;
                }
        }
    }
    os << '"';
}

void write_value(std::ostream& os, const Json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent >= 0) {
            os << '\n';
            for (int k = 0; k < indent * d; ++k) os << ' ';
        }
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                write_escaped(os, it.key());
                os << (indent >= 0 ? ": " : ":");
                write_value(os, it.value(), indent, depth + 1);
            }
            newline(depth);
            os << '}';
            break;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                write_value(os, v, indent, depth + 1);
            }
            newline(depth);
            os << ']';
            break;
        }
        case Json::value_t::string:
            write_escaped(os, j.get_ref<const std::string&>());
            break;
        case Json::value_t::boolean:
            os << (j.get<bool>() ? "true" : "false");
            break;
        case Json::value_t::number_integer:
            os << j.get<long long>();
            break;
        case Json::value_t::number_unsigned:
            os << j.get<unsigned long long>();
            break;
        case Json::value_t::number_float: {
            double x = j.get<double>();
            if (!std::isfinite(x)) {
                os << "null";
                break;
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            os << buf;
            break;
        }
        default:
            os << "null";
    }
}

}  // namespace

std::string dump_json17(const Json& j, int indent) {
    std::ostringstream os;
    write_value(os, j, indent, 0);
    return os.str();
}

Json quiver_to_json(const Quiver& q) {
    Json j;
    j["vertices"] = Json::array();
    for (int v = 0; v < q.num_vertices(); ++v) j["vertices"].push_back(q.label(v));
    j["edges"] = Json::array();
    for (const Edge& e : q.edges())
        j["edges"].push_back(Json{{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
    return j;
}

Quiver quiver_from_json(const Json& j) {
    require(j.is_object() && j.contains("vertices") && j.contains("edges"),
            "quiver json: need 'vertices' and 'edges'");
    std::vector<std::string> labels;
    for (const auto& v : j.at("vertices")) labels.push_back(v.get<std::string>());
    std::vector<std::pair<int, int>> edges;
    int pos = 0;
    for (const auto& e : j.at("edges")) {
        require(e.at("id").get<int>() == pos, "quiver json: edge ids must equal array positions");
        edges.push_back({e.at("tail").get<int>(), e.at("head").get<int>()});
        ++pos;
    }
    return Quiver(static_cast<int>(labels.size()), std::move(edges), std::move(labels));
}

Json complex_to_json(const std::complex<double>& c) { return Json::array({c.real(), c.imag()}); }

std::complex<double> complex_from_json(const Json& j) {
    require(j.is_array() && j.size() == 2, "complex json: expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const Json& j) {
    require(j.is_array(), "matrix json: expected array of rows");
    const int rows = static_cast<int>(j.size());
    int cols = rows > 0 ? static_cast<int>(j[0].size()) : 0;
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        require(static_cast<int>(j[r].size()) == cols, "matrix json: ragged rows");
        for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

Json representation_to_json(const Representation& rep, bool inline_quiver) {
    Json j;
    if (inline_quiver) j["quiver"] = quiver_to_json(*rep.quiver());
    j["dims"] = rep.dims();
    Json mats = Json::object();
    for (int e = 0; e < rep.quiver()->num_edges(); ++e)
        mats[std::to_string(e)] = matrix_to_json(rep.matrix(e));
    j["matrices"] = std::move(mats);
    return j;
}

Representation representation_from_json(const Json& j) {
    require(j.is_object() && j.contains("quiver") && j.contains("dims") && j.contains("matrices"),
            "representation json: need 'quiver', 'dims', 'matrices'");
    Quiver q;
    if (j.at("quiver").is_string()) {
        std::ifstream in(j.at("quiver").get<std::string>());
        require(in.good(), "representation json: cannot open quiver file '" +
                               j.at("quiver").get<std::string>() + "'");
        q = quiver_from_json(Json::parse(in));
    } else {
        q = quiver_from_json(j.at("quiver"));
    }
    DimensionVector dims = j.at("dims").get<DimensionVector>();
    require(static_cast<int>(dims.size()) == q.num_vertices(),
            "representation json: dims length mismatch");
    QuiverPtr qp = share(std::move(q));
    std::vector<Mat> mats(qp->num_edges());
    for (int e = 0; e < qp->num_edges(); ++e) {
        std::string key = std::to_string(e);
        if (j.at("matrices").contains(key)) {
            mats[e] = matrix_from_json(j.at("matrices").at(key));
        } else {
            mats[e] = Mat::Zero(dims[qp->head(e)], dims[qp->tail(e)]);
        }
        // Zero-size matrices may arrive as [] regardless of declared shape.
        if (mats[e].size() == 0) mats[e] = Mat::Zero(dims[qp->head(e)], dims[qp->tail(e)]);
    }
    return Representation::make(std::move(qp), std::move(dims), std::move(mats));
}

Json relation_to_json(const Relation& r) {
    Json terms = Json::array();
    for (const Relation::Term& t : r.terms()) {
        Json term;
        term["coeff"] = complex_to_json(t.coeff);
        term["path"] = t.path.edges();
        terms.push_back(std::move(term));
    }
    return Json{{"terms", std::move(terms)}};
}

Relation relation_from_json(const Json& j, const QuiverPtr& q) {
    require(j.is_object() && j.contains("terms"), "relation json: need 'terms'");
    std::vector<Relation::Term> terms;
    for (const auto& t : j.at("terms")) {
        Complex coeff = complex_from_json(t.at("coeff"));
        std::vector<int> edges = t.at("path").get<std::vector<int>>();
        terms.push_back({coeff, Path::from_edges(q, std::move(edges))});
    }
    return Relation::make(std::move(terms));
}

namespace {

Rational coeff_from_json(const Json& c) {
    if (c.is_string()) return rational_from_string(c.get<std::string>());
    if (c.is_number_integer()) return Rational(c.get<long long>());
    if (c.is_number_float()) return rational_from_double(c.get<double>());
    if (c.is_array() && c.size() == 2) {
        require(c[1].get<double>() == 0.0,
                "sympoly json: complex coefficients with nonzero imaginary part are not "
                "supported in exact mode");
        return rational_from_double(c[0].get<double>());
    }
    throw PreconditionError("sympoly json: bad coefficient");
}

}  // namespace

Json sympoly_to_json(const SymPoly& p) {
    Json fams = Json::array();
    for (const auto& f : p.families()) fams.push_back(Json::array({f.name, f.arity}));
    Json terms = Json::array();
    for (const auto& [exp, coeff] : p.terms()) {
        Json term;
        term["exp"] = exp;
        term["coeff"] = rational_to_string(coeff);
        terms.push_back(std::move(term));
    }
    return Json{{"families", std::move(fams)}, {"terms", std::move(terms)}};
}

SymPoly sympoly_from_json(const Json& j) {
    require(j.is_object() && j.contains("families") && j.contains("terms"),
            "sympoly json: need 'families' and 'terms'");
    std::vector<SymPoly::Family> fams;
    for (const auto& f : j.at("families"))
        fams.push_back({f[0].get<std::string>(), f[1].get<int>()});
    SymPoly p(std::move(fams));
    for (const auto& t : j.at("terms"))
        p.add_term(t.at("exp").get<std::vector<int>>(), coeff_from_json(t.at("coeff")));
    return p;
}

}  // namespace quiverforge
