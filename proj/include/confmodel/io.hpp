#pragma once

#include "ce_pairing.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace confmodel {

using json = nlohmann::ordered_json;

inline constexpr int kAlgebraFormatVersion = 1;
inline constexpr int kLieFormatVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

// Malformed or invalid user input (CLI exit code 2).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json poly_json(const Poly& p) {
    json a = json::array();
    for (const auto& [d, c] : p.c) a.push_back({d, c});
    return a;
}

inline Poly poly_from_json(const json& a) {
    Poly p;
    for (const auto& e : a) p.add(e.at(0).get<int>(), e.at(1).get<long long>());
    return p;
}

inline json matrix_json(const SparseMatrix& m) {
    json entries = json::array();
    for (int j = 0; j < m.cols(); ++j)
        for (const auto& [i, v] : m.column(j)) entries.push_back({i, j, to_string(v)});
    // row-major order
    std::sort(entries.begin(), entries.end(), [](const json& a, const json& b) {
        return std::make_pair(a[0].get<int>(), a[1].get<int>()) < std::make_pair(b[0].get<int>(), b[1].get<int>());
    });
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

namespace detail {

inline Rational coef_from_json(const json& v, const std::string& where) {
    try {
        if (v.is_number_integer()) return Rational(v.get<long>());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::exception&) {
    }
    throw InputError(where + ": coefficient must be an integer or a \"p/q\" string");
}

inline std::string line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        auto col = what.find("column");
        auto pos = col == std::string::npos ? std::string::npos : what.find(": ", col);
        throw InputError(source + ": JSON syntax error at " + line_col(text, e.byte ? e.byte - 1 : 0) + ": " +
                         (pos == std::string::npos ? what : what.substr(pos + 2)));
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

inline void check_header(const json& j, const std::string& format, int version, const std::string& src) {
    if (!j.is_object()) throw InputError(src + ": top level must be an object");
    if (j.contains("format") && j["format"] != format)
        throw InputError(src + ": format is " + j["format"].dump() + ", expected \"" + format + "\"");
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw InputError(src + ": missing integer field 'version'");
    if (j["version"].get<int>() != version)
        throw InputError(src + ": unsupported version " + j["version"].dump());
}

struct NamedBasis {
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::map<std::string, int> index;

    int at(const json& v, const std::string& where) const {
        if (!v.is_string()) throw InputError(where + ": basis reference must be a string");
        auto it = index.find(v.get<std::string>());
        if (it == index.end()) throw InputError(where + ": unknown basis element '" + v.get<std::string>() + "'");
        return it->second;
    }
    AVec vec(const json& v, const std::string& where) const {
        if (!v.is_array()) throw InputError(where + ": expected a list of [basis, coefficient] pairs");
        AVec r;
        for (std::size_t t = 0; t < v.size(); ++t) {
            const auto& e = v[t];
            const std::string w = where + "[" + std::to_string(t) + "]";
            if (!e.is_array() || e.size() != 2) throw InputError(w + ": expected [basis, coefficient]");
            add_to(r, at(e[0], w), coef_from_json(e[1], w));
        }
        return r;
    }
};

inline NamedBasis read_basis(const json& j, const std::string& src) {
    if (!j.contains("basis") || !j["basis"].is_array() || j["basis"].empty())
        throw InputError(src + ": 'basis' must be a nonempty list");
    NamedBasis b;
    for (std::size_t i = 0; i < j["basis"].size(); ++i) {
        const auto& e = j["basis"][i];
        const std::string w = src + ": basis[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("name") || !e["name"].is_string() || !e.contains("degree") ||
            !e["degree"].is_number_integer())
            throw InputError(w + ": expected {\"name\": string, \"degree\": integer}");
        std::string name = e["name"].get<std::string>();
        if (b.index.count(name)) throw InputError(w + ": duplicate name '" + name + "'");
        b.index[name] = static_cast<int>(i);
        b.names.push_back(name);
        b.degrees.push_back(e["degree"].get<int>());
    }
    return b;
}

}  // namespace detail

// Algebra file: products not listed are zero, except those with the unit,
// which default to the unit law; a listed product a·b also fixes b·a by
// graded commutativity unless b·a is listed too. Only the structure is
// checked here; see algebra_from_json for validation.
inline PdAlgebra::Data algebra_data_from_json(const json& j, const std::string& src = "algebra") {
    detail::check_header(j, "confmodel-algebra", kAlgebraFormatVersion, src);
    PdAlgebra::Data d;
    d.name = j.value("name", std::string("unnamed"));
    if (!j.contains("n") || !j["n"].is_number_integer()) throw InputError(src + ": missing integer field 'n'");
    d.n = j["n"].get<int>();
    auto b = detail::read_basis(j, src);
    const int N = static_cast<int>(b.names.size());
    d.names = b.names;
    d.degrees = b.degrees;
    if (!j.contains("unit")) throw InputError(src + ": missing field 'unit'");
    d.unit = b.at(j["unit"], src + ": unit");
    d.mult.assign(N, std::vector<AVec>(N));
    std::vector<std::vector<bool>> given(N, std::vector<bool>(N, false));
    if (j.contains("products")) {
        if (!j["products"].is_array()) throw InputError(src + ": 'products' must be a list");
        for (std::size_t t = 0; t < j["products"].size(); ++t) {
            const auto& e = j["products"][t];
            const std::string w = src + ": products[" + std::to_string(t) + "]";
            if (!e.is_object() || !e.contains("left") || !e.contains("right") || !e.contains("value"))
                throw InputError(w + ": expected {\"left\", \"right\", \"value\"}");
            int l = b.at(e["left"], w), r = b.at(e["right"], w);
            if (given[l][r]) throw InputError(w + ": product listed twice");
            given[l][r] = true;
            d.mult[l][r] = b.vec(e["value"], w + ".value");
        }
    }
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            if (given[i][k]) continue;
            if (given[k][i]) {
                d.mult[i][k] = d.mult[k][i];
                if ((d.degrees[i] * d.degrees[k]) % 2)
                    for (auto& [t, c] : d.mult[i][k]) c = -c;
            } else if (i == d.unit) {
                d.mult[i][k] = AVec{{k, 1}};
            } else if (k == d.unit) {
                d.mult[i][k] = AVec{{i, 1}};
            }
        }
    d.diff.assign(N, AVec{});
    if (j.contains("differential")) {
        if (!j["differential"].is_array()) throw InputError(src + ": 'differential' must be a list");
        for (std::size_t t = 0; t < j["differential"].size(); ++t) {
            const auto& e = j["differential"][t];
            const std::string w = src + ": differential[" + std::to_string(t) + "]";
            if (!e.is_object() || !e.contains("basis") || !e.contains("value"))
                throw InputError(w + ": expected {\"basis\", \"value\"}");
            d.diff[b.at(e["basis"], w)] = b.vec(e["value"], w + ".value");
        }
    }
    d.eps.assign(N, Rational(0));
    if (!j.contains("pairing") || !j["pairing"].is_array()) throw InputError(src + ": 'pairing' must be a list");
    for (std::size_t t = 0; t < j["pairing"].size(); ++t) {
        const auto& e = j["pairing"][t];
        const std::string w = src + ": pairing[" + std::to_string(t) + "]";
        if (!e.is_array() || e.size() != 2) throw InputError(w + ": expected [basis, coefficient]");
        d.eps[b.at(e[0], w)] = detail::coef_from_json(e[1], w);
    }
    return d;
}

inline PdAlgebra algebra_from_json(const json& j, const std::string& src = "algebra") {
    auto d = algebra_data_from_json(j, src);
    auto rep = PdAlgebra::verify(d);
    if (!rep.ok) throw InputError(src + ": not a Poincaré duality algebra: " + rep.message);
    return PdAlgebra::make(std::move(d));
}

inline json algebra_to_json(const PdAlgebra& A) {
    json j;
    j["format"] = "confmodel-algebra";
    j["version"] = kAlgebraFormatVersion;
    j["name"] = A.name();
    j["n"] = A.n();
    j["basis"] = json::array();
    for (int i = 0; i < A.dim(); ++i) j["basis"].push_back({{"name", A.basis_name(i)}, {"degree", A.degree(i)}});
    j["unit"] = A.basis_name(A.unit());
    auto vec = [&](const AVec& v) {
        json a = json::array();
        for (const auto& [t, c] : v) a.push_back({A.basis_name(t), to_string(c)});
        return a;
    };
    j["products"] = json::array();
    for (int i = 0; i < A.dim(); ++i)
        for (int k = 0; k < A.dim(); ++k)
            if (i != A.unit() && k != A.unit() && !A.mul(i, k).empty())
                j["products"].push_back({{"left", A.basis_name(i)}, {"right", A.basis_name(k)}, {"value", vec(A.mul(i, k))}});
    j["pairing"] = json::array();
    for (int i = 0; i < A.dim(); ++i)
        if (A.eps(i) != 0) j["pairing"].push_back({A.basis_name(i), to_string(A.eps(i))});
    if (A.has_differential()) {
        j["differential"] = json::array();
        for (int i = 0; i < A.dim(); ++i)
            if (!A.d(i).empty()) j["differential"].push_back({{"basis", A.basis_name(i)}, {"value", vec(A.d(i))}});
    }
    return j;
}

inline PdAlgebra load_algebra_file(const std::string& path) { return algebra_from_json(detail::read_json_file(path), path); }
inline PdAlgebra::Data load_algebra_data(const std::string& path) {
    return algebra_data_from_json(detail::read_json_file(path), path);
}

// Brackets not listed are zero; a listed [x, y] also fixes [y, x] by
// antisymmetry unless [y, x] is listed too.
inline FiniteLieAlgebra lie_from_json(const json& j, const std::string& src = "lie") {
    detail::check_header(j, "confmodel-lie", kLieFormatVersion, src);
    auto b = detail::read_basis(j, src);
    FiniteLieAlgebra g;
    g.name = j.value("name", std::string("unnamed"));
    g.names = b.names;
    g.degrees = b.degrees;
    std::set<std::pair<int, int>> given;
    if (j.contains("brackets")) {
        if (!j["brackets"].is_array()) throw InputError(src + ": 'brackets' must be a list");
        for (std::size_t t = 0; t < j["brackets"].size(); ++t) {
            const auto& e = j["brackets"][t];
            const std::string w = src + ": brackets[" + std::to_string(t) + "]";
            if (!e.is_object() || !e.contains("left") || !e.contains("right") || !e.contains("value"))
                throw InputError(w + ": expected {\"left\", \"right\", \"value\"}");
            int l = b.at(e["left"], w), r = b.at(e["right"], w);
            if (!given.insert({l, r}).second) throw InputError(w + ": bracket listed twice");
            AVec v = b.vec(e["value"], w + ".value");
            if (!v.empty()) g.bracket[{l, r}] = v;
        }
    }
    for (const auto& [lr, v] : std::map<std::pair<int, int>, AVec>(g.bracket)) {
        auto [l, r] = lr;
        if (given.count({r, l})) continue;
        AVec w;
        add_to(w, v, -koszul(static_cast<long long>(g.degrees[l]) * g.degrees[r]));
        g.bracket[{r, l}] = w;
    }
    auto rep = g.validate();
    if (!rep.ok) throw InputError(src + ": not a graded Lie algebra: " + rep.message);
    return g;
}

inline FiniteLieAlgebra load_lie_file(const std::string& path) { return lie_from_json(detail::read_json_file(path), path); }

// Report envelope. Timing is kept in its own field so that comparing
// reports with "timing" removed is a determinism check.
inline json make_report(const std::vector<std::string>& command, json config) {
    json r;
    r["schema"] = "confmodel-report";
    r["schema_version"] = kReportSchemaVersion;
    r["command"] = command;
    r["config"] = std::move(config);
    r["results"] = json::object();
    r["pass"] = true;
    return r;
}

// Human-readable rendering of the same report content.
inline void render_value(std::ostream& os, const json& v, const std::string& indent);

inline bool is_poly(const json& v) {
    if (!v.is_array() || v.empty()) return false;
    for (const auto& e : v)
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) return false;
    return true;
}

inline std::string poly_text(const json& v) { return poly_from_json(v).str(); }

inline void render_value(std::ostream& os, const json& v, const std::string& indent) {
    if (v.is_object()) {
        for (const auto& [k, x] : v.items()) {
            if (x.is_object() || (x.is_array() && !is_poly(x) && !x.empty() && (x[0].is_object() || x[0].is_array()))) {
                os << indent << k << ":\n";
                render_value(os, x, indent + "  ");
            } else {
                os << indent << k << ": ";
                render_value(os, x, "");
                os << "\n";
            }
        }
    } else if (v.is_array() && v.empty()) {
        os << "[]";
    } else if (v.is_array() && is_poly(v)) {
        os << poly_text(v);
    } else if (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array())) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].is_object()) {
                os << indent << "- [" << i << "]\n";
                render_value(os, v[i], indent + "  ");
            } else {
                os << indent << "- " << v[i].dump() << "\n";
            }
        }
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ", ";
            render_value(os, v[i], "");
        }
    } else if (v.is_string()) {
        os << v.get<std::string>();
    } else {
        os << v.dump();
    }
}

inline std::string render_text(const json& report) {
    std::ostringstream os;
    std::string cmd;
    for (const auto& c : report["command"]) cmd += (cmd.empty() ? "" : " ") + c.get<std::string>();
    os << "command: " << cmd << "\n";
    if (!report["config"].empty()) {
        os << "config:\n";
        render_value(os, report["config"], "  ");
    }
    os << "results:\n";
    render_value(os, report["results"], "  ");
    os << "status: " << (report["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    if (report.contains("timing")) os << "time: " << report["timing"]["seconds"].dump() << " s\n";
    return os.str();
}

}  // namespace confmodel
