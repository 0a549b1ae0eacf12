#include "unfold/io.hpp"

#include <fstream>

#include "unfold/kns.hpp"

namespace unfold {

Json to_json(const QQi& q) { return q.str(); }

QQi qqi_from_json(const Json& j) {
    try {
        if (j.is_string()) return QQi::parse(j.get<std::string>());
        if (j.is_number_integer()) return QQi(Rational(j.get<long long>()));
    } catch (const std::exception& e) {
        throw DataError(std::string("bad number: ") + e.what());
    }
    throw DataError("numbers are given as strings such as \"1/3\" or \"1/2+2 i\"");
}

Json to_json(const Mat<QQi>& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json r = Json::array();
        for (int j = 0; j < m.cols; ++j) r.push_back(to_json(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

Mat<QQi> qmat_from_json(const Json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) throw DataError("matrix must have n rows");
    Mat<QQi> m(n, n);
    for (int a = 0; a < n; ++a) {
        if (!j[a].is_array() || static_cast<int>(j[a].size()) != n) throw DataError("matrix must have n columns");
        for (int b = 0; b < n; ++b) m(a, b) = qqi_from_json(j[a][b]);
    }
    return m;
}

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw DataError("complex numbers are [re, im]");
}

Json to_json(const Mat<Complex>& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json r = Json::array();
        for (int j = 0; j < m.cols; ++j) r.push_back(to_json(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

Mat<Complex> cmat_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw DataError("matrix expected");
    int r = static_cast<int>(j.size()), c = static_cast<int>(j[0].size());
    Mat<Complex> m(r, c);
    for (int a = 0; a < r; ++a) {
        if (static_cast<int>(j[a].size()) != c) throw DataError("ragged matrix");
        for (int b = 0; b < c; ++b) m(a, b) = complex_from_json(j[a][b]);
    }
    return m;
}

Json to_json(const CanonicalForm& f) {
    Json h = Json::array();
    for (auto& lvl : f.H) {
        Json row = Json::array();
        for (auto& x : lvl) row.push_back(to_json(x));
        h.push_back(row);
    }
    Json j{{"n", f.n}, {"H", h}};
    if (!f.J0.is_zero_matrix()) j["J0"] = to_json(f.J0);
    return j;
}

CanonicalForm form_from_json(const Json& j) {
    try {
        int n = j.at("n").get<int>();
        if (n < 1) throw DataError("n must be positive");
        std::vector<std::vector<QQi>> h;
        for (auto& row : j.at("H")) {
            std::vector<QQi> lvl;
            for (auto& x : row) lvl.push_back(qqi_from_json(x));
            if (static_cast<int>(lvl.size()) != n) throw DataError("each level of H needs n entries");
            h.push_back(lvl);
        }
        if (h.empty()) throw DataError("H needs at least the residue level");
        Mat<QQi> j0 = j.contains("J0") ? qmat_from_json(j["J0"], n) : Mat<QQi>(n, n);
        auto f = CanonicalForm::make(n, h, j0);
        if (is_sorted_form(f)) return f;
        if (!j0.is_zero_matrix()) throw DataError("a form with J0 must be given sorted");
        return sort_to_fundamental_domain(f);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("form: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("form: ") + e.what());
    }
}

Json to_json(const DSPInstance& in) {
    Json pts = Json::array();
    for (auto& p : in.points) {
        Json q{{"t", to_json(p.t)}, {"form", to_json(p.form)}};
        if (!p.c.empty()) {
            Json c = Json::array();
            for (auto& x : p.c) c.push_back(to_json(x));
            q["c"] = c;
        }
        pts.push_back(q);
    }
    return {{"points", pts},           {"tol", in.opt.tol},         {"max_iter", in.opt.max_iter},
            {"restarts", in.opt.restarts}, {"seed", in.opt.seed},   {"irr_tol", in.opt.irr_tol},
            {"init_scale", in.opt.init_scale}};
}

DSPInstance instance_from_json(const Json& j) {
    DSPInstance in;
    try {
        for (auto& p : j.at("points")) {
            DSPPoint pt;
            pt.t = p.contains("t") ? qqi_from_json(p["t"]) : QQi(0);
            pt.form = form_from_json(p.at("form"));
            if (p.contains("c"))
                for (auto& x : p["c"]) pt.c.push_back(qqi_from_json(x));
            in.points.push_back(pt);
        }
        in.opt.tol = j.value("tol", in.opt.tol);
        in.opt.max_iter = j.value("max_iter", in.opt.max_iter);
        in.opt.restarts = j.value("restarts", in.opt.restarts);
        in.opt.seed = j.value("seed", in.opt.seed);
        in.opt.irr_tol = j.value("irr_tol", in.opt.irr_tol);
        in.opt.init_scale = j.value("init_scale", in.opt.init_scale);
        in.validate();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("instance: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("instance: ") + e.what());
    }
    return in;
}

Json to_json(const TriangularCoords<Complex>& t) {
    auto levels = [](const std::vector<std::vector<Mat<Complex>>>& v) {
        Json a = Json::array();
        for (auto& lv : v) {
            Json b = Json::array();
            for (auto& m : lv) b.push_back(to_json(m));
            a.push_back(b);
        }
        return a;
    };
    return {{"g", to_json(t.g)}, {"X", levels(t.X)}, {"nu", levels(t.nu)}, {"h", to_json(t.h)}};
}

TriangularCoords<Complex> coords_from_json(const Json& j) {
    auto levels = [](const Json& a) {
        std::vector<std::vector<Mat<Complex>>> v;
        for (auto& lv : a) {
            std::vector<Mat<Complex>> b;
            for (auto& m : lv) b.push_back(cmat_from_json(m));
            v.push_back(b);
        }
        return v;
    };
    try {
        TriangularCoords<Complex> t;
        t.g = cmat_from_json(j.at("g"));
        t.h = cmat_from_json(j.at("h"));
        t.X = levels(j.at("X"));
        t.nu = levels(j.at("nu"));
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("coordinates: ") + e.what());
    }
}

Json to_json(const ConnectionOnP1& c) {
    Json poles = Json::array();
    for (auto& p : c.poles) {
        Json co = Json::array();
        for (auto& m : p.coeffs) co.push_back(to_json(m));
        poles.push_back({{"point", to_json(p.point)}, {"order", p.coeffs.size()}, {"coeffs", co}});
    }
    return {{"n", c.n}, {"poles", poles}};
}

Json to_json(const DSPSolution& s, const DSPInstance& in) {
    Json coords = Json::array();
    for (auto& t : s.coords) coords.push_back(to_json(t));
    return {{"instance", to_json(in)},   {"residual", s.residual}, {"iterations", s.iterations},
            {"restarts_used", s.restarts_used}, {"coords", coords}, {"connection", to_json(s.conn)}};
}

DSPSolution solution_from_json(const Json& j, DSPInstance& in) {
    try {
        in = instance_from_json(j.at("instance"));
        DSPSolution s;
        for (auto& t : j.at("coords")) s.coords.push_back(coords_from_json(t));
        if (s.coords.size() != in.points.size()) throw DataError("one coordinate set per point");
        for (size_t a = 0; a < s.coords.size(); ++a) check_coords(s.coords[a], in.points[a].form);
        s.residual = j.value("residual", 0.0);
        s.iterations = j.value("iterations", 0);
        s.conn = assemble_connection(in, s.coords);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("solution: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("solution: ") + e.what());
    }
}

Json to_json(const UnfoldedDecomposition& d) {
    Json c = Json::array(), pieces = Json::array();
    for (auto& x : d.c) c.push_back(to_json(x));
    for (auto& p : d.pieces) {
        Json co = Json::array();
        for (auto& m : p.coeffs) co.push_back(to_json(m));
        pieces.push_back({{"pole", to_json(p.pole)},
                          {"indices", p.indices},
                          {"coeffs", co},
                          {"form", to_json(p.form)},
                          {"perm", p.perm},
                          {"type", to_string(spectral_type_of(p.form))}});
    }
    return {{"c", c}, {"stratum", d.stratum.str()}, {"pieces", pieces}};
}

Json to_json(const UnfoldingDiagram& d) {
    Json v = Json::array(), e = Json::array();
    for (size_t i = 0; i < d.vertices.size(); ++i) {
        Json parts = Json::array();
        for (auto& p : d.vertices[i]) parts.push_back(p.str());
        v.push_back({{"id", i}, {"partitions", parts}, {"label", to_string(d.labels[i])}});
    }
    for (auto& [a, b] : d.edges) e.push_back(Json::array({a, b}));
    return {{"vertices", v}, {"edges", e}};
}

Json to_json(const ReducedDiagram& d) {
    Json v = Json::array(), e = Json::array();
    for (size_t i = 0; i < d.labels.size(); ++i) {
        Json kns;
        try {
            kns = to_kns(d.labels[i]);
        } catch (const KnsError&) {
            kns = nullptr;
        }
        v.push_back({{"id", i}, {"label", to_string(d.labels[i])}, {"kns", kns}, {"members", d.members[i].size()}});
    }
    for (auto& [a, b] : d.edges) e.push_back(Json::array({a, b}));
    return {{"vertices", v}, {"edges", e}};
}

Json to_json(const VerifyReport& r) {
    return {{"residue_sum", r.residue_sum}, {"irreducible", r.irreducible}, {"spectral", r.spectral},
            {"residue_error", r.residue_error}, {"spectral_error", r.spectral_error},
            {"failures", r.failures}, {"ok", r.ok()}};
}

Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open " + path);
    try {
        return Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

}  // namespace unfold
