#include "unfold/dsp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "unfold/strata.hpp"

namespace unfold {

namespace {

using EV = Eigen::VectorXcd;
using EM = Eigen::MatrixXcd;

std::vector<QQi> params_of(const DSPPoint& p) {
    return p.c.empty() ? std::vector<QQi>(p.form.k() + 1, QQi(0)) : p.c;
}

std::vector<Complex> cplx(const std::vector<QQi>& v) {
    std::vector<Complex> r;
    for (auto& x : v) r.push_back(to_complex(x));
    return r;
}

// Flattened chart of the product of orbits. The constant factor g of each chart is
// held at the identity: it does not change whether sum_a mu_a vanishes, and letting it
// float lets the solver approach 0 through degenerate conjugates of nilpotent residues.
struct System {
    const DSPInstance& inst;
    std::vector<ChartLayout> lays;
    std::vector<size_t> offset;
    std::vector<std::vector<Complex>> c;
    size_t dim = 0;
    int n = 0;

    explicit System(const DSPInstance& in) : inst(in), n(in.n()) {
        for (auto& p : in.points) {
            lays.emplace_back(p.form);
            offset.push_back(dim);
            dim += free_size(lays.back());
            c.push_back(cplx(params_of(p)));
        }
    }

    size_t free_size(const ChartLayout& lay) const { return lay.size() - static_cast<size_t>(n) * n; }

    template <class T>
    TriangularCoords<T> point(size_t a, const T* x) const {
        std::vector<T> v(static_cast<size_t>(n) * n, T(0));
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = T(1);
        v.insert(v.end(), x, x + free_size(lays[a]));
        return lays[a].unpack(v);
    }

    std::vector<TriangularCoords<Complex>> unpack(const EV& x) const {
        std::vector<TriangularCoords<Complex>> out;
        for (size_t a = 0; a < lays.size(); ++a) out.push_back(point<Complex>(a, x.data() + offset[a]));
        return out;
    }
    // Start from given coordinates: g is absorbed by conjugating the chart (g, X, nu, h) -> (1, X, nu, h).
    EV pack(const std::vector<TriangularCoords<Complex>>& t) const {
        EV x(dim);
        for (size_t a = 0; a < lays.size(); ++a) {
            auto v = lays[a].pack(t[a]);
            for (size_t i = 0; i < free_size(lays[a]); ++i) x[offset[a] + i] = v[static_cast<size_t>(n) * n + i];
        }
        return x;
    }

    EV residual(const EV& x) const {
        auto t = unpack(x);
        Mat<Complex> m(n, n);
        for (size_t a = 0; a < lays.size(); ++a) m += moment(t[a], inst.points[a].form, c[a]);
        return Eigen::Map<EV>(m.a.data(), n * n);
    }

    EM jacobian(const EV& x) const {
        EM j(n * n, dim);
        for (size_t a = 0; a < lays.size(); ++a) {
            std::vector<Dual> ca;
            for (auto& v : c[a]) ca.push_back(Dual(v));
            size_t sz = free_size(lays[a]);
            for (size_t p = 0; p < sz; ++p) {
                std::vector<Dual> v;
                for (size_t i = 0; i < sz; ++i) v.push_back(Dual(x[offset[a] + i], i == p ? 1.0 : 0.0));
                auto m = moment(point<Dual>(a, v.data()), inst.points[a].form, ca);
                for (int e = 0; e < n * n; ++e) j(e, offset[a] + p) = m.a[e].d;
            }
        }
        return j;
    }
};

struct LMResult {
    EV x;
    double residual = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

double safe_norm(const EV& r) {
    double v = r.norm();
    return std::isfinite(v) ? v : 1e300;
}

// Levenberg-Marquardt with minimum-norm steps; accepted steps strictly decrease the residual.
LMResult levenberg_marquardt(const System& sys, EV x, const DSPOptions& opt) {
    LMResult out;
    EV r = sys.residual(x);
    double f = safe_norm(r), lambda = 1e-6;
    out.history.push_back(f);
    int it = 0, slow = 0;
    for (; it < opt.max_iter && f >= opt.tol; ++it) {
        EM j = sys.jacobian(x);
        EM jjh = j * j.adjoint();
        bool accepted = false;
        while (lambda < 1e12) {
            EM a = jjh;
            a.diagonal().array() += lambda;
            EV step = -j.adjoint() * a.ldlt().solve(r);
            EV xn = x + step;
            EV rn = sys.residual(xn);
            double fn = safe_norm(rn);
            if (fn < f) {
                // linear-rate progress means a singular zero; give up and let a restart try
                slow = fn > opt.stall_ratio * f ? slow + 1 : 0;
                x = xn;
                r = rn;
                f = fn;
                lambda = std::max(lambda / 10, 1e-15);
                out.history.push_back(f);
                accepted = true;
                break;
            }
            lambda *= 10;
        }
        if (!accepted || slow >= opt.stall_steps) break;
    }
    out.x = x;
    out.residual = f;
    out.iterations = it;
    out.converged = f < opt.tol;
    return out;
}

EV random_start(const System& sys, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    std::vector<TriangularCoords<Complex>> t;
    for (auto& lay : sys.lays) t.push_back(lay.identity<Complex>());
    EV x = sys.pack(t);
    for (auto& v : x) v += Complex(nd(rng), nd(rng));
    return x;
}

// Orthonormal span growth for the Burnside test.
struct SpanBuilder {
    std::vector<EV> basis;
    double tol;
    bool add(EV v) {
        double nv = v.norm();
        if (nv == 0) return false;
        v /= nv;
        for (int pass = 0; pass < 2; ++pass)
            for (auto& b : basis) v -= b.dot(v) * b;
        double r = v.norm();
        if (r <= tol) return false;
        basis.push_back(v / r);
        return true;
    }
};

}  // namespace

Mat<Complex> ConnectionOnP1::residue_sum() const {
    Mat<Complex> s(n, n);
    for (auto& p : poles)
        if (!p.coeffs.empty()) s += p.coeffs[0];
    return s;
}

Mat<Complex> ConnectionOnP1::eval(Complex z) const {
    Mat<Complex> s(n, n);
    for (auto& p : poles) {
        Complex w = Complex(1) / (z - p.point), pw = w;
        for (auto& a : p.coeffs) {
            s += pw * a;
            pw *= w;
        }
    }
    return s;
}

std::vector<Mat<Complex>> ConnectionOnP1::all_coeffs() const {
    std::vector<Mat<Complex>> out;
    for (auto& p : poles) out.insert(out.end(), p.coeffs.begin(), p.coeffs.end());
    return out;
}

SpectralCollection DSPInstance::collection() const {
    SpectralCollection c;
    for (auto& p : points) c.push_back(spectral_type_of(p.form));
    return c;
}

void DSPInstance::validate() const {
    if (points.empty()) throw std::invalid_argument("instance: no points");
    for (size_t a = 0; a < points.size(); ++a) {
        auto& p = points[a];
        p.form.validate();
        if (p.form.n != n()) throw std::invalid_argument("instance: mixed n");
        if (!is_sorted_form(p.form)) throw std::invalid_argument("instance: form is not sorted");
        if (!p.c.empty() && static_cast<int>(p.c.size()) != p.form.k() + 1)
            throw std::invalid_argument("instance: parameter vector has wrong length");
        for (size_t b = 0; b < a; ++b)
            if (points[b].t == p.t) throw std::invalid_argument("instance: repeated base point");
    }
}

bool is_irreducible(const std::vector<Mat<Complex>>& mats, double tol) {
    if (mats.empty()) throw std::invalid_argument("is_irreducible: empty list");
    int n = mats[0].rows;
    if (n == 1) return true;
    std::vector<EM> gens;
    for (auto& m : mats) {
        EM e = Eigen::Map<const EM>(m.a.data(), n, n);
        double nm = e.norm();
        if (nm > 0) gens.push_back(e / nm);
    }
    SpanBuilder span{{}, tol};
    EM id = EM::Identity(n, n);
    span.add(Eigen::Map<EV>(id.data(), n * n));
    for (auto& g : gens) span.add(Eigen::Map<const EV>(g.data(), n * n));
    for (size_t i = 0; i < span.basis.size() && static_cast<int>(span.basis.size()) < n * n; ++i)
        for (auto& g : gens) {
            EM b = Eigen::Map<const EM>(span.basis[i].data(), n, n);
            EM p = b * g;
            span.add(Eigen::Map<EV>(p.data(), n * n));
        }
    return static_cast<int>(span.basis.size()) == n * n;
}

bool is_irreducible(const std::vector<Mat<QQi>>& mats) {
    if (mats.empty()) throw std::invalid_argument("is_irreducible: empty list");
    int n = mats[0].rows;
    if (n == 1) return true;
    std::vector<Mat<QQi>> basis;
    auto rank_of = [&](const std::vector<Mat<QQi>>& v) {
        Mat<QQi> m(static_cast<int>(v.size()), n * n);
        for (size_t i = 0; i < v.size(); ++i)
            for (int e = 0; e < n * n; ++e) m(static_cast<int>(i), e) = v[i].a[e];
        return rank(m);
    };
    auto add = [&](const Mat<QQi>& x) {
        basis.push_back(x);
        if (rank_of(basis) < static_cast<int>(basis.size())) basis.pop_back();
    };
    add(Mat<QQi>::identity(n));
    for (auto& m : mats) add(m);
    for (size_t i = 0; i < basis.size() && static_cast<int>(basis.size()) < n * n; ++i)
        for (auto& g : mats) add(basis[i] * g);
    return static_cast<int>(basis.size()) == n * n;
}

bool fuchs_check(const std::vector<CanonicalForm>& forms) {
    QQi s(0);
    for (auto& f : forms)
        for (auto& x : f.H[0]) s += x;
    return is_zero(s);
}

bool fuchs_check(const DSPInstance& inst) {
    std::vector<CanonicalForm> f;
    for (auto& p : inst.points) f.push_back(p.form);
    return fuchs_check(f);
}

Mat<Complex> total_moment(const DSPInstance& inst, const std::vector<TriangularCoords<Complex>>& coords) {
    Mat<Complex> m(inst.n(), inst.n());
    for (size_t a = 0; a < inst.points.size(); ++a)
        m += moment(coords[a], inst.points[a].form, cplx(params_of(inst.points[a])));
    return m;
}

ConnectionOnP1 assemble_connection(const DSPInstance& inst, const std::vector<TriangularCoords<Complex>>& coords) {
    ConnectionOnP1 conn;
    conn.n = inst.n();
    std::vector<QQi> where;
    for (size_t a = 0; a < inst.points.size(); ++a) {
        auto& pt = inst.points[a];
        auto c = params_of(pt);
        auto iota = eval_orbit_point(coords[a], pt.form, cplx(c));
        auto parts = crt_split(iota);
        auto blocks = node_blocks(c);
        for (size_t b = 0; b < parts.size(); ++b) {
            QQi pos = pt.t + c[blocks.blocks[b].front()];
            auto it = std::find(where.begin(), where.end(), pos);
            if (it == where.end()) {
                where.push_back(pos);
                conn.poles.push_back({to_complex(pos), parts[b].coeffs});
                continue;
            }
            auto& pole = conn.poles[it - where.begin()];
            auto& add = parts[b].coeffs;
            if (pole.coeffs.size() < add.size()) pole.coeffs.resize(add.size(), Mat<Complex>(conn.n, conn.n));
            for (size_t nu = 0; nu < add.size(); ++nu) pole.coeffs[nu] += add[nu];
        }
    }
    return conn;
}

namespace {

DSPSolution finish(const DSPInstance& inst, const System& sys, const LMResult& lm) {
    DSPSolution s;
    s.coords = sys.unpack(lm.x);
    s.conn = assemble_connection(inst, s.coords);
    s.residual = lm.residual;
    s.iterations = lm.iterations;
    s.history = lm.history;
    return s;
}

}  // namespace

DSPSolution solve_dsp(const DSPInstance& inst) {
    inst.validate();
    if (!fuchs_check(inst)) throw FuchsViolation("residue traces do not sum to zero");
    System sys(inst);
    std::mt19937_64 rng(inst.opt.seed);
    double best = 1e300;
    int total_it = 0;
    bool reducible = false;
    for (int r = 0; r <= inst.opt.restarts; ++r) {
        auto lm = levenberg_marquardt(sys, random_start(sys, rng, inst.opt.init_scale), inst.opt);
        total_it += lm.iterations;
        best = std::min(best, lm.residual);
        if (!lm.converged) continue;
        auto s = finish(inst, sys, lm);
        if (!is_irreducible(s.conn.all_coeffs(), inst.opt.irr_tol)) {
            reducible = true;
            continue;
        }
        s.restarts_used = r;
        return s;
    }
    if (reducible) throw ReducibleSolution("all converged restarts were reducible");
    throw NoConvergence(total_it, best);
}

DSPSolution correct(const DSPInstance& inst, std::vector<TriangularCoords<Complex>> start) {
    System sys(inst);
    auto lm = levenberg_marquardt(sys, sys.pack(start), inst.opt);
    if (!lm.converged) throw NoConvergence(lm.iterations, lm.residual, " in corrector");
    return finish(inst, sys, lm);
}

ContinuationResult continue_family(const DSPInstance& inst, const DSPSolution& sol,
                                   const std::vector<std::vector<QQi>>& target_c, int steps, const QQi& detour) {
    inst.validate();
    if (target_c.size() != inst.points.size()) throw std::invalid_argument("continue_family: one c per point");
    if (steps < 1) throw std::invalid_argument("continue_family: steps must be positive");
    ContinuationResult res;
    auto coords = sol.coords;
    DSPInstance cur = inst;
    // c(s) = phi(s) c*, phi(s) = s + i detour s(1-s); the step is halved when the corrector fails
    const QQi one(1), h0 = QQi(1) / QQi(steps), hmin = h0 / QQi(1 << 12);
    QQi s(0), ds = h0;
    int step = 0;
    while (!(s == one)) {
        QQi sn = s + ds;
        if (precedes(sn, one)) sn = one;
        DSPInstance trial = cur;
        QQi phi = sn + QQi(Rational(0), Rational(1)) * detour * sn * (one - sn);
        for (size_t a = 0; a < inst.points.size(); ++a) {
            std::vector<QQi> c;
            for (auto& x : target_c[a]) c.push_back(phi * x);
            if (static_cast<int>(c.size()) != inst.points[a].form.k() + 1)
                throw std::invalid_argument("continue_family: parameter vector has wrong length");
            if (!in_BH(inst.points[a].form, c)) throw PathLeftBH(step + 1);
            trial.points[a].c = c;
        }
        DSPSolution next;
        try {
            next = correct(trial, coords);
        } catch (const NoConvergence& e) {
            ds = ds / QQi(2);
            if (precedes(hmin, ds)) throw NoConvergence(e.iterations, e.best_residual, " at step " + std::to_string(step + 1));
            continue;
        }
        ++step;
        s = sn;
        cur = trial;
        coords = next.coords;
        res.steps.push_back({s, next.residual, next.iterations});
        std::vector<std::vector<QQi>> rec;
        for (auto& p : cur.points) rec.push_back(p.c);
        next.conn.path.push_back(rec);
        res.samples.push_back(next.conn);
        res.solution = next;
    }
    res.target = cur;
    bool types_ok = true;
    SpectralCollection start_types = inst.collection();
    for (size_t a = 0; a < cur.points.size(); ++a) {
        auto& pt = cur.points[a];
        auto dec = verify_spectral_decomposition(pt.form, pt.c);
        types_ok = types_ok && dec.ok;
        res.endpoint_types.insert(res.endpoint_types.end(), dec.collection.begin(), dec.collection.end());
        auto exp = unfold_spectral(spectral_type_of(pt.form), stratum_of(pt.c));
        res.expected_types.insert(res.expected_types.end(), exp.begin(), exp.end());
        auto fr = decompose_fiber(coords[a], pt.form, pt.c, 1e-8);
        for (auto& p : fr.poles) {
            p.pole += to_complex(pt.t);
            res.fiber.poles.push_back(p);
        }
        res.fiber.ok = (a == 0 || res.fiber.ok) && fr.ok;
    }
    res.endpoint_types = canonicalize(res.endpoint_types);
    res.expected_types = canonicalize(res.expected_types);
    res.rigidity_start = rigidity(start_types);
    res.rigidity_end = rigidity(res.endpoint_types);
    res.ok = types_ok && res.endpoint_types == res.expected_types && res.fiber.ok &&
             res.rigidity_start == res.rigidity_end &&
             is_irreducible(res.solution.conn.all_coeffs(), inst.opt.irr_tol);
    return res;
}

VerifyReport verify_solution(const ConnectionOnP1& conn, const DSPInstance& inst, double tol) {
    VerifyReport rep;
    int n = inst.n();
    auto rs = conn.residue_sum();
    double scale = 1;
    for (auto& m : conn.all_coeffs())
        for (auto& e : m.a) scale = std::max(scale, std::abs(e));
    for (auto& e : rs.a) rep.residue_error = std::max(rep.residue_error, std::abs(e));
    rep.residue_sum = rep.residue_error < tol * scale;
    if (!rep.residue_sum) rep.failures.push_back("residue sum is not zero");
    rep.irreducible = n >= 1 && !conn.poles.empty() && is_irreducible(conn.all_coeffs(), inst.opt.irr_tol);
    if (!rep.irreducible) rep.failures.push_back("coefficients have a common invariant subspace");
    rep.spectral = true;
    size_t expected_poles = 0;
    for (auto& pt : inst.points) {
        auto c = params_of(pt);
        auto dec = partial_fractions(pt.form, c);
        for (auto& piece : dec.pieces) {
            ++expected_poles;
            Complex where = to_complex(pt.t + piece.pole);
            const ConnectionPole* pole = nullptr;
            for (auto& p : conn.poles)
                if (std::abs(p.point - where) < 1e-12) pole = &p;
            if (!pole) {
                rep.spectral = false;
                rep.failures.push_back("missing pole");
                continue;
            }
            std::vector<std::vector<Complex>> expect;
            for (int j = 0; j < piece.form.n; ++j) {
                std::vector<Complex> t;
                for (auto& x : piece.form.tuple(j)) t.push_back(to_complex(x));
                expect.push_back(t);
            }
            double err = match_tuples(expect, formal_tuples(pole->coeffs));
            rep.spectral_error = std::max(rep.spectral_error, err);
            if (!(err < tol)) {
                rep.spectral = false;
                rep.failures.push_back("pole at " + (pt.t + piece.pole).str() + " is in the wrong orbit");
            }
        }
    }
    if (expected_poles != conn.poles.size()) {
        rep.spectral = false;
        rep.failures.push_back("pole count differs from the instance");
    }
    return rep;
}

}  // namespace unfold
