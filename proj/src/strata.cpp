#include "unfold/strata.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace unfold {

// ---- set partitions ----

int SetPartition::ground_size() const {
    int s = 0;
    for (auto& b : blocks) s += static_cast<int>(b.size());
    return s;
}

std::vector<int> SetPartition::block_of() const {
    std::vector<int> r(ground_size(), -1);
    for (size_t j = 0; j < blocks.size(); ++j)
        for (int i : blocks[j]) r.at(i) = static_cast<int>(j);
    return r;
}

void SetPartition::normalize(int size) {
    std::vector<int> seen(size, 0);
    for (auto& b : blocks) {
        if (b.empty()) throw std::invalid_argument("set partition: empty block");
        std::sort(b.begin(), b.end());
        for (int i : b) {
            if (i < 0 || i >= size) throw std::invalid_argument("set partition: element out of range");
            if (seen[i]++) throw std::invalid_argument("set partition: blocks overlap");
        }
    }
    for (int i = 0; i < size; ++i)
        if (!seen[i]) throw std::invalid_argument("set partition: not a cover");
    std::sort(blocks.begin(), blocks.end(), [](auto& a, auto& b) { return a.front() < b.front(); });
}

std::string SetPartition::str() const {
    std::string s;
    for (auto& b : blocks) {
        s += "{";
        for (size_t t = 0; t < b.size(); ++t) {
            if (t) s += ",";
            s += std::to_string(b[t]);
        }
        s += "}";
    }
    return s;
}

SetPartition SetPartition::parse(const std::string& in) {
    SetPartition p;
    std::vector<int> cur;
    std::string num;
    bool braces = in.find('{') != std::string::npos;
    auto flush_num = [&] {
        if (!num.empty()) { cur.push_back(std::stoi(num)); num.clear(); }
    };
    auto flush_block = [&] {
        flush_num();
        if (!cur.empty()) { p.blocks.push_back(cur); cur.clear(); }
    };
    for (char ch : in) {
        if (std::isdigit(static_cast<unsigned char>(ch))) num.push_back(ch);
        else if (ch == ',' ) flush_num();
        else if (ch == '}' || ch == '|' || (!braces && ch == ';')) flush_block();
        else if (ch == '{' || std::isspace(static_cast<unsigned char>(ch))) flush_num();
        else throw std::invalid_argument(std::string("set partition: bad character '") + ch + "'");
    }
    flush_block();
    int size = p.ground_size();
    p.normalize(size);
    return p;
}

SetPartition SetPartition::finest(int size) {
    SetPartition p;
    for (int i = 0; i < size; ++i) p.blocks.push_back({i});
    return p;
}

SetPartition SetPartition::trivial(int size) {
    SetPartition p;
    p.blocks.emplace_back();
    for (int i = 0; i < size; ++i) p.blocks[0].push_back(i);
    return p;
}

std::vector<SetPartition> partitions(int k) {
    if (k < 0) throw std::invalid_argument("partitions: k must be nonnegative");
    int size = k + 1;
    std::vector<SetPartition> out;
    std::vector<int> rgs(size, 0);
    std::function<void(int, int)> rec = [&](int pos, int maxb) {
        if (pos == size) {
            SetPartition p;
            p.blocks.resize(maxb + 1);
            for (int i = 0; i < size; ++i) p.blocks[rgs[i]].push_back(i);
            out.push_back(std::move(p));
            return;
        }
        for (int b = 0; b <= maxb + 1; ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(maxb, b));
        }
    };
    rgs[0] = 0;
    rec(1, 0);
    return out;
}

bool refines(const SetPartition& fine, const SetPartition& coarse) {
    if (fine.ground_size() != coarse.ground_size()) throw std::invalid_argument("refines: ground-set mismatch");
    auto cb = coarse.block_of();
    for (auto& b : fine.blocks)
        for (int i : b)
            if (cb[i] != cb[b.front()]) return false;
    return true;
}

bool covers(const SetPartition& fine, const SetPartition& coarse) {
    return fine.blocks.size() == coarse.blocks.size() + 1 && refines(fine, coarse);
}

SetPartition stratum_of(const std::vector<QQi>& c) {
    SetPartition p;
    std::vector<bool> used(c.size(), false);
    for (size_t i = 0; i < c.size(); ++i) {
        if (used[i]) continue;
        std::vector<int> b;
        for (size_t j = i; j < c.size(); ++j)
            if (!used[j] && c[j] == c[i]) { used[j] = true; b.push_back(static_cast<int>(j)); }
        p.blocks.push_back(b);
    }
    return p;
}

// ---- hyperplane polynomials ----

static void poly_add(Poly& p, const std::vector<int>& e, const QQi& v) {
    if (v.is_zero()) return;
    auto it = p.find(e);
    if (it == p.end()) p.emplace(e, v);
    else {
        it->second += v;
        if (it->second.is_zero()) p.erase(it);
    }
}

static Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ea, va] : a)
        for (auto& [eb, vb] : b) {
            std::vector<int> e(ea.size());
            for (size_t t = 0; t < e.size(); ++t) e[t] = ea[t] + eb[t];
            poly_add(r, e, va * vb);
        }
    return r;
}

QQi eval_poly(const Poly& p, const std::vector<QQi>& x) {
    QQi s(0);
    for (auto& [e, v] : p) {
        QQi t = v;
        for (size_t i = 0; i < e.size(); ++i)
            for (int m = 0; m < e[i]; ++m) t *= x[i];
        s += t;
    }
    return s;
}

std::vector<HyperplanePoly> hyperplane_polys(const CanonicalForm& h, RootSet roots) {
    if (!is_sorted_form(h)) throw std::invalid_argument("hyperplane_polys: form is not sorted");
    int k = h.k(), nv = k + 1;
    std::vector<HyperplanePoly> out;
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x + 1 < h.n; ++x) pairs.emplace_back(x, x + 1);
    if (roots == RootSet::Positive)
        for (int x = 0; x < h.n; ++x)
            for (int y = x + 2; y < h.n; ++y) pairs.emplace_back(x, y);
    for (auto [ra, rb] : pairs) {
        std::vector<QQi> a(k + 1);
        int d = -1;
        for (int i = 0; i <= k; ++i) {
            a[i] = h.H[i][ra] - h.H[i][rb];
            if (!a[i].is_zero()) d = i;
        }
        if (d < 0) continue;  // alpha in Pi_0
        for (int i = 0; i <= d; ++i) {
            Poly f;
            for (int t = i; t <= d; ++t) {
                Poly term;
                term.emplace(std::vector<int>(nv, 0), a[t]);
                for (int nu = t + 1; nu <= d; ++nu) {
                    Poly lin;
                    std::vector<int> ei(nv, 0), en(nv, 0);
                    ei[i] = 1;
                    en[nu] = 1;
                    lin.emplace(ei, QQi(1));
                    lin.emplace(en, QQi(-1));
                    term = poly_mul(term, lin);
                }
                for (auto& [e, v] : term) poly_add(f, e, v);
            }
            out.push_back({rb == ra + 1 ? ra : -1, ra, rb, i, d, std::move(f)});
        }
    }
    return out;
}

bool in_BH(const std::vector<HyperplanePoly>& polys, const std::vector<QQi>& c) {
    for (auto& p : polys)
        if (eval_poly(p.poly, c).is_zero()) return false;
    return true;
}

bool in_BH(const CanonicalForm& h, const std::vector<QQi>& c, RootSet roots) {
    if (static_cast<int>(c.size()) != h.k() + 1) throw std::invalid_argument("in_BH: parameter length");
    return in_BH(hyperplane_polys(sort_to_fundamental_domain(h), roots), c);
}

// ---- partial fractions ----

UnfoldedDecomposition partial_fractions(const CanonicalForm& h, const std::vector<QQi>& c) {
    int k = h.k(), n = h.n;
    if (static_cast<int>(c.size()) != k + 1) throw std::invalid_argument("partial_fractions: parameter length");
    UnfoldedDecomposition dec;
    dec.c = c;
    dec.stratum = stratum_of(c);
    auto bof = dec.stratum.block_of();
    for (size_t j = 0; j < dec.stratum.blocks.size(); ++j) {
        const auto& blk = dec.stratum.blocks[j];
        int m = static_cast<int>(blk.size());
        QQi p = c[blk.front()];
        UnfoldedPiece piece;
        piece.pole = p;
        piece.indices = blk;
        piece.coeffs.assign(m, Mat<QQi>(n, n));
        // Taylor coefficients at p of 1/q_i, q_i = prod over l <= i outside the block of (z - c_l)
        std::vector<QQi> taylor(m, QQi(0));
        taylor[0] = QQi(1);
        int a = 0;
        for (int i = 0; i <= k; ++i) {
            if (bof[i] == static_cast<int>(j)) ++a;
            else {
                // multiply by 1/(w + (p - c_i)) = sum_t (-1)^t w^t / (p - c_i)^{t+1}
                QQi d = p - c[i];
                QQi inv = QQi(1) / d;
                std::vector<QQi> s(m);
                QQi pw = inv;
                for (int t = 0; t < m; ++t) {
                    s[t] = (t % 2 == 0) ? pw : -pw;
                    pw *= inv;
                }
                std::vector<QQi> r(m, QQi(0));
                for (int x = 0; x < m; ++x)
                    for (int y = 0; x + y < m; ++y) r[x + y] += taylor[x] * s[y];
                taylor = std::move(r);
            }
            if (a == 0) continue;
            for (int nu = 0; nu < a; ++nu) {
                const QQi& coef = taylor[a - 1 - nu];
                if (coef.is_zero()) continue;
                for (int x = 0; x < n; ++x) piece.coeffs[nu](x, x) += coef * h.H[i][x];
                if (i == 0)
                    for (int x = 0; x < n; ++x)
                        for (int y = 0; y < n; ++y) piece.coeffs[nu](x, y) += coef * h.J0(x, y);
            }
        }
        CanonicalForm f;
        f.n = n;
        f.H.assign(m, std::vector<QQi>(n));
        for (int nu = 0; nu < m; ++nu)
            for (int x = 0; x < n; ++x) f.H[nu][x] = piece.coeffs[nu](x, x);
        f.J0 = (j == 0) ? h.J0 : Mat<QQi>(n, n);
        f.validate();
        auto sorted = sort_with_permutation(f);
        piece.form = std::move(sorted.form);
        piece.perm = std::move(sorted.perm);
        dec.pieces.push_back(std::move(piece));
    }
    return dec;
}

// ---- verification ----

// Tree canonical form of a spectral type up to coordinate permutation (Weyl group of GL_n).
static std::string weyl_key(const AbstractSpectralType& s) {
    int n = s.root->gl_n;
    std::function<std::string(int, int, int)> rec = [&](int lo, int size, int level) -> std::string {
        if (level < 0) return "x";
        auto comp = subset_to_composition(n, s.pi[level]);
        std::vector<std::string> kids;
        int pos = 0;
        size_t bidx = 0;
        for (int b : comp) {
            if (pos >= lo && pos + b <= lo + size) {
                if (level == 0) {
                    std::string leaf = "[";
                    for (int x : s.nilpotent[bidx]) leaf += std::to_string(x) + ".";
                    kids.push_back(leaf + "]");
                } else {
                    kids.push_back(rec(pos, b, level - 1));
                }
            }
            pos += b;
            ++bidx;
        }
        std::sort(kids.begin(), kids.end());
        std::string out = "(";
        for (auto& c : kids) out += c;
        return out + ")";
    };
    return rec(0, n, s.k());
}

static AbstractSpectralType inherited_type(const UnfoldedPiece& piece, const CanonicalForm& h, bool carries_j0) {
    int n = h.n, m = static_cast<int>(piece.coeffs.size());
    std::vector<SimpleSubset> levels;  // top to bottom
    for (int nu = m - 1; nu >= 0; --nu) {
        SimpleSubset s = 0;
        for (int j = 0; j + 1 < n; ++j) {
            bool zero = true;
            for (int mu = nu; mu < m; ++mu)
                if (piece.coeffs[mu](j, j) != piece.coeffs[mu](j + 1, j + 1)) { zero = false; break; }
            if (zero) s |= SimpleSubset(1) << j;
        }
        levels.push_back(s);
    }
    NilpotentOrbitLabel lab;
    auto comp = subset_to_composition(n, levels.back());
    int lo = 0;
    for (int b : comp) {
        lab.push_back(carries_j0 ? jordan_type(h.J0, lo, b) : std::vector<int>(b, 1));
        lo += b;
    }
    return make_gl_type(n, levels, lab);
}

SpecDecompResult verify_spectral_decomposition(const CanonicalForm& h0, const std::vector<QQi>& c) {
    CanonicalForm h = sort_to_fundamental_domain(h0);
    auto sp = spectral_type_of(h);
    auto dec = partial_fractions(h, c);
    auto expected = unfold_spectral(sp, dec.stratum);
    SpecDecompResult res;
    for (size_t j = 0; j < dec.pieces.size(); ++j) {
        auto got = inherited_type(dec.pieces[j], h, j == 0);
        res.collection.push_back(got);
        if (!(got == expected[j])) {
            res.mismatch = MismatchReport{static_cast<int>(j), to_string(expected[j]), to_string(got),
                                          "inherited-order spectral type differs"};
            return res;
        }
        auto sorted_type = spectral_type_of(dec.pieces[j].form);
        if (weyl_key(sorted_type) != weyl_key(expected[j])) {
            res.mismatch = MismatchReport{static_cast<int>(j), to_string(expected[j]), to_string(sorted_type),
                                          "sorted piece is not Weyl-equivalent"};
            return res;
        }
    }
    res.ok = true;
    return res;
}

std::pair<int, int> delta_sum_check(const CanonicalForm& h0, const std::vector<QQi>& c) {
    CanonicalForm h = sort_to_fundamental_domain(h0);
    auto dec = partial_fractions(h, c);
    int sum = 0;
    for (auto& p : dec.pieces) sum += delta(spectral_type_of(p.form));
    return {sum, delta(spectral_type_of(h))};
}

std::vector<QQi> sample_stratum(const CanonicalForm& h0, const SetPartition& p0, unsigned seed, int attempts) {
    CanonicalForm h = sort_to_fundamental_domain(h0);
    SetPartition p = p0;
    p.normalize(h.k() + 1);
    auto polys = hyperplane_polys(h, RootSet::Positive);
    std::mt19937_64 rng(seed);
    long long height = 4;
    for (int att = 0; att < attempts; ++att) {
        std::vector<QQi> vals;
        std::uniform_int_distribution<long long> num(-height, height), den(1, height);
        while (vals.size() < p.blocks.size()) {
            QQi v(Rational(num(rng), den(rng)));
            if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
        }
        std::vector<QQi> c(h.k() + 1);
        for (size_t j = 0; j < p.blocks.size(); ++j)
            for (int i : p.blocks[j]) c[i] = vals[j];
        if (in_BH(polys, c)) return c;
        if (att % 4 == 3) height *= 2;
    }
    throw SamplingExhausted("sample_stratum: attempt budget exhausted");
}

}  // namespace unfold
