#include "unfold/spectral.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "unfold/strata.hpp"

namespace unfold {

std::shared_ptr<const RootSystemData> gl_root_ptr(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const RootSystemData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<const RootSystemData>(gl_root_data(n));
    cache[n] = p;
    return p;
}

AbstractSpectralType make_gl_type(int n, const std::vector<SimpleSubset>& top_to_bottom,
                                  NilpotentOrbitLabel nilpotent) {
    AbstractSpectralType s;
    s.root = gl_root_ptr(n);
    s.pi.assign(top_to_bottom.rbegin(), top_to_bottom.rend());
    if (s.pi.empty()) throw std::invalid_argument("spectral type needs at least one level");
    s.nilpotent = nilpotent.empty() ? zero_label(subset_to_composition(n, s.pi[0])) : std::move(nilpotent);
    for (auto& part : s.nilpotent) std::sort(part.rbegin(), part.rend());
    s.validate();
    return s;
}

void AbstractSpectralType::validate() const {
    if (!root) throw std::invalid_argument("spectral type without root data");
    if (pi.empty()) throw std::invalid_argument("spectral type without levels");
    int r = root->rank();
    for (size_t i = 0; i < pi.size(); ++i) {
        if (r < 64 && (pi[i] >> r) != 0) throw std::invalid_argument("simple index out of range");
        if (i + 1 < pi.size() && (pi[i] & ~pi[i + 1]) != 0)
            throw std::invalid_argument("levels are not nested");
    }
    if (root->gl_n > 0) {
        auto comp = subset_to_composition(root->gl_n, pi[0]);
        if (nilpotent.size() != comp.size()) throw std::invalid_argument("nilpotent label block count");
        for (size_t b = 0; b < comp.size(); ++b)
            if (std::accumulate(nilpotent[b].begin(), nilpotent[b].end(), 0) != comp[b])
                throw std::invalid_argument("nilpotent label block size");
    } else if (!is_zero_label(nilpotent)) {
        throw std::invalid_argument("nontrivial nilpotent label needs GL_n root data");
    }
}

bool operator<(const AbstractSpectralType& a, const AbstractSpectralType& b) {
    if (a.k() != b.k()) return a.k() < b.k();
    for (int i = a.k(); i >= 0; --i)
        if (a.pi[i] != b.pi[i]) return a.pi[i] < b.pi[i];
    return a.nilpotent < b.nilpotent;
}

int irregularity(const AbstractSpectralType& s) {
    int total = 0;
    for (int i = 1; i <= s.k(); ++i) total += s.root->group_dim - levi_dim(*s.root, s.pi[i]);
    return total;
}

static int stabilizer_dim(const AbstractSpectralType& s) {
    if (s.root->gl_n > 0)
        return centralizer_dim(*s.root, subset_to_composition(s.root->gl_n, s.pi[0]), s.nilpotent);
    return levi_dim(*s.root, s.pi[0]);
}

int delta(const AbstractSpectralType& s) {
    return s.root->group_dim + irregularity(s) - stabilizer_dim(s);
}

int rigidity(const SpectralCollection& c) {
    if (c.empty()) throw std::invalid_argument("rigidity: empty collection");
    int sum = 0;
    for (auto& s : c) {
        if (s.root->group_dim != c.front().root->group_dim)
            throw std::invalid_argument("rigidity: mixed root data");
        sum += delta(s);
    }
    return 2 * c.front().root->group_dim - sum;
}

int moduli_dim(const SpectralCollection& c) {
    return 2 * c.front().root->center_dim - rigidity(c);
}

SpectralCollection unfold_spectral(const AbstractSpectralType& s, const SetPartition& p) {
    SetPartition q = p;
    q.normalize(s.k() + 1);
    SpectralCollection out;
    for (size_t j = 0; j < q.blocks.size(); ++j) {
        AbstractSpectralType t;
        t.root = s.root;
        for (int i : q.blocks[j]) t.pi.push_back(s.pi[i]);
        if (j == 0) t.nilpotent = s.nilpotent;
        else if (s.root->gl_n > 0) t.nilpotent = zero_label(subset_to_composition(s.root->gl_n, t.pi[0]));
        else t.nilpotent = s.nilpotent.empty() ? NilpotentOrbitLabel{} : s.nilpotent;
        out.push_back(std::move(t));
    }
    return out;
}

SpectralCollection canonicalize(SpectralCollection c) {
    std::stable_sort(c.begin(), c.end());
    return c;
}

static std::string subset_str(const RootSystemData& d, SimpleSubset s) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < d.rank(); ++i) {
        if (!((s >> i) & 1)) continue;
        if (!first) out += ",";
        first = false;
        if (d.gl_n > 0 && d.gl_n < 10) out += "e" + std::to_string(i + 1) + std::to_string(i + 2);
        else out += "a" + std::to_string(i + 1);
    }
    return out + "}";
}

std::string to_string(const AbstractSpectralType& s) {
    std::ostringstream os;
    os << "(";
    for (int i = s.k(); i >= 0; --i) {
        os << subset_str(*s.root, s.pi[i]);
        if (i > 0) os << ">";
    }
    os << ";";
    if (is_zero_label(s.nilpotent)) {
        os << "[0]";
    } else {
        os << "[";
        for (size_t b = 0; b < s.nilpotent.size(); ++b) {
            if (b) os << ",";
            for (int x : s.nilpotent[b]) os << x;
        }
        os << "]";
    }
    os << ")";
    return os.str();
}

std::string to_string(const SpectralCollection& c) {
    std::string out;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += to_string(c[i]);
    }
    return out;
}

}  // namespace unfold
