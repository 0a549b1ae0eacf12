#include "unfold/kns.hpp"

#include <cctype>
#include <functional>
#include <memory>
#include <numeric>

namespace unfold {

namespace {

struct Node {
    int leaf = 0;  // block size for leaves
    std::vector<std::unique_ptr<Node>> kids;
    int size() const {
        if (kids.empty()) return leaf;
        int s = 0;
        for (auto& k : kids) s += k->size();
        return s;
    }
};

struct Parser {
    const std::string& s;
    size_t pos;
    size_t end;

    // items until ')' or end
    void items(Node& parent) {
        while (pos < end) {
            char ch = s[pos];
            if (ch == ')') return;
            if (ch == '(') {
                ++pos;
                auto g = std::make_unique<Node>();
                items(*g);
                if (pos >= end || s[pos] != ')') throw BadCharacter("unbalanced parenthesis in \"" + s + "\"");
                ++pos;
                if (g->kids.empty()) throw BadCharacter("empty group in \"" + s + "\"");
                parent.kids.push_back(std::move(g));
            } else if (ch >= '1' && ch <= '9') {
                auto l = std::make_unique<Node>();
                l->leaf = ch - '0';
                parent.kids.push_back(std::move(l));
                ++pos;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos;
            } else {
                throw BadCharacter(std::string("unexpected character '") + ch + "'");
            }
        }
    }
};

void leaf_depths(const Node& n, int d, std::vector<int>& out) {
    for (auto& k : n.kids) {
        if (k->kids.empty()) out.push_back(d);
        else leaf_depths(*k, d + 1, out);
    }
}

// block sizes of the groups at the given depth (depth 0 = leaves' parent chain bottom)
void collect(const Node& n, int d, int want, std::vector<int>& out) {
    for (auto& k : n.kids) {
        if (d + 1 == want && !k->kids.empty()) out.push_back(k->size());
        else if (!k->kids.empty()) collect(*k, d + 1, want, out);
    }
}

AbstractSpectralType parse_point(const std::string& s, int& n) {
    Parser p{s, 0, s.size()};
    Node root;
    p.items(root);
    if (p.pos != s.size()) throw BadCharacter("unbalanced parenthesis in \"" + s + "\"");
    if (root.kids.empty()) throw BadCharacter("empty point");
    std::vector<int> depths;
    leaf_depths(root, 0, depths);
    for (int d : depths)
        if (d != depths.front()) throw NonUniformDepth("leaves at different depths in \"" + s + "\"");
    int k = depths.front();
    int size = root.size();
    if (n <= 0) n = size;
    if (size != n) throw SumMismatch("\"" + s + "\" sums to " + std::to_string(size) + ", expected " + std::to_string(n));
    std::vector<int> leaves;
    std::function<void(const Node&)> walk = [&](const Node& x) {
        for (auto& c : x.kids) {
            if (c->kids.empty()) leaves.push_back(c->leaf);
            else walk(*c);
        }
    };
    walk(root);
    std::vector<SimpleSubset> top_to_bottom;
    for (int i = k; i >= 1; --i) {
        std::vector<int> comp;
        collect(root, 0, k - i + 1, comp);
        top_to_bottom.push_back(composition_to_subset(comp));
    }
    top_to_bottom.push_back(composition_to_subset(leaves));
    return make_gl_type(n, top_to_bottom);
}

}  // namespace

SpectralCollection parse_kns(const std::string& s, int n) {
    SpectralCollection out;
    size_t start = 0;
    while (true) {
        size_t comma = s.find(',', start);
        std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_point(part, n));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string to_kns(const AbstractSpectralType& t) {
    if (!t.root || t.root->gl_n <= 0) throw KnsError("notation exists for GL_n only");
    if (!is_zero_label(t.nilpotent)) throw KnsError("notation cannot express a nonzero nilpotent label");
    int n = t.root->gl_n, k = t.k();
    // render the blocks of Pi_level inside [lo, lo+len)
    std::function<std::string(int, int, int)> render = [&](int level, int lo, int len) {
        auto comp = subset_to_composition(n, t.pi[level]);
        std::string r;
        int pos = 0;
        for (int b : comp) {
            if (pos >= lo && pos + b <= lo + len) {
                if (level == 0) {
                    if (b > 9) throw KnsError("block larger than 9");
                    r += static_cast<char>('0' + b);
                } else {
                    r += "(" + render(level - 1, pos, b) + ")";
                }
            }
            pos += b;
        }
        return r;
    };
    return render(k, 0, n);
}

std::string to_kns(const SpectralCollection& c) {
    std::string r;
    for (size_t i = 0; i < c.size(); ++i) r += (i ? "," : "") + to_kns(c[i]);
    return r;
}

}  // namespace unfold
