#include "hgcalc/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace hgcalc {

int RootedTree::leaf_count() const {
    if (is_leaf()) return 1;
    int n = 0;
    for (auto& c : children) n += c.leaf_count();
    return n;
}

int RootedTree::vertex_count() const {
    if (is_leaf()) return 0;
    int n = 1;
    for (auto& c : children) n += c.vertex_count();
    return n;
}

std::string RootedTree::key() const {
    if (is_leaf()) return std::to_string(leaf);
    std::vector<std::string> ks;
    ks.reserve(children.size());
    for (auto& c : children) ks.push_back(c.key());
    std::sort(ks.begin(), ks.end());
    std::string out = "(";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (i) out += ",";
        out += ks[i];
    }
    out += ")";
    return out;
}

RootedTree RootedTree::canonical() const {
    if (is_leaf()) return *this;
    std::vector<RootedTree> ch;
    ch.reserve(children.size());
    for (auto& c : children) ch.push_back(c.canonical());
    std::sort(ch.begin(), ch.end(),
              [](const RootedTree& a, const RootedTree& b) { return a.key() < b.key(); });
    return node(std::move(ch));
}

void RootedTree::leaf_order(std::vector<int>& out) const {
    if (is_leaf()) {
        out.push_back(leaf);
        return;
    }
    for (auto& c : children) c.leaf_order(out);
}

namespace {

RootedTree parse_impl(const std::string& s, std::size_t& pos) {
    if (pos >= s.size()) throw std::invalid_argument("tree: unexpected end of input");
    if (s[pos] == '(') {
        ++pos;
        std::vector<RootedTree> ch;
        while (true) {
            ch.push_back(parse_impl(s, pos));
            if (pos >= s.size()) throw std::invalid_argument("tree: missing ')'");
            if (s[pos] == ',') {
                ++pos;
                continue;
            }
            if (s[pos] == ')') {
                ++pos;
                break;
            }
            throw std::invalid_argument("tree: unexpected character");
        }
        if (ch.size() < 2) throw std::invalid_argument("tree: internal vertex of arity < 2");
        return RootedTree::node(std::move(ch));
    }
    std::size_t start = pos;
    while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw std::invalid_argument("tree: expected leaf index");
    return RootedTree::leaf_node(std::stoi(s.substr(start, pos - start)));
}

// set partitions into >= 2 blocks
void partitions_into_blocks(const std::vector<int>& labels,
                            std::vector<std::vector<std::vector<int>>>& out) {
    std::vector<std::vector<int>> blocks;
    // standard restricted-growth enumeration; first element pinned to block 0
    std::vector<int> assign(labels.size(), 0);
    auto emit = [&]() {
        int nb = *std::max_element(assign.begin(), assign.end()) + 1;
        if (nb < 2) return;
        std::vector<std::vector<int>> bl(nb);
        for (std::size_t i = 0; i < labels.size(); ++i) bl[assign[i]].push_back(labels[i]);
        out.push_back(std::move(bl));
    };
    // recursive restricted growth strings
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int maxb) {
        if (i == labels.size()) {
            emit();
            return;
        }
        for (int b = 0; b <= maxb + 1; ++b) {
            assign[i] = b;
            rec(i + 1, std::max(maxb, b));
        }
    };
    if (labels.empty()) return;
    assign[0] = 0;
    rec(1, 0);
}

}  // namespace

RootedTree RootedTree::parse(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    std::size_t pos = 0;
    RootedTree r = parse_impl(t, pos);
    if (pos != t.size()) throw std::invalid_argument("tree: trailing input");
    return r;
}

std::vector<RootedTree> enumerate_trees(const std::vector<int>& labels, int max_vertices) {
    if (labels.size() == 1) return {RootedTree::leaf_node(labels[0])};
    if (max_vertices < 1) return {};
    std::vector<RootedTree> out;
    std::vector<std::vector<std::vector<int>>> parts;
    partitions_into_blocks(labels, parts);
    for (auto& blocks : parts) {
        // per-block choices; singleton blocks are leaves
        std::vector<std::vector<RootedTree>> choices;
        bool feasible = true;
        for (auto& b : blocks) {
            auto sub = enumerate_trees(b, max_vertices - 1);
            if (sub.empty()) {
                feasible = false;
                break;
            }
            choices.push_back(std::move(sub));
        }
        if (!feasible) continue;
        std::vector<std::size_t> idx(choices.size(), 0);
        while (true) {
            std::vector<RootedTree> ch;
            int vtx = 1;
            for (std::size_t i = 0; i < choices.size(); ++i) {
                ch.push_back(choices[i][idx[i]]);
                vtx += ch.back().vertex_count();
            }
            if (vtx <= max_vertices) out.push_back(RootedTree::node(std::move(ch)).canonical());
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    return out;
}

std::vector<RootedTree> contractions(const RootedTree& t) {
    std::vector<RootedTree> out;
    if (t.is_leaf()) return out;
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        const RootedTree& c = t.children[i];
        if (!c.is_leaf()) {
            // contract the edge to child i: splice its children into ours
            std::vector<RootedTree> ch;
            for (std::size_t j = 0; j < t.children.size(); ++j) {
                if (j == i) {
                    for (auto& g : c.children) ch.push_back(g);
                } else {
                    ch.push_back(t.children[j]);
                }
            }
            out.push_back(RootedTree::node(std::move(ch)));
        }
        // contractions inside child i
        for (auto& sub : contractions(c)) {
            std::vector<RootedTree> ch = t.children;
            ch[i] = sub;
            out.push_back(RootedTree::node(std::move(ch)));
        }
    }
    return out;
}

namespace {

// replace the subtree at `path` with leaf 0
RootedTree replace_at(const RootedTree& t, const std::vector<int>& path, std::size_t depth) {
    if (depth == path.size()) return RootedTree::leaf_node(0);
    RootedTree copy = t;
    copy.children[path[depth]] = replace_at(t.children[path[depth]], path, depth + 1);
    return copy;
}

void collect_decompositions(const RootedTree& root, const RootedTree& t, std::vector<int>& path,
                            std::vector<TreeDecomposition>& out) {
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        const RootedTree& c = t.children[i];
        if (!c.is_leaf()) {
            path.push_back(static_cast<int>(i));
            out.push_back({replace_at(root, path, 0), c});
            collect_decompositions(root, c, path, out);
            path.pop_back();
        }
    }
}

}  // namespace

std::vector<TreeDecomposition> decompositions(const RootedTree& t) {
    std::vector<TreeDecomposition> out;
    if (t.is_leaf()) return out;
    std::vector<int> path;
    collect_decompositions(t, t, path, out);
    return out;
}

namespace {

// returns (pure shape string, original leaf labels left-to-right)
std::pair<std::string, std::vector<int>> shape_sort(const RootedTree& t, RootedTree& built) {
    if (t.is_leaf()) {
        built = t;
        return {"L", {t.leaf}};
    }
    std::vector<std::tuple<std::string, std::vector<int>, RootedTree>> ch;
    for (auto& c : t.children) {
        RootedTree b;
        auto [s, labels] = shape_sort(c, b);
        ch.emplace_back(s, labels, b);
    }
    std::sort(ch.begin(), ch.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    std::string shape = "(";
    std::vector<int> labels;
    std::vector<RootedTree> kids;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i) shape += ",";
        shape += std::get<0>(ch[i]);
        for (int l : std::get<1>(ch[i])) labels.push_back(l);
        kids.push_back(std::get<2>(ch[i]));
    }
    shape += ")";
    built = RootedTree::node(std::move(kids));
    return {shape, labels};
}

void renumber(RootedTree& t, int& next) {
    if (t.is_leaf()) {
        t.leaf = next++;
        return;
    }
    for (auto& c : t.children) renumber(c, next);
}

}  // namespace

ShapeForm shape_canonical(const RootedTree& t) {
    RootedTree built;
    auto [shape, labels] = shape_sort(t, built);
    int next = 1;
    renumber(built, next);
    return ShapeForm{std::move(built), std::move(labels)};
}

std::vector<std::vector<int>> shape_automorphisms(const RootedTree& canonical_tree) {
    int r = canonical_tree.leaf_count();
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i + 1;
    std::vector<std::vector<int>> out;
    std::string key = canonical_tree.canonical().key();
    do {
        // relabel leaf i -> perm[i-1]
        std::function<RootedTree(const RootedTree&)> relabel = [&](const RootedTree& t) {
            if (t.is_leaf()) return RootedTree::leaf_node(perm[t.leaf - 1]);
            std::vector<RootedTree> ch;
            for (auto& c : t.children) ch.push_back(relabel(c));
            return RootedTree::node(std::move(ch));
        };
        if (relabel(canonical_tree).canonical().key() == key) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace hgcalc
