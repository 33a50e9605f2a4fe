#pragma once

#include "ls_model.hpp"

#include <numeric>
#include <optional>

namespace confmodel {

// Graphs with external vertices 0..ext-1 (positions in the ambient U) and
// internal vertices ext..ext+i-1. Sign conventions come from reading a graph
// as the word
//     [external labels][internal tokens][edges]
// where the token of an internal vertex v with label a is v·ι_v(a), of degree
// |a| - n, and every edge has degree n - 1, with e_vu = (-1)^n e_uv.
struct Graph {
    int ext = 0;
    std::vector<int> labels;  // per vertex; unit label for unlabeled graphs
    std::vector<Edge> edges;  // canonical: u < v, sorted
    int internal() const { return static_cast<int>(labels.size()) - ext; }
    bool operator<(const Graph& o) const {
        return std::tie(ext, labels, edges) < std::tie(o.ext, o.labels, o.edges);
    }
    bool operator==(const Graph& o) const { return ext == o.ext && labels == o.labels && edges == o.edges; }
};

using GraphSum = std::map<Graph, Rational>;

enum class GraphFlavor {
    Unlabeled,  // graphs_n: contraction only, dead ends not contractible, no multiple edges
    Labeled,    // graphs_A: d_A + d_split - d_contr, dead ends contractible, ε-reduced
};

inline GraphFlavor parse_flavor(const std::string& s) {
    if (s == "graphs_n" || s == "unlabeled") return GraphFlavor::Unlabeled;
    if (s == "graphs_A" || s == "labeled") return GraphFlavor::Labeled;
    throw std::invalid_argument("unknown graph flavor: " + s);
}

// One factor of a graph word.
struct GItem {
    enum Kind { Label = 0, Token = 1, EdgeItem = 2 } kind;
    int a = 0;  // vertex (Label, Token) or first endpoint
    int b = 0;  // A-basis index (Label, Token) or second endpoint
};

using GWord = std::vector<GItem>;

class GraphSpace {
public:
    // Unlabeled graphs on the external names U.
    GraphSpace(int n, std::vector<int> U) : n_(n), U_(std::move(U)) { check_names(); }
    // Labeled graphs; the algebra must outlive the space.
    GraphSpace(const PdAlgebra& A, std::vector<int> U) : n_(A.n()), A_(&A), U_(std::move(U)) { check_names(); }

    int n() const { return n_; }
    bool labeled() const { return A_ != nullptr; }
    GraphFlavor flavor() const { return labeled() ? GraphFlavor::Labeled : GraphFlavor::Unlabeled; }
    const PdAlgebra* algebra() const { return A_; }
    const std::vector<int>& externals() const { return U_; }
    int ext() const { return static_cast<int>(U_.size()); }
    int unit() const { return A_ ? A_->unit() : 0; }
    int label_dim() const { return A_ ? A_->dim() : 1; }
    int label_degree(int a) const { return A_ ? A_->degree(a) : 0; }
    bool multi_edges_allowed() const { return labeled() && n_ % 2 != 0; }

    int item_degree(const GItem& it) const {
        switch (it.kind) {
            case GItem::Label: return label_degree(it.b);
            case GItem::Token: return label_degree(it.b) - n_;
            default: return n_ - 1;
        }
    }

    int degree(const Graph& g) const {
        int d = static_cast<int>(g.edges.size()) * (n_ - 1) - g.internal() * n_;
        for (int l : g.labels) d += label_degree(l);
        return d;
    }

    GWord word_of(const Graph& g) const {
        GWord w;
        for (int u = 0; u < g.ext; ++u)
            if (g.labels[u] != unit()) w.push_back({GItem::Label, u, g.labels[u]});
        for (int v = g.ext; v < static_cast<int>(g.labels.size()); ++v) w.push_back({GItem::Token, v, g.labels[v]});
        for (const auto& [x, y] : g.edges) w.push_back({GItem::EdgeItem, x, y});
        return w;
    }

    // Brings an arbitrary word to canonical graphs. Every internal vertex
    // must carry exactly one token. With `reduce`, internal components are
    // replaced by ε(label) (single vertex) or zero.
    void normalize_into(GWord w, int nint, const Rational& coef, GraphSum& out, bool reduce = true) const {
        if (coef == 0) return;
        const int ext = this->ext(), V = ext + nint;
        auto key = [&](const GItem& it) {
            if (it.kind == GItem::EdgeItem) return std::make_tuple(2, 0, 0);
            if (it.a < ext) {
                if (it.kind == GItem::Token) throw std::logic_error("token on an external vertex");
                return std::make_tuple(0, it.a, 0);
            }
            return std::make_tuple(1, it.a, it.kind == GItem::Token ? 0 : 1);
        };
        int sign = 1;
        for (std::size_t i = 1; i < w.size(); ++i)
            for (std::size_t j = i; j > 0 && key(w[j]) < key(w[j - 1]); --j) {
                if (item_degree(w[j]) % 2 && item_degree(w[j - 1]) % 2) sign = -sign;
                std::swap(w[j - 1], w[j]);
            }
        std::vector<AVec> lab(V);
        std::vector<bool> token(V, false);
        for (int u = 0; u < ext; ++u) lab[u] = AVec{{unit(), 1}};
        std::vector<Edge> edges;
        for (const auto& it : w) {
            if (it.kind == GItem::EdgeItem) {
                if (it.a == it.b) return;  // loop
                if (it.a < 0 || it.b < 0 || it.a >= V || it.b >= V) throw std::out_of_range("edge vertex");
                edges.push_back({it.a, it.b});
                continue;
            }
            if (it.a < 0 || it.a >= V) throw std::out_of_range("label vertex");
            if (it.kind == GItem::Token) {
                if (token[it.a]) throw std::logic_error("two tokens on one vertex");
                token[it.a] = true;
                lab[it.a] = AVec{{it.b, 1}};
                continue;
            }
            if (it.a >= ext && !token[it.a]) throw std::logic_error("label before token");
            if (A_) lab[it.a] = A_->mul(lab[it.a], A_->basis_vec(it.b));
            if (lab[it.a].empty()) return;
        }
        for (int v = ext; v < V; ++v)
            if (!token[v]) throw std::logic_error("internal vertex without token");
        Graph g;
        g.ext = ext;
        g.labels.assign(V, unit());
        expand(lab, 0, g, edges, coef * sign, out, reduce);
    }

    GraphSum normalize(const GWord& w, int nint, const Rational& coef = 1, bool reduce = true) const {
        GraphSum out;
        normalize_into(w, nint, coef, out, reduce);
        return out;
    }

    // Canonical form of a graph whose labels are final and whose edges are
    // in word order; the internal vertices are in token order.
    std::optional<std::pair<Graph, Rational>> canonicalize(const Graph& raw, bool reduce = true) const {
        Graph g = raw;
        Rational scalar = 1;
        if (reduce) {
            auto r = eps_reduce_raw(g);
            if (!r) return std::nullopt;
            scalar = *r;
            if (scalar == 0) return std::nullopt;
        }
        const int ext = g.ext, ni = g.internal();
        std::vector<int> perm(ni);
        std::iota(perm.begin(), perm.end(), 0);
        std::optional<Graph> best;
        int best_sign = 0;
        bool zero = false;
        do {
            int sign = 1;
            // token reordering
            for (int a = 0; a < ni; ++a)
                for (int b = a + 1; b < ni; ++b)
                    if (perm[a] > perm[b] && token_odd(g.labels[ext + a]) && token_odd(g.labels[ext + b])) sign = -sign;
            Graph h;
            h.ext = ext;
            h.labels = g.labels;
            for (int a = 0; a < ni; ++a) h.labels[ext + perm[a]] = g.labels[ext + a];
            auto mapv = [&](int v) { return v < ext ? v : ext + perm[v - ext]; };
            for (const auto& [x, y] : g.edges) {
                int u = mapv(x), v = mapv(y);
                if (u > v) {
                    std::swap(u, v);
                    if (n_ % 2) sign = -sign;
                }
                h.edges.push_back({u, v});
            }
            const bool odd_edges = (n_ - 1) % 2 != 0;
            for (std::size_t i = 1; i < h.edges.size(); ++i)
                for (std::size_t j = i; j > 0 && h.edges[j] < h.edges[j - 1]; --j) {
                    std::swap(h.edges[j - 1], h.edges[j]);
                    if (odd_edges) sign = -sign;
                }
            for (std::size_t i = 1; i < h.edges.size(); ++i)
                if (h.edges[i] == h.edges[i - 1] && (odd_edges || !multi_edges_allowed())) return std::nullopt;
            if (!best || h < *best) {
                best = std::move(h);
                best_sign = sign;
                zero = false;
            } else if (h == *best && sign != best_sign) {
                zero = true;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (zero) return std::nullopt;
        return std::make_pair(*best, Rational(best_sign) * scalar);
    }

    // Differential on a canonical graph.
    GraphSum d(const Graph& g, bool reduce = true) const {
        GraphSum out;
        const GWord w = word_of(g);
        const int ni = g.internal();
        std::vector<int> before(w.size() + 1, 0);
        for (std::size_t p = 0; p < w.size(); ++p) before[p + 1] = before[p] + item_degree(w[p]);
        auto replaced = [&](std::size_t p, std::initializer_list<GItem> repl) {
            GWord x(w.begin(), w.begin() + static_cast<long>(p));
            x.insert(x.end(), repl.begin(), repl.end());
            x.insert(x.end(), w.begin() + static_cast<long>(p) + 1, w.end());
            return x;
        };
        for (std::size_t p = 0; p < w.size(); ++p) {
            const GItem it = w[p];
            const int s = koszul(before[p]);
            if (it.kind == GItem::Label && A_) {
                for (const auto& [t, c] : A_->d(it.b))
                    normalize_into(replaced(p, {{GItem::Label, it.a, t}}), ni, c * s, out, reduce);
            } else if (it.kind == GItem::Token && A_) {
                for (const auto& [t, c] : A_->d(it.b))
                    normalize_into(replaced(p, {{GItem::Token, it.a, t}}), ni, c * s * koszul(n_), out, reduce);
            } else if (it.kind == GItem::EdgeItem && A_) {
                for (const auto& [pq, c] : A_->diagonal())
                    normalize_into(replaced(p, {{GItem::Label, it.a, pq.first}, {GItem::Label, it.b, pq.second}}), ni,
                                   c * s, out, reduce);
            }
        }
        // contraction of edges with an internal endpoint
        std::vector<int> valence(g.labels.size(), 0);
        for (const auto& [x, y] : g.edges) ++valence[x], ++valence[y];
        const std::size_t first_edge = w.size() - g.edges.size();
        for (std::size_t s = 0; s < g.edges.size(); ++s) {
            const auto [x, y] = g.edges[s];
            if (y < g.ext) continue;  // both external (x < y)
            const int r = y, k = x;   // remove r, keep k
            if (!A_ && (valence[r] == 1 || (k >= g.ext && valence[k] == 1))) continue;  // dead end
            const std::size_t pe = first_edge + s;
            int sign = koszul(static_cast<long long>(n_ - 1) * before[pe]) * koszul(n_);
            // token of r, moved to just after the edge, passes everything before it
            std::size_t pt = 0;
            while (!(w[pt].kind == GItem::Token && w[pt].a == r)) ++pt;
            const int ra = w[pt].b;
            sign *= koszul(static_cast<long long>(label_degree(ra) - n_) * before[pt]);
            GWord x2{{GItem::Label, k, ra}};
            for (std::size_t q = 0; q < w.size(); ++q) {
                if (q == pe || q == pt) continue;
                GItem it = w[q];
                auto ren = [&](int v) { return v == r ? k : (v > r ? v - 1 : v); };
                if (it.kind == GItem::EdgeItem) {
                    it.a = ren(it.a);
                    it.b = ren(it.b);
                } else {
                    it.a = ren(it.a);
                }
                x2.push_back(it);
            }
            int kk = k > r ? k - 1 : k;
            x2[0].a = kk;
            normalize_into(std::move(x2), ni - 1, Rational(-sign), out, reduce);
        }
        return out;
    }

    GraphSum d(const GraphSum& x, bool reduce = true) const {
        GraphSum out;
        for (const auto& [g, c] : x)
            for (const auto& [h, v] : d(g, reduce)) add_coef(out, h, c * v);
        return out;
    }

    // Z_ε applied to a sum of (possibly unreduced) canonical graphs.
    GraphSum eps_reduce(const GraphSum& x) const {
        GraphSum out;
        for (const auto& [g, c] : x) normalize_into(word_of(g), g.internal(), c, out, true);
        return out;
    }

    std::string graph_string(const Graph& g) const {
        std::string s = "[";
        for (std::size_t v = 0; v < g.labels.size(); ++v) {
            if (v) s += " ";
            s += static_cast<int>(v) < g.ext ? std::to_string(U_[v]) : "i" + std::to_string(v - g.ext);
            if (g.labels[v] != unit() && A_) s += ":" + A_->basis_name(g.labels[v]);
        }
        s += " |";
        for (const auto& [x, y] : g.edges) s += " " + vname(g, x) + "-" + vname(g, y);
        return s + "]";
    }

    std::string vname(const Graph& g, int v) const {
        return v < g.ext ? std::to_string(U_[v]) : "i" + std::to_string(v - g.ext);
    }

private:
    void check_names() {
        std::vector<int> s = U_;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw std::invalid_argument("repeated external vertex");
        if (s != U_) throw std::invalid_argument("external vertices must be sorted");
    }

    bool token_odd(int a) const { return (label_degree(a) - n_) % 2 != 0; }

    // ε-reduction on a raw graph; returns nullopt for zero, else the scalar.
    std::optional<Rational> eps_reduce_raw(Graph& g) const {
        const int V = static_cast<int>(g.labels.size());
        std::vector<int> parent(V);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        for (const auto& [x, y] : g.edges) parent[find(x)] = find(y);
        std::vector<bool> has_ext(V, false);
        std::vector<int> size(V, 0);
        for (int v = 0; v < V; ++v) {
            ++size[find(v)];
            if (v < g.ext) has_ext[find(v)] = true;
        }
        Rational scalar = 1;
        std::vector<int> removed;
        for (int v = g.ext; v < V; ++v) {
            int r = find(v);
            if (has_ext[r]) continue;
            if (size[r] > 1 || !A_) return std::nullopt;
            scalar *= A_->eps(g.labels[v]);  // the token has degree 0 when ε is nonzero
            if (scalar == 0) return std::nullopt;
            removed.push_back(v);
        }
        if (removed.empty()) return scalar;
        std::vector<int> newid(V, -1);
        Graph h;
        h.ext = g.ext;
        for (int v = 0; v < V; ++v)
            if (!std::binary_search(removed.begin(), removed.end(), v)) {
                newid[v] = static_cast<int>(h.labels.size());
                h.labels.push_back(g.labels[v]);
            }
        for (const auto& [x, y] : g.edges) h.edges.push_back({newid[x], newid[y]});
        g = std::move(h);
        return scalar;
    }

    void expand(const std::vector<AVec>& lab, std::size_t v, Graph& g, const std::vector<Edge>& edges, const Rational& c,
                GraphSum& out, bool reduce) const {
        if (v == lab.size()) {
            Graph raw = g;
            raw.edges = edges;
            Rational scalar = 1;
            if (reduce) {
                auto r = eps_reduce_raw(raw);
                if (!r) return;
                scalar = *r;
            }
            auto cf = canonicalize(raw, false);
            if (cf) add_coef(out, cf->first, c * scalar * cf->second);
            return;
        }
        for (const auto& [a, x] : lab[v]) {
            g.labels[v] = a;
            expand(lab, v + 1, g, edges, c * x, out, reduce);
        }
    }

    int n_;
    const PdAlgebra* A_ = nullptr;
    std::vector<int> U_;
};

// ---------------------------------------------------------------------------
// Enumeration

struct GraphBounds {
    int max_internal = 3;
    int max_edges = 6;
};

namespace detail {

// Sign-free structural key: minimal sorted edge list over internal relabelings.
inline std::vector<Edge> structure_key(int ext, int ni, const std::vector<Edge>& edges) {
    std::vector<int> perm(ni);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<std::vector<Edge>> best;
    do {
        std::vector<Edge> e;
        for (auto [x, y] : edges) {
            int u = x < ext ? x : ext + perm[x - ext], v = y < ext ? y : ext + perm[y - ext];
            e.push_back({std::min(u, v), std::max(u, v)});
        }
        std::sort(e.begin(), e.end());
        if (!best || e < *best) best = std::move(e);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

inline bool internal_attached(int ext, int V, const std::vector<Edge>& edges) {
    std::vector<int> parent(V);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& [x, y] : edges) parent[find(x)] = find(y);
    std::vector<bool> ok(V, false);
    for (int u = 0; u < ext; ++u) ok[find(u)] = true;
    for (int v = ext; v < V; ++v)
        if (!ok[find(v)]) return false;
    return true;
}

}  // namespace detail

// All nonzero canonical reduced graphs within the bounds, in a fixed order.
inline std::vector<Graph> enumerate_graphs(const GraphSpace& S, const GraphBounds& b) {
    std::set<Graph> found;
    const int ext = S.ext();
    for (int ni = 0; ni <= b.max_internal; ++ni) {
        const int V = ext + ni;
        std::vector<Edge> pairs;
        for (int u = 0; u < V; ++u)
            for (int v = u + 1; v < V; ++v) pairs.push_back({u, v});
        const int mult = S.multi_edges_allowed() ? b.max_edges : 1;
        std::set<std::vector<Edge>> seen;
        std::vector<Edge> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t p) {
            if (p == pairs.size()) {
                if (!detail::internal_attached(ext, V, cur)) return;
                if (!seen.insert(detail::structure_key(ext, ni, cur)).second) return;
                Graph g;
                g.ext = ext;
                g.labels.assign(V, S.unit());
                std::function<void(int)> lab = [&](int v) {
                    if (v == V) {
                        Graph raw = g;
                        raw.edges = cur;
                        if (auto cf = S.canonicalize(raw)) found.insert(cf->first);
                        return;
                    }
                    for (int a = 0; a < S.label_dim(); ++a) {
                        g.labels[v] = a;
                        lab(v + 1);
                    }
                };
                lab(0);
                return;
            }
            const std::size_t base = cur.size();
            for (int m = 0; m <= mult && static_cast<int>(base) + m <= b.max_edges; ++m) {
                rec(p + 1);
                cur.push_back(pairs[p]);
            }
            cur.resize(base);
        };
        rec(0);
    }
    std::vector<Graph> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const Graph& x, const Graph& y) {
        return std::make_tuple(x.internal(), x.edges.size()) < std::make_tuple(y.internal(), y.edges.size());
    });
    return out;
}

inline GradedBasis<Graph> graded_graph_basis(const GraphSpace& S, const std::vector<Graph>& gs) {
    GradedBasis<Graph> gb;
    for (const auto& g : gs) gb.insert(S.degree(g), g);
    return gb;
}

inline CochainComplex graph_complex(const GraphSpace& S, const GraphBounds& b) {
    auto gb = graded_graph_basis(S, enumerate_graphs(S, b));
    return build_complex(gb, [&S](const Graph& g) { return S.d(g); });
}

// ---------------------------------------------------------------------------
// Maps to G_A and to e_n^∨

inline LsElement rho_star(const GraphSpace& S, const LsSpace& G, const GraphSum& x) {
    LsElement out;
    for (const auto& [g, c] : x) {
        if (g.internal() > 0) continue;
        LsWord w;
        for (int u = 0; u < g.ext; ++u)
            if (g.labels[u] != S.unit()) w.labels.push_back({S.externals()[u], g.labels[u]});
        for (const auto& [a, b] : g.edges) w.edges.push_back({S.externals()[a], S.externals()[b]});
        G.reduce_into(w, c, out);
    }
    return out;
}

inline EnElement en_projection(const GraphSpace& S, const GraphSum& x) {
    EnElement out;
    for (const auto& [g, c] : x) {
        if (g.internal() > 0) continue;
        std::vector<Edge> w;
        for (const auto& [a, b] : g.edges) w.push_back({S.externals()[a], S.externals()[b]});
        for (const auto& [m, v] : en_reduce(w, S.n(), c)) add_term(out, m, v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checks over the enumerated range

struct GraphCheckReport {
    bool ok = true;
    long long checked = 0;
    std::string witness;
    void fail(const std::string& w) {
        if (ok) witness = w;
        ok = false;
    }
};

// d² = 0, using one cached differential per basis graph.
inline GraphCheckReport check_graph_d2(const GraphSpace& S, const std::vector<Graph>& gs) {
    GraphCheckReport rep;
    std::map<Graph, GraphSum> cache;
    auto D = [&](const Graph& g) -> const GraphSum& {
        auto it = cache.find(g);
        if (it == cache.end()) it = cache.emplace(g, S.d(g)).first;
        return it->second;
    };
    for (const auto& g : gs) {
        GraphSum dd;
        for (const auto& [h, c] : D(g))
            for (const auto& [k, v] : D(h)) add_coef(dd, k, c * v);
        ++rep.checked;
        if (!dd.empty()) rep.fail(S.graph_string(g));
    }
    return rep;
}

inline GraphCheckReport check_rho_chain_map(const GraphSpace& S, const std::vector<Graph>& gs) {
    GraphCheckReport rep;
    if (!S.algebra()) throw std::invalid_argument("rho_star needs a labeled space");
    LsSpace G(*S.algebra(), S.externals());
    for (const auto& g : gs) {
        GraphSum x{{g, 1}};
        ++rep.checked;
        if (rho_star(S, G, S.d(x)) != G.d(rho_star(S, G, x))) rep.fail(S.graph_string(g));
    }
    return rep;
}

inline GraphCheckReport check_en_projection(const GraphSpace& S, const std::vector<Graph>& gs) {
    GraphCheckReport rep;
    for (const auto& g : gs) {
        ++rep.checked;
        if (!en_projection(S, S.d(GraphSum{{g, 1}})).empty()) rep.fail(S.graph_string(g));
    }
    return rep;
}

// Z_ε commutes with d: graphs with internal components are allowed in the source.
inline GraphCheckReport check_eps_compatibility(const GraphSpace& S, const GraphBounds& b) {
    GraphCheckReport rep;
    const int ext = S.ext();
    for (int ni = 0; ni <= b.max_internal; ++ni) {
        const int V = ext + ni;
        std::vector<Edge> pairs;
        for (int u = 0; u < V; ++u)
            for (int v = u + 1; v < V; ++v) pairs.push_back({u, v});
        const int mult = S.multi_edges_allowed() ? b.max_edges : 1;
        std::set<Graph> done;
        std::vector<Edge> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t p) {
            if (p == pairs.size()) {
                Graph g;
                g.ext = ext;
                g.labels.assign(V, S.unit());
                std::function<void(int)> lab = [&](int v) {
                    if (v == V) {
                        Graph raw = g;
                        raw.edges = cur;
                        auto cf = S.canonicalize(raw, false);
                        if (!cf || !done.insert(cf->first).second) return;
                        GraphSum x{{cf->first, 1}};
                        ++rep.checked;
                        if (S.eps_reduce(S.d(x, false)) != S.d(S.eps_reduce(x))) rep.fail(S.graph_string(cf->first));
                        return;
                    }
                    for (int a = 0; a < S.label_dim(); ++a) {
                        g.labels[v] = a;
                        lab(v + 1);
                    }
                };
                lab(0);
                return;
            }
            const std::size_t base = cur.size();
            for (int m = 0; m <= mult && static_cast<int>(base) + m <= b.max_edges; ++m) {
                rec(p + 1);
                cur.push_back(pairs[p]);
            }
            cur.resize(base);
        };
        rec(0);
    }
    return rep;
}

// The family: external vertex labeled y joined to one internal vertex labeled x.
// Its split and contraction terms cancel after ε-reduction.
inline GraphCheckReport check_dead_end_cancellation(const PdAlgebra& A) {
    GraphCheckReport rep;
    GraphSpace S(A, {1});
    for (int x = 0; x < A.dim(); ++x)
        for (int y = 0; y < A.dim(); ++y) {
            Graph raw{1, {y, x}, {{0, 1}}};
            auto cf = S.canonicalize(raw);
            if (!cf) continue;
            GraphSum dg = S.d(cf->first);
            // d_A terms only survive
            GraphSum expect;
            for (const auto& [t, c] : A.d(y))
                for (const auto& [h, v] : S.normalize({{GItem::Label, 0, t}, {GItem::Token, 1, x}, {GItem::EdgeItem, 0, 1}},
                                                      1, c))
                    add_coef(expect, h, v);
            for (const auto& [t, c] : A.d(x))
                for (const auto& [h, v] :
                     S.normalize({{GItem::Label, 0, y}, {GItem::Token, 1, t}, {GItem::EdgeItem, 0, 1}}, 1,
                                 c * koszul(A.degree(y) + A.n())))
                    add_coef(expect, h, v);
            GraphSum sc;
            for (const auto& [h, v] : expect) add_coef(sc, h, v * cf->second);
            ++rep.checked;
            if (dg != sc) rep.fail(S.graph_string(cf->first));
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Cocomposition Γ ↦ Σ ±Γ_{U/W} ⊗ Γ_W (loop-free: the loop terms are dropped)

using GraphTensor = std::map<std::pair<Graph, Graph>, Rational>;

struct GraphCocomposition {
    GraphSpace left;   // same flavor on U/W
    GraphSpace right;  // unlabeled on W
    GraphTensor value;
};

inline std::vector<int> sorted_set(const std::set<int>& W) { return std::vector<int>(W.begin(), W.end()); }

inline GraphSpace quotient_space(const GraphSpace& S, const std::set<int>& W, int star) {
    auto q = quotient_vertices(S.externals(), W, star);
    return S.algebra() ? GraphSpace(*S.algebra(), q) : GraphSpace(S.n(), q);
}

inline GraphTensor cocompose_graph(const GraphSpace& S, const GraphSpace& L, const GraphSpace& R,
                                   const std::set<int>& W, int star, const Graph& g) {
    if (S.algebra() && S.algebra()->euler() != 0)
        throw std::domain_error("cocompose_graph: labeled cocomposition requires chi(A) = 0");
    for (int w : W)
        if (!std::binary_search(S.externals().begin(), S.externals().end(), w))
            throw std::invalid_argument("W is not a subset of U");
    const auto& U = S.externals();
    const int ext = g.ext, ni = g.internal(), n = S.n();
    auto lpos = [&](int name) {
        return static_cast<int>(std::lower_bound(L.externals().begin(), L.externals().end(), name) -
                                L.externals().begin());
    };
    auto rpos = [&](int name) {
        return static_cast<int>(std::lower_bound(R.externals().begin(), R.externals().end(), name) -
                                R.externals().begin());
    };
    const int star_pos = lpos(star);
    GraphTensor out;
    const GWord w = S.word_of(g);
    for (unsigned mask = 0; mask < (1u << ni); ++mask) {
        auto inJp = [&](int v) { return v >= ext && (mask & (1u << (v - ext))); };
        auto inside = [&](int v) { return v < ext ? W.count(U[v]) > 0 : inJp(v); };
        // new ids
        std::vector<int> lid(ext + ni, -1), rid(ext + ni, -1);
        int lnext = L.ext(), rnext = R.ext();
        for (int v = 0; v < ext + ni; ++v) {
            if (v < ext) {
                if (W.count(U[v])) {
                    lid[v] = star_pos;
                    rid[v] = rpos(U[v]);
                } else {
                    lid[v] = lpos(U[v]);
                }
            } else if (inJp(v)) {
                lid[v] = star_pos;
                rid[v] = rnext++;
            } else {
                lid[v] = lnext++;
            }
        }
        GWord lw, rw;
        int rdeg = 0;
        int sign = 1;
        auto push = [&](std::optional<GItem> l, std::optional<GItem> r, int rd) {
            int ld = l ? L.item_degree(*l) : 0;
            if (rdeg % 2 && ld % 2) sign = -sign;
            if (l) lw.push_back(*l);
            if (r) rw.push_back(*r);
            rdeg += rd;
        };
        for (const auto& it : w) {
            if (it.kind == GItem::Label) {
                push(GItem{GItem::Label, lid[it.a], it.b}, std::nullopt, 0);
            } else if (it.kind == GItem::Token) {
                if (inJp(it.a)) {
                    // v·ι_v(a) ↦ (1 ⊗ v)(ι_*(a) ⊗ 1) = (-1)^{n|a|} ι_*(a) ⊗ v
                    if ((static_cast<long long>(n) * S.label_degree(it.b)) % 2) sign = -sign;
                    GItem rt{GItem::Token, rid[it.a], R.unit()};
                    push(GItem{GItem::Label, star_pos, it.b}, rt, R.item_degree(rt));
                } else {
                    push(GItem{GItem::Token, lid[it.a], it.b}, std::nullopt, 0);
                }
            } else {
                if (inside(it.a) && inside(it.b)) {
                    GItem re{GItem::EdgeItem, rid[it.a], rid[it.b]};
                    push(std::nullopt, re, n - 1);
                } else {
                    push(GItem{GItem::EdgeItem, lid[it.a], lid[it.b]}, std::nullopt, 0);
                }
            }
        }
        GraphSum ls = L.normalize(lw, lnext - L.ext(), sign), rs = R.normalize(rw, rnext - R.ext());
        for (const auto& [lg, lc] : ls)
            for (const auto& [rg, rc] : rs) add_coef(out, std::make_pair(lg, rg), lc * rc);
    }
    return out;
}

inline GraphCocomposition cocompose_graph(const GraphSpace& S, const std::set<int>& W, int star, const Graph& g) {
    GraphCocomposition c{quotient_space(S, W, star), GraphSpace(S.n(), sorted_set(W)), {}};
    c.value = cocompose_graph(S, c.left, c.right, W, star, g);
    return c;
}

// Δ∘d = (d ⊗ 1 + 1 ⊗ d)∘Δ on the listed graphs, for every W ⊆ U.
inline GraphCheckReport check_graph_comodule(const GraphSpace& S, const std::vector<Graph>& gs, int star = 0) {
    GraphCheckReport rep;
    for (const auto& W : all_subsets(S.externals())) {
        GraphSpace L = quotient_space(S, W, star), R(S.n(), sorted_set(W));
        for (const auto& g : gs) {
            GraphTensor lhs;
            for (const auto& [h, c] : S.d(g))
                for (const auto& [lr, v] : cocompose_graph(S, L, R, W, star, h)) add_coef(lhs, lr, c * v);
            GraphTensor rhs;
            for (const auto& [lr, c] : cocompose_graph(S, L, R, W, star, g)) {
                for (const auto& [h, v] : L.d(lr.first)) add_coef(rhs, std::make_pair(h, lr.second), c * v);
                const int s = koszul(L.degree(lr.first));
                for (const auto& [h, v] : R.d(lr.second)) add_coef(rhs, std::make_pair(lr.first, h), c * v * s);
            }
            ++rep.checked;
            if (lhs != rhs) rep.fail("W=" + set_string(W) + " " + S.graph_string(g));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Degree audit for connected internal graphs

struct AuditReport {
    int n = 0;
    int max_vertices = 0;
    int max_edges = 0;
    long long enumerated = 0;  // vertex-numbered graphs, isomorphic copies included
    std::optional<int> min_degree;
    std::vector<std::string> witnesses;  // graphs of degree <= 0
    bool asserted = false;               // n >= 4
    bool ok = true;
};

inline AuditReport vanishing_audit(int n, int max_vertices, const PdAlgebra& A, int max_edges = -1) {
    if (n < 2) throw std::invalid_argument("audit needs n >= 2");
    AuditReport rep;
    rep.n = n;
    rep.max_vertices = max_vertices;
    rep.max_edges = max_edges >= 0 ? max_edges : 2 * max_vertices;
    // smallest available label degree for bivalent vertices
    std::optional<int> biv;
    for (int i = 0; i < A.dim(); ++i)
        if (A.degree(i) >= 2 && (!biv || A.degree(i) < *biv)) biv = A.degree(i);
    const bool multi = n % 2 != 0;
    for (int V = 2; V <= max_vertices; ++V) {
        std::vector<Edge> pairs;
        for (int u = 0; u < V; ++u)
            for (int v = u + 1; v < V; ++v) pairs.push_back({u, v});
        std::set<std::vector<Edge>> seen;
        std::vector<Edge> cur;
        std::vector<int> val(V, 0);
        std::function<void(std::size_t)> rec = [&](std::size_t p) {
            if (p == pairs.size()) {
                int deg = static_cast<int>(cur.size()) * (n - 1) - V * n;
                for (int v = 0; v < V; ++v) {
                    if (val[v] < 2) return;
                    if (val[v] == 2) {
                        if (!biv) return;
                        deg += *biv;
                    }
                }
                if (!detail::internal_attached(1, V, cur)) return;  // connected: all reach vertex 0
                ++rep.enumerated;
                if (!rep.min_degree || deg < *rep.min_degree) rep.min_degree = deg;
                if (deg <= 0 && rep.witnesses.size() < 50 && seen.insert(detail::structure_key(0, V, cur)).second) {
                    std::string s = "V=" + std::to_string(V) + " deg=" + std::to_string(deg) + " edges";
                    for (const auto& [x, y] : cur) s += " " + std::to_string(x) + "-" + std::to_string(y);
                    rep.witnesses.push_back(s);
                }
                return;
            }
            const std::size_t base = cur.size();
            const int mult = multi ? rep.max_edges : 1;
            for (int m = 0; m <= mult && static_cast<int>(base) + m <= rep.max_edges; ++m) {
                rec(p + 1);
                cur.push_back(pairs[p]);
                ++val[pairs[p].first];
                ++val[pairs[p].second];
            }
            for (std::size_t q = base; q < cur.size(); ++q) {
                --val[cur[q].first];
                --val[cur[q].second];
            }
            cur.resize(base);
        };
        rec(0);
    }
    rep.asserted = n >= 4;
    if (rep.asserted) rep.ok = rep.min_degree.has_value() && *rep.min_degree > 0;
    return rep;
}

}  // namespace confmodel
