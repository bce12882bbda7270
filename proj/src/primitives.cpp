#include "resrand/primitives.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace resrand {

std::size_t Clustering::covered() const {
    std::size_t k = 0;
    for (const auto& m : members) k += m.size();
    return k;
}

std::vector<int> Clustering::sizes() const {
    std::vector<int> s(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) s[c] = static_cast<int>(members[c].size());
    return s;
}

Clustering Clustering::from_labels(const std::vector<int>& labels) {
    if (labels.empty()) throw Error(ErrorCode::EmptyInput, "empty label vector");
    std::set<int> uniq;
    for (int v : labels)
        if (v >= 0) uniq.insert(v);
    std::map<int, int> remap;
    int next = 0;
    for (int v : uniq) remap[v] = next++;

    Clustering c;
    c.assignment.resize(labels.size());
    c.members.resize(static_cast<std::size_t>(next));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            c.assignment[i] = -1;
            continue;
        }
        const int lab = remap[labels[i]];
        c.assignment[i] = lab;
        c.members[static_cast<std::size_t>(lab)].push_back(static_cast<int>(i));
    }
    return c;
}

Clustering Clustering::whole(std::size_t n) {
    std::vector<int> labels(n, 0);
    return from_labels(labels);
}

Clustering Clustering::singletons(std::size_t n) {
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return from_labels(labels);
}

bool TwoWayLayout::single_replication() const {
    return std::all_of(replication_of.begin(), replication_of.end(),
                       [](int r) { return r == 0; });
}

int TwoWayLayout::cell_index(int r, int c) const {
    return cell_first_[static_cast<std::size_t>(r) * static_cast<std::size_t>(col_count) +
                       static_cast<std::size_t>(c)];
}

namespace {

std::vector<int> normalize_sorted(const std::vector<int>& labels, const std::set<int>& uniq) {
    std::map<int, int> remap;
    int next = 0;
    for (int v : uniq) remap[v] = next++;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = remap.at(labels[i]);
    return out;
}

}  // namespace

TwoWayLayout layout_from_labels(const std::vector<int>& row_labels,
                                const std::vector<int>& col_labels) {
    if (row_labels.empty()) throw Error(ErrorCode::EmptyInput, "empty two-way labels");
    if (row_labels.size() != col_labels.size())
        throw Error(ErrorCode::LayoutMismatch, "row/col label vectors differ in length");

    TwoWayLayout layout;
    const std::size_t n = row_labels.size();

    // Try a shared node space first: if, under a joint relabeling, the
    // occupied cells are exactly the strict lower triangle, this is dyadic
    // data and row/column permutations must share one node permutation.
    std::set<int> joint(row_labels.begin(), row_labels.end());
    joint.insert(col_labels.begin(), col_labels.end());
    const std::size_t m = joint.size();
    if (m * (m - 1) / 2 == n) {
        auto r = normalize_sorted(row_labels, joint);
        auto c = normalize_sorted(col_labels, joint);
        std::set<std::pair<int, int>> occupied;
        bool lower = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (r[i] <= c[i]) {
                lower = false;
                break;
            }
            occupied.insert({r[i], c[i]});
        }
        if (lower && occupied.size() == n) {
            layout.dyadic = true;
            layout.row_of = std::move(r);
            layout.col_of = std::move(c);
            layout.row_count = layout.col_count = static_cast<int>(m);
        }
    }

    if (!layout.dyadic) {
        std::set<int> ru(row_labels.begin(), row_labels.end());
        std::set<int> cu(col_labels.begin(), col_labels.end());
        layout.row_of = normalize_sorted(row_labels, ru);
        layout.col_of = normalize_sorted(col_labels, cu);
        layout.row_count = static_cast<int>(ru.size());
        layout.col_count = static_cast<int>(cu.size());
    }

    const std::size_t cells =
        static_cast<std::size_t>(layout.row_count) * static_cast<std::size_t>(layout.col_count);
    layout.cell_first_.assign(cells, -1);
    layout.replication_of.resize(n);
    std::vector<int> reps(cells, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cell = static_cast<std::size_t>(layout.row_of[i]) *
                                     static_cast<std::size_t>(layout.col_count) +
                                 static_cast<std::size_t>(layout.col_of[i]);
        layout.replication_of[i] = reps[cell]++;
        if (layout.cell_first_[cell] < 0) layout.cell_first_[cell] = static_cast<int>(i);
    }
    return layout;
}

Dataset average_cells(const Dataset& d) {
    if (!d.row_cluster || !d.col_cluster)
        throw Error(ErrorCode::LayoutMismatch, "cell averaging needs row/col cluster labels");
    const auto layout = layout_from_labels(*d.row_cluster, *d.col_cluster);

    std::map<std::pair<int, int>, std::vector<int>> cells;
    for (std::size_t i = 0; i < layout.n(); ++i)
        cells[{layout.row_of[i], layout.col_of[i]}].push_back(static_cast<int>(i));

    Dataset out;
    const Eigen::Index k = static_cast<Eigen::Index>(cells.size());
    out.y.resize(k);
    out.X.resize(k, d.X.cols());
    std::vector<int> rows, cols;
    Eigen::Index at = 0;
    for (const auto& [cell, idx] : cells) {
        double ysum = 0.0;
        Vector xsum = Vector::Zero(d.X.cols());
        for (int i : idx) {
            ysum += d.y(i);
            xsum += d.X.row(i);
        }
        out.y(at) = ysum / static_cast<double>(idx.size());
        out.X.row(at) = xsum / static_cast<double>(idx.size());
        rows.push_back(cell.first);
        cols.push_back(cell.second);
        ++at;
    }
    out.row_cluster = rows;
    out.col_cluster = cols;
    return out;
}

std::string PrimitiveKind::name() const {
    switch (tag) {
        case PrimitiveTag::GlobalPerm: return "perm";
        case PrimitiveTag::GlobalSign: return "sign";
        case PrimitiveTag::ClusterPerm: return "cluster-perm";
        case PrimitiveTag::ClusterSign: return "cluster-sign";
        case PrimitiveTag::Double: return "double";
        case PrimitiveTag::TwoWayPerm: return "two-way";
    }
    return "?";
}

namespace {

void require_clusters(const Clustering& c) {
    if (c.assignment.empty()) throw Error(ErrorCode::EmptyInput, "empty clustering");
    for (const auto& m : c.members)
        if (m.empty()) throw Error(ErrorCode::LayoutMismatch, "empty cluster in clustering");
}

}  // namespace

PrimitiveKind global_perm(std::size_t n) {
    PrimitiveKind k{PrimitiveTag::GlobalPerm, n, Clustering::whole(n), {}};
    return k;
}

PrimitiveKind global_sign(std::size_t n) {
    PrimitiveKind k{PrimitiveTag::GlobalSign, n, Clustering::singletons(n), {}};
    return k;
}

PrimitiveKind cluster_perm(Clustering c) {
    require_clusters(c);
    const std::size_t n = c.assignment.size();
    return PrimitiveKind{PrimitiveTag::ClusterPerm, n, std::move(c), {}};
}

PrimitiveKind cluster_sign(Clustering c) {
    require_clusters(c);
    const std::size_t n = c.assignment.size();
    return PrimitiveKind{PrimitiveTag::ClusterSign, n, std::move(c), {}};
}

PrimitiveKind double_invariance(Clustering c) {
    require_clusters(c);
    const std::size_t n = c.assignment.size();
    return PrimitiveKind{PrimitiveTag::Double, n, std::move(c), {}};
}

PrimitiveKind two_way_perm(TwoWayLayout layout) {
    if (layout.n() == 0) throw Error(ErrorCode::EmptyInput, "empty two-way layout");
    if (!layout.single_replication())
        throw Error(ErrorCode::LayoutMismatch,
                    "two-way permutations need one observation per cell; "
                    "average replicated cells first");
    if (!layout.dyadic) {
        const std::size_t cells = static_cast<std::size_t>(layout.row_count) *
                                  static_cast<std::size_t>(layout.col_count);
        if (layout.n() != cells)
            throw Error(ErrorCode::LayoutMismatch,
                        "two-way permutations need a fully occupied grid or a dyadic "
                        "lower-triangle layout");
    }
    const std::size_t n = layout.n();
    return PrimitiveKind{PrimitiveTag::TwoWayPerm, n, {}, std::move(layout)};
}

PrimitiveKind make_kind(const std::string& name, const Dataset& d) {
    const std::size_t n = static_cast<std::size_t>(d.n());
    if (name == "perm") return global_perm(n);
    if (name == "sign") return global_sign(n);
    if (name == "cluster-perm" || name == "cluster-sign" || name == "double") {
        if (!d.cluster)
            throw Error(ErrorCode::InvalidConfig,
                        "primitive '" + name + "' needs a cluster column");
        Clustering c = Clustering::from_labels(*d.cluster);
        if (name == "cluster-perm") return cluster_perm(std::move(c));
        if (name == "cluster-sign") return cluster_sign(std::move(c));
        return double_invariance(std::move(c));
    }
    if (name == "two-way") {
        if (!d.row_cluster || !d.col_cluster)
            throw Error(ErrorCode::InvalidConfig, "primitive 'two-way' needs rowc/colc columns");
        return two_way_perm(layout_from_labels(*d.row_cluster, *d.col_cluster));
    }
    throw Error(ErrorCode::InvalidConfig, "unknown primitive '" + name + "'");
}

GroupElement GroupElement::identity(std::size_t n) {
    GroupElement g;
    g.perm.resize(n);
    std::iota(g.perm.begin(), g.perm.end(), 0);
    g.sign.assign(n, 1);
    return g;
}

Vector apply_element(const GroupElement& g, const Vector& u) {
    if (static_cast<Eigen::Index>(g.n()) != u.size())
        throw Error(ErrorCode::LayoutMismatch, "group element size does not match vector");
    Vector out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
        out(i) = static_cast<double>(g.sign[static_cast<std::size_t>(i)]) *
                 u(g.perm[static_cast<std::size_t>(i)]);
    return out;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
    if (a.n() != b.n()) throw Error(ErrorCode::LayoutMismatch, "composing mismatched elements");
    const std::size_t n = a.n();
    GroupElement c;
    c.perm.resize(n);
    c.sign.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ai = static_cast<std::size_t>(a.perm[i]);
        c.perm[i] = b.perm[ai];
        c.sign[i] = a.sign[i] * b.sign[ai];
    }
    return c;
}

GroupElement inverse(const GroupElement& g) {
    const std::size_t n = g.n();
    GroupElement inv;
    inv.perm.resize(n);
    inv.sign.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        inv.perm[static_cast<std::size_t>(g.perm[i])] = static_cast<int>(i);
    for (std::size_t i = 0; i < n; ++i)
        inv.sign[i] = g.sign[static_cast<std::size_t>(inv.perm[i])];
    return inv;
}

namespace {

/// Fisher-Yates over a scratch copy of a cluster's members; writes the
/// within-block permutation into g.perm.
void shuffle_block_into(GroupElement& g, const std::vector<int>& members,
                        std::vector<int>& scratch, Rng& rng) {
    scratch.assign(members.begin(), members.end());
    for (std::size_t i = scratch.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
        std::swap(scratch[i - 1], scratch[j]);
    }
    for (std::size_t t = 0; t < members.size(); ++t)
        g.perm[static_cast<std::size_t>(members[t])] = scratch[t];
}

void twoway_perm_from_labels(const TwoWayLayout& layout, const std::vector<int>& row_map,
                             const std::vector<int>& col_map, GroupElement& g) {
    for (std::size_t i = 0; i < layout.n(); ++i) {
        int r = row_map[static_cast<std::size_t>(layout.row_of[i])];
        int c = col_map[static_cast<std::size_t>(layout.col_of[i])];
        if (layout.dyadic && r < c) std::swap(r, c);
        g.perm[i] = layout.cell_index(r, c);
    }
}

}  // namespace

GroupElement sample_element(const PrimitiveKind& kind, Rng& rng) {
    GroupElement g = GroupElement::identity(kind.n);
    switch (kind.tag) {
        case PrimitiveTag::GlobalPerm:
        case PrimitiveTag::ClusterPerm:
        case PrimitiveTag::Double: {
            std::vector<int> scratch;
            for (const auto& members : kind.clustering.members)
                shuffle_block_into(g, members, scratch, rng);
            if (kind.tag != PrimitiveTag::Double) break;
            [[fallthrough]];
        }
        case PrimitiveTag::GlobalSign:
        case PrimitiveTag::ClusterSign: {
            for (std::size_t c = 0; c < kind.clustering.members.size(); ++c) {
                const int s = rng.rademacher();
                for (int i : kind.clustering.members[c]) g.sign[static_cast<std::size_t>(i)] = s;
            }
            break;
        }
        case PrimitiveTag::TwoWayPerm: {
            const auto& layout = kind.layout;
            std::vector<int> rows(static_cast<std::size_t>(layout.row_count));
            std::iota(rows.begin(), rows.end(), 0);
            for (std::size_t i = rows.size(); i > 1; --i)
                std::swap(rows[i - 1], rows[static_cast<std::size_t>(rng.uniform_below(i))]);
            if (layout.dyadic) {
                twoway_perm_from_labels(layout, rows, rows, g);
            } else {
                std::vector<int> cols(static_cast<std::size_t>(layout.col_count));
                std::iota(cols.begin(), cols.end(), 0);
                for (std::size_t i = cols.size(); i > 1; --i)
                    std::swap(cols[i - 1], cols[static_cast<std::size_t>(rng.uniform_below(i))]);
                twoway_perm_from_labels(layout, rows, cols, g);
            }
            break;
        }
    }
    return g;
}

namespace {

struct SatMul {
    bool overflow = false;
    std::uint64_t value = 1;

    void mul(std::uint64_t f) {
        if (overflow) return;
        const __uint128_t r = static_cast<__uint128_t>(value) * f;
        if (r > static_cast<__uint128_t>(INT64_MAX)) {
            overflow = true;
            return;
        }
        value = static_cast<std::uint64_t>(r);
    }

    void factorial(std::uint64_t k) {
        for (std::uint64_t f = 2; f <= k && !overflow; ++f) mul(f);
    }

    void pow2(std::uint64_t k) {
        for (std::uint64_t f = 0; f < k && !overflow; ++f) mul(2);
    }
};

}  // namespace

std::string GroupSizeInfo::note() const {
    if (overflow) return "|G| large (exceeds 2^63-1)";
    return "|G| = " + std::to_string(value);
}

GroupSizeInfo group_size(const PrimitiveKind& kind) {
    SatMul acc;
    switch (kind.tag) {
        case PrimitiveTag::GlobalPerm:
            acc.factorial(kind.n);
            break;
        case PrimitiveTag::GlobalSign:
            acc.pow2(kind.n);
            break;
        case PrimitiveTag::ClusterPerm:
            for (const auto& m : kind.clustering.members) acc.factorial(m.size());
            break;
        case PrimitiveTag::ClusterSign:
            acc.pow2(kind.clustering.members.size());
            break;
        case PrimitiveTag::Double:
            acc.pow2(kind.clustering.members.size());
            for (const auto& m : kind.clustering.members) acc.factorial(m.size());
            break;
        case PrimitiveTag::TwoWayPerm:
            if (kind.layout.dyadic) {
                acc.factorial(static_cast<std::uint64_t>(kind.layout.row_count));
            } else {
                acc.factorial(static_cast<std::uint64_t>(kind.layout.row_count));
                acc.factorial(static_cast<std::uint64_t>(kind.layout.col_count));
            }
            break;
    }
    return {acc.overflow, acc.overflow ? 0 : acc.value};
}

namespace {

/// Odometer over per-block permutations in lexicographic order.
/// Blocks advance least-significant-last so the identity comes first.
class BlockPermOdometer {
  public:
    explicit BlockPermOdometer(const std::vector<std::vector<int>>& blocks) : blocks_(blocks) {
        state_ = blocks;  // sorted ascending already (members are ascending)
    }

    void write_into(GroupElement& g) const {
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            for (std::size_t t = 0; t < blocks_[b].size(); ++t)
                g.perm[static_cast<std::size_t>(blocks_[b][t])] = state_[b][t];
    }

    bool advance() {
        for (std::size_t b = blocks_.size(); b-- > 0;) {
            if (std::next_permutation(state_[b].begin(), state_[b].end())) return true;
            // wrapped back to sorted order; carry to the previous block
        }
        return false;
    }

  private:
    const std::vector<std::vector<int>>& blocks_;
    std::vector<std::vector<int>> state_;
};

void write_signs(GroupElement& g, const Clustering& c, std::uint64_t pattern) {
    for (std::size_t cl = 0; cl < c.members.size(); ++cl) {
        const int s = (pattern >> cl) & 1 ? -1 : 1;
        for (int i : c.members[cl]) g.sign[static_cast<std::size_t>(i)] = s;
    }
}

}  // namespace

std::vector<GroupElement> enumerate_elements(const PrimitiveKind& kind, std::uint64_t cap) {
    const GroupSizeInfo size = group_size(kind);
    if (size.overflow || size.value > cap)
        throw Error(ErrorCode::GroupTooLarge,
                    "group size " + size.note() + " exceeds enumeration cap " +
                        std::to_string(cap));

    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(size.value));
    GroupElement g = GroupElement::identity(kind.n);

    switch (kind.tag) {
        case PrimitiveTag::GlobalPerm:
        case PrimitiveTag::ClusterPerm: {
            BlockPermOdometer odo(kind.clustering.members);
            do {
                odo.write_into(g);
                out.push_back(g);
            } while (odo.advance());
            break;
        }
        case PrimitiveTag::GlobalSign:
        case PrimitiveTag::ClusterSign: {
            for (std::uint64_t pattern = 0; pattern < size.value; ++pattern) {
                write_signs(g, kind.clustering, pattern);
                out.push_back(g);
            }
            break;
        }
        case PrimitiveTag::Double: {
            const std::uint64_t npat = std::uint64_t{1} << kind.clustering.members.size();
            for (std::uint64_t pattern = 0; pattern < npat; ++pattern) {
                write_signs(g, kind.clustering, pattern);
                BlockPermOdometer odo(kind.clustering.members);
                do {
                    odo.write_into(g);
                    out.push_back(g);
                } while (odo.advance());
            }
            break;
        }
        case PrimitiveTag::TwoWayPerm: {
            const auto& layout = kind.layout;
            std::vector<int> rows(static_cast<std::size_t>(layout.row_count));
            std::iota(rows.begin(), rows.end(), 0);
            if (layout.dyadic) {
                do {
                    twoway_perm_from_labels(layout, rows, rows, g);
                    out.push_back(g);
                } while (std::next_permutation(rows.begin(), rows.end()));
            } else {
                std::vector<int> cols(static_cast<std::size_t>(layout.col_count));
                do {
                    std::iota(cols.begin(), cols.end(), 0);
                    do {
                        twoway_perm_from_labels(layout, rows, cols, g);
                        out.push_back(g);
                    } while (std::next_permutation(cols.begin(), cols.end()));
                } while (std::next_permutation(rows.begin(), rows.end()));
            }
            break;
        }
    }
    return out;
}

}  // namespace resrand
