#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resrand/rng.hpp"
#include "resrand/types.hpp"

namespace resrand {

/// A partition of datapoint indices. Labels are contiguous 0..J-1 and every
/// cluster is nonempty. An assignment of -1 marks a point outside every
/// cluster (used by the reflection test, where flips act only on a
/// consecutive range); such points are never permuted and keep sign +1.
struct Clustering {
    std::vector<int> assignment;
    std::vector<std::vector<int>> members;  // per-cluster indices, ascending

    int num_clusters() const { return static_cast<int>(members.size()); }
    std::size_t covered() const;
    std::vector<int> sizes() const;

    /// Normalize arbitrary labels to 0..J-1 (ascending label order).
    static Clustering from_labels(const std::vector<int>& labels);
    /// One cluster holding everything.
    static Clustering whole(std::size_t n);
    /// n singleton clusters.
    static Clustering singletons(std::size_t n);
};

/// Observations arranged on a row x column grid. `dyadic` marks the special
/// case where rows and columns index the same node set and the occupied
/// cells are exactly the strict lower triangle (one dyad per unordered
/// pair); permutations then act through a single node relabeling so the
/// occupied set is preserved.
struct TwoWayLayout {
    std::vector<int> row_of;
    std::vector<int> col_of;
    std::vector<int> replication_of;
    int row_count = 0;
    int col_count = 0;
    bool dyadic = false;

    std::size_t n() const { return row_of.size(); }
    bool single_replication() const;
    /// Data index of the (unique) observation in cell (r, c), or -1.
    int cell_index(int r, int c) const;

  private:
    friend TwoWayLayout layout_from_labels(const std::vector<int>&, const std::vector<int>&);
    std::vector<int> cell_first_;
};

TwoWayLayout layout_from_labels(const std::vector<int>& row_labels,
                                const std::vector<int>& col_labels);

/// Collapse replicated cells by averaging y and X within each (row, col)
/// cell, yielding a layout with one observation per cell.
Dataset average_cells(const Dataset& d);

enum class PrimitiveTag {
    GlobalPerm,
    GlobalSign,
    ClusterPerm,
    ClusterSign,
    Double,
    TwoWayPerm,
};

/// An inferential primitive: a group of signed permutations of 1..n.
struct PrimitiveKind {
    PrimitiveTag tag;
    std::size_t n = 0;
    Clustering clustering;  // ClusterPerm / ClusterSign / Double
    TwoWayLayout layout;    // TwoWayPerm

    bool has_perm() const {
        return tag != PrimitiveTag::GlobalSign && tag != PrimitiveTag::ClusterSign;
    }
    bool has_sign() const {
        return tag == PrimitiveTag::GlobalSign || tag == PrimitiveTag::ClusterSign ||
               tag == PrimitiveTag::Double;
    }
    std::string name() const;
};

PrimitiveKind global_perm(std::size_t n);
PrimitiveKind global_sign(std::size_t n);
PrimitiveKind cluster_perm(Clustering c);
PrimitiveKind cluster_sign(Clustering c);
PrimitiveKind double_invariance(Clustering c);
PrimitiveKind two_way_perm(TwoWayLayout layout);

/// Build a primitive from its CLI name ("perm", "sign", "cluster-perm",
/// "cluster-sign", "double", "two-way") and the dataset's grouping columns.
PrimitiveKind make_kind(const std::string& name, const Dataset& d);

/// One applied transform g: (g u)[i] = sign[i] * u[perm[i]].
struct GroupElement {
    std::vector<int> perm;
    std::vector<int> sign;  // +1 / -1

    std::size_t n() const { return perm.size(); }
    static GroupElement identity(std::size_t n);
};

Vector apply_element(const GroupElement& g, const Vector& u);

/// c = a . b, meaning c u = a (b u).
GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);

GroupElement sample_element(const PrimitiveKind& kind, Rng& rng);

/// |G|, saturating: `overflow` set when the size exceeds 2^63 - 1.
struct GroupSizeInfo {
    bool overflow = false;
    std::uint64_t value = 0;

    std::string note() const;
};

GroupSizeInfo group_size(const PrimitiveKind& kind);

/// Every element exactly once, identity first. Signs advance in binary
/// counting order, permutations in lexicographic order; products are
/// nested sign-major. Throws GroupTooLarge when |G| > cap.
std::vector<GroupElement> enumerate_elements(const PrimitiveKind& kind, std::uint64_t cap);

}  // namespace resrand
