#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <utility>
#include <vector>

namespace capdesc {

// Weakly decreasing list of positive parts.
class Partition {
public:
    Partition() = default;
    // Throws PreconditionViolation unless parts are positive and weakly decreasing.
    explicit Partition(std::vector<int> parts);
    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}
    static Partition from_unsorted(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int size() const { return size_; }
    int length() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }
    int operator[](std::size_t i) const { return parts_[i]; }
    auto begin() const { return parts_.begin(); }
    auto end() const { return parts_.end(); }

    Partition conjugate() const;
    // Multiplicity of each part value, index = part.
    std::vector<int> multiplicities() const;

    std::string str() const;  // "[3,1,1]"
    static Partition parse(const std::string& text);

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
    // Canonical order: size ascending, then descending-lex within a size.
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b);

private:
    std::vector<int> parts_;
    int size_ = 0;
};

// All partitions of d in canonical (descending-lex) order; d = 0 gives {∅}.
std::vector<Partition> enumerate_partitions(int d);
// All partitions of sizes 0..max_size in canonical order.
std::vector<Partition> partitions_up_to(int max_size);
// P(d) by Euler's pentagonal recurrence.
long partition_count(int d);

// z(λ) = Π i^{m_i} m_i!.
mpz_class centralizer_order(const Partition& lambda);
// Subtract one from each part, dropping zeros.
Partition shift_down(const Partition& gamma);
// Multiset union of parts.
Partition partition_union(const Partition& a, const Partition& b);

// Partitions of d by increasing length, equal lengths in ascending-lex order.
// This is the refinement of the length order under which the descendent /
// relative pairing matrix is triangular.
std::vector<Partition> length_order(int d);
bool length_order_less(const Partition& a, const Partition& b);

// Parts labelled by cohomology classes of a declared basis.
class WeightedPartition {
public:
    using Pair = std::pair<int, std::string>;
    WeightedPartition() = default;
    // Sorts into canonical order: descending by part, then ascending label.
    explicit WeightedPartition(std::vector<Pair> pairs);

    const std::vector<Pair>& pairs() const { return pairs_; }
    int size() const;
    int length() const { return static_cast<int>(pairs_.size()); }
    Partition shape() const;

    std::string str() const;  // [(3,"L"),(1,"pt")]
    static WeightedPartition parse(const std::string& text);

    friend bool operator==(const WeightedPartition&, const WeightedPartition&) = default;
    friend auto operator<=>(const WeightedPartition&, const WeightedPartition&) = default;

private:
    std::vector<Pair> pairs_;
};

}  // namespace capdesc
