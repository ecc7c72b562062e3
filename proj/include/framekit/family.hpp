#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace framekit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted, duplicate-free list of indices into a FrameFamily.
class IndexSet {
public:
    IndexSet() = default;
    /// Sorts the input; duplicates are rejected with invalid_input.
    explicit IndexSet(std::vector<std::size_t> indices);
    IndexSet(std::initializer_list<std::size_t> indices);

    static IndexSet range(std::size_t first, std::size_t last);  // [first, last)

    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    std::size_t operator[](std::size_t i) const { return indices_[i]; }
    bool contains(std::size_t index) const;

    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }
    const std::vector<std::size_t>& values() const noexcept { return indices_; }

    /// Throws invalid_input when any index is >= bound.
    void check_bound(std::size_t bound) const;

    /// Indices in {0..universe-1} that are not in this set.
    IndexSet complement(std::size_t universe) const;

    friend bool operator==(const IndexSet&, const IndexSet&) = default;
    /// Lexicographic order on the sorted index lists.
    friend bool operator<(const IndexSet& a, const IndexSet& b) { return a.indices_ < b.indices_; }

private:
    std::vector<std::size_t> indices_;
};

/// Ordered, labeled, finite family of vectors in R^dim. Stored column-wise:
/// column i of `matrix()` is the i-th vector. Immutable after construction.
class FrameFamily {
public:
    FrameFamily() = default;
    /// Labels default to "f:i" when empty; otherwise must match the column count.
    explicit FrameFamily(Matrix columns, std::vector<std::string> labels = {});

    /// Builds from row-lists; every vector must have length `dim`.
    static FrameFamily from_vectors(std::size_t dim, const std::vector<std::vector<double>>& vectors,
                                    std::vector<std::string> labels = {});

    std::size_t dim() const noexcept { return static_cast<std::size_t>(columns_.rows()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(columns_.cols()); }
    bool empty() const noexcept { return size() == 0; }

    const Matrix& matrix() const noexcept { return columns_; }
    Vector vector(std::size_t i) const { return columns_.col(static_cast<Eigen::Index>(i)); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    /// Largest Euclidean norm among the vectors (0 for an empty family).
    double max_norm() const;
    bool has_nonzero() const { return max_norm() > 0.0; }

    FrameFamily subfamily(const IndexSet& indices) const;
    FrameFamily concat(const FrameFamily& other) const;

    friend bool operator==(const FrameFamily& a, const FrameFamily& b) {
        return a.labels_ == b.labels_ && a.columns_.rows() == b.columns_.rows() &&
               a.columns_.cols() == b.columns_.cols() && a.columns_ == b.columns_;
    }

private:
    Matrix columns_{0, 0};
    std::vector<std::string> labels_;
};

std::vector<std::string> default_labels(std::size_t count, const std::string& prefix = "f");

}  // namespace framekit
