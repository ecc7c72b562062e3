#include "framekit/family.hpp"

#include <algorithm>
#include <utility>

#include "framekit/error.hpp"

namespace framekit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_input: return "invalid-input";
        case ErrorCode::dimension_mismatch: return "dimension-mismatch";
        case ErrorCode::not_linearly_independent: return "not-linearly-independent";
        case ErrorCode::not_a_frame: return "not-a-frame";
        case ErrorCode::degenerate_input: return "degenerate-input";
        case ErrorCode::size_limit: return "size-limit";
        case ErrorCode::invalid_basis: return "invalid-basis";
        case ErrorCode::wrong_structure: return "wrong-structure";
        case ErrorCode::infeasible_spec: return "infeasible-spec";
        case ErrorCode::not_orthogonal: return "not-orthogonal";
        case ErrorCode::invalid_permutation: return "invalid-permutation";
    }
    return "unknown";
}

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw Error(ErrorCode::invalid_input, "index set contains duplicates");
}

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet IndexSet::range(std::size_t first, std::size_t last) {
    std::vector<std::size_t> out;
    for (std::size_t i = first; i < last; ++i) out.push_back(i);
    return IndexSet(std::move(out));
}

bool IndexSet::contains(std::size_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

void IndexSet::check_bound(std::size_t bound) const {
    if (!indices_.empty() && indices_.back() >= bound)
        throw Error(ErrorCode::invalid_input, "index " + std::to_string(indices_.back()) +
                                                  " out of range for family of size " +
                                                  std::to_string(bound));
}

IndexSet IndexSet::complement(std::size_t universe) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < universe; ++i)
        if (!contains(i)) out.push_back(i);
    return IndexSet(std::move(out));
}

std::vector<std::string> default_labels(std::size_t count, const std::string& prefix) {
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + ":" + std::to_string(i));
    return out;
}

FrameFamily::FrameFamily(Matrix columns, std::vector<std::string> labels)
    : columns_(std::move(columns)), labels_(std::move(labels)) {
    if (labels_.empty()) labels_ = default_labels(size());
    if (labels_.size() != size())
        throw Error(ErrorCode::invalid_input, "label count " + std::to_string(labels_.size()) +
                                                  " does not match vector count " +
                                                  std::to_string(size()));
    if (!columns_.allFinite())
        throw Error(ErrorCode::invalid_input, "family contains non-finite entries");
}

FrameFamily FrameFamily::from_vectors(std::size_t dim, const std::vector<std::vector<double>>& vectors,
                                      std::vector<std::string> labels) {
    Matrix columns(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != dim)
            throw Error(ErrorCode::invalid_input, "vector " + std::to_string(i) + " has length " +
                                                      std::to_string(vectors[i].size()) +
                                                      ", expected " + std::to_string(dim));
        for (std::size_t r = 0; r < dim; ++r)
            columns(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = vectors[i][r];
    }
    return FrameFamily(std::move(columns), std::move(labels));
}

double FrameFamily::max_norm() const {
    double best = 0.0;
    for (Eigen::Index i = 0; i < columns_.cols(); ++i) best = std::max(best, columns_.col(i).norm());
    return best;
}

FrameFamily FrameFamily::subfamily(const IndexSet& indices) const {
    indices.check_bound(size());
    Matrix cols(columns_.rows(), static_cast<Eigen::Index>(indices.size()));
    std::vector<std::string> labels;
    labels.reserve(indices.size());
    Eigen::Index out = 0;
    for (std::size_t i : indices) {
        cols.col(out++) = columns_.col(static_cast<Eigen::Index>(i));
        labels.push_back(labels_[i]);
    }
    return FrameFamily(std::move(cols), std::move(labels));
}

FrameFamily FrameFamily::concat(const FrameFamily& other) const {
    if (empty()) return other;
    if (other.empty()) return *this;
    if (other.dim() != dim())
        throw Error(ErrorCode::dimension_mismatch, "cannot concatenate families of dimension " +
                                                       std::to_string(dim()) + " and " +
                                                       std::to_string(other.dim()));
    Matrix cols(columns_.rows(), columns_.cols() + other.columns_.cols());
    cols << columns_, other.columns_;
    std::vector<std::string> labels = labels_;
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
    return FrameFamily(std::move(cols), std::move(labels));
}

}  // namespace framekit
