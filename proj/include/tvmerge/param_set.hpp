#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tvmerge {

// Dense row-major f32 tensor.
struct tensor {
    std::vector<std::uint32_t> shape;
    std::vector<float> data;

    tensor() = default;
    // Validates positive dims and product(shape) == data.size().
    tensor(std::vector<std::uint32_t> shape_, std::vector<float> data_);

    static tensor zeros(std::vector<std::uint32_t> shape_);

    std::size_t numel() const { return data.size(); }
    bool same_shape(const tensor & other) const { return shape == other.shape; }
};

// Throws non_finite naming `context` if any element is NaN/Inf.
void check_finite(const tensor & t, const std::string & context);

struct param_entry {
    std::string name;
    std::uint32_t layer_index = 0;
    tensor tens;
};

// Ordered, named collection of tensors: a model's weights. Entries keep
// insertion order; names are unique; layer_index values must cover a
// contiguous range 0..L-1 (checked by layer_count / check_layers).
// Treat as immutable once built; all operations return new values.
class param_set {
public:
    param_set() = default;

    void add(std::string name, std::uint32_t layer_index, tensor t);

    const std::vector<param_entry> & entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const param_entry & entry(std::size_t i) const { return entries_[i]; }
    param_entry & entry_mut(std::size_t i) { return entries_[i]; }

    // nullptr when absent
    const param_entry * find(const std::string & name) const;

    std::map<std::string, std::string> & meta() { return meta_; }
    const std::map<std::string, std::string> & meta() const { return meta_; }

    // Total scalar count across entries.
    std::size_t numel() const;

    // L = max layer_index + 1, after validating the contiguous-layer invariant.
    std::uint32_t layer_count() const;
    void check_layers() const;

    bool operator==(const param_set & other) const;

private:
    std::vector<param_entry> entries_;
    std::map<std::string, std::string> meta_;
};

// Entry-wise dst + scale * src over identically laid out sets. Inputs
// unmodified; result metadata copied from dst. Each coordinate is computed
// in double and rounded once, so scale in {0, 1, -1} adds no rounding beyond
// the addition itself.
param_set elementwise_axpy(const param_set & dst, double scale, const param_set & src);

// Succeeds iff all sets share names, shapes, entry order and layer partition.
// Throws shape_mismatch naming the first differing entry.
void validate_aligned(std::span<const param_set * const> sets);
void validate_aligned(const param_set & a, const param_set & b);

} // namespace tvmerge
