#include "tvmerge/param_set.hpp"

#include "tvmerge/errors.hpp"
#include "tvmerge/kernels.hpp"

#include <cmath>

namespace tvmerge {

tensor::tensor(std::vector<std::uint32_t> shape_, std::vector<float> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
    std::size_t n = 1;
    for (std::uint32_t d : shape) {
        if (d == 0) {
            throw invalid_argument("tensor dims must be positive");
        }
        n *= d;
    }
    if (shape.empty() || n != data.size()) {
        throw shape_mismatch("tensor data length " + std::to_string(data.size()) +
                             " does not match shape product " + std::to_string(shape.empty() ? 0 : n));
    }
}

tensor tensor::zeros(std::vector<std::uint32_t> shape_) {
    std::size_t n = 1;
    for (std::uint32_t d : shape_) {
        if (d == 0) {
            throw invalid_argument("tensor dims must be positive");
        }
        n *= d;
    }
    if (shape_.empty()) {
        throw invalid_argument("tensor needs at least one dim");
    }
    return tensor(std::move(shape_), std::vector<float>(n, 0.0f));
}

void check_finite(const tensor & t, const std::string & context) {
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        if (!std::isfinite(t.data[i])) {
            throw non_finite(context + ": element " + std::to_string(i) + " is not finite");
        }
    }
}

void param_set::add(std::string name, std::uint32_t layer_index, tensor t) {
    if (find(name) != nullptr) {
        throw invalid_argument("duplicate entry name '" + name + "'");
    }
    entries_.push_back(param_entry{std::move(name), layer_index, std::move(t)});
}

const param_entry * param_set::find(const std::string & name) const {
    for (const auto & e : entries_) {
        if (e.name == name) {
            return &e;
        }
    }
    return nullptr;
}

std::size_t param_set::numel() const {
    std::size_t n = 0;
    for (const auto & e : entries_) {
        n += e.tens.numel();
    }
    return n;
}

void param_set::check_layers() const {
    if (entries_.empty()) {
        throw invalid_argument("param_set has no entries");
    }
    std::uint32_t max_layer = 0;
    for (const auto & e : entries_) {
        max_layer = std::max(max_layer, e.layer_index);
    }
    std::vector<bool> seen(static_cast<std::size_t>(max_layer) + 1, false);
    for (const auto & e : entries_) {
        seen[e.layer_index] = true;
    }
    for (std::size_t l = 0; l < seen.size(); ++l) {
        if (!seen[l]) {
            throw invalid_argument("layer indices not contiguous: layer " + std::to_string(l) +
                                   " has no entries");
        }
    }
}

std::uint32_t param_set::layer_count() const {
    check_layers();
    std::uint32_t max_layer = 0;
    for (const auto & e : entries_) {
        max_layer = std::max(max_layer, e.layer_index);
    }
    return max_layer + 1;
}

bool param_set::operator==(const param_set & other) const {
    if (entries_.size() != other.entries_.size() || meta_ != other.meta_) {
        return false;
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto & a = entries_[i];
        const auto & b = other.entries_[i];
        if (a.name != b.name || a.layer_index != b.layer_index || a.tens.shape != b.tens.shape ||
            a.tens.data != b.tens.data) {
            return false;
        }
    }
    return true;
}

namespace {

void require_same_layout(const param_set & a, const param_set & b, const std::string & who) {
    if (a.size() != b.size()) {
        throw shape_mismatch(who + ": entry counts differ (" + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto & ea = a.entry(i);
        const auto & eb = b.entry(i);
        if (ea.name != eb.name) {
            throw shape_mismatch(who + ": entry " + std::to_string(i) + " named '" + ea.name +
                                 "' vs '" + eb.name + "'");
        }
        if (!ea.tens.same_shape(eb.tens)) {
            throw shape_mismatch(who + ": entry '" + ea.name + "' shapes differ");
        }
        if (ea.layer_index != eb.layer_index) {
            throw shape_mismatch(who + ": entry '" + ea.name + "' layer_index " +
                                 std::to_string(ea.layer_index) + " vs " + std::to_string(eb.layer_index));
        }
    }
}

} // namespace

param_set elementwise_axpy(const param_set & dst, double scale, const param_set & src) {
    require_same_layout(dst, src, "elementwise_axpy");
    const auto & k = kernels::active();
    param_set out;
    out.meta() = dst.meta();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const auto & ed = dst.entry(i);
        const auto & es = src.entry(i);
        tensor t = tensor::zeros(ed.tens.shape);
        k.axpy_f32(ed.tens.data.data(), es.tens.data.data(), scale, t.data.data(), t.numel());
        check_finite(t, "elementwise_axpy result '" + ed.name + "'");
        out.add(ed.name, ed.layer_index, std::move(t));
    }
    return out;
}

void validate_aligned(std::span<const param_set * const> sets) {
    if (sets.empty()) {
        throw invalid_argument("validate_aligned: no sets given");
    }
    sets[0]->check_layers();
    for (std::size_t i = 1; i < sets.size(); ++i) {
        require_same_layout(*sets[0], *sets[i], "validate_aligned(set " + std::to_string(i) + ")");
    }
}

void validate_aligned(const param_set & a, const param_set & b) {
    const param_set * sets[2] = {&a, &b};
    validate_aligned(std::span<const param_set * const>(sets, 2));
}

} // namespace tvmerge
