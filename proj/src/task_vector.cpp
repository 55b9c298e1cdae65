#include "tvmerge/task_vector.hpp"

#include "tvmerge/checkpoint.hpp"
#include "tvmerge/errors.hpp"
#include "tvmerge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tvmerge {

merge_coefficients merge_coefficients::task_wise(std::vector<double> vals,
                                                 std::vector<std::string> ids) {
    merge_coefficients c;
    c.mode = arrangement::task_wise;
    c.task_count = vals.size();
    c.layer_count = 1;
    c.values = std::move(vals);
    c.task_ids = std::move(ids);
    return c;
}

merge_coefficients merge_coefficients::layer_wise(std::size_t tasks, std::size_t layers,
                                                  std::vector<double> vals,
                                                  std::vector<std::string> ids) {
    if (vals.size() != tasks * layers) {
        throw coefficient_arity_mismatch("layer_wise wants " + std::to_string(tasks * layers) +
                                         " values, got " + std::to_string(vals.size()));
    }
    merge_coefficients c;
    c.mode = arrangement::layer_wise;
    c.task_count = tasks;
    c.layer_count = layers;
    c.values = std::move(vals);
    c.task_ids = std::move(ids);
    return c;
}

merge_coefficients merge_coefficients::constant(arrangement mode, std::size_t tasks,
                                                std::size_t layers, double value) {
    if (mode == arrangement::task_wise) {
        return task_wise(std::vector<double>(tasks, value));
    }
    return layer_wise(tasks, layers, std::vector<double>(tasks * layers, value));
}

void merge_coefficients::check(std::size_t expected_tasks, std::size_t expected_layers) const {
    if (task_count == 0) {
        throw coefficient_arity_mismatch("coefficient set has no tasks");
    }
    if (task_count != expected_tasks) {
        throw coefficient_arity_mismatch("coefficients cover " + std::to_string(task_count) +
                                         " tasks, expected " + std::to_string(expected_tasks));
    }
    if (mode == arrangement::task_wise) {
        if (values.size() != task_count) {
            throw coefficient_arity_mismatch("task_wise arity " + std::to_string(values.size()) +
                                             " != K = " + std::to_string(task_count));
        }
    } else {
        if (layer_count != expected_layers) {
            throw coefficient_arity_mismatch("coefficients cover " + std::to_string(layer_count) +
                                             " layers, expected " + std::to_string(expected_layers));
        }
        if (values.size() != task_count * layer_count) {
            throw coefficient_arity_mismatch("layer_wise arity " + std::to_string(values.size()) +
                                             " != K*L = " + std::to_string(task_count * layer_count));
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw non_finite("merge coefficient is not finite");
        }
    }
}

task_vector make_task_vector(const param_set & theta_k, const param_set & theta_pre) {
    validate_aligned(theta_k, theta_pre);
    task_vector tv;
    tv.delta = elementwise_axpy(theta_k, -1.0, theta_pre);
    tv.delta.meta().clear();
    auto it = theta_k.meta().find("task_id");
    if (it != theta_k.meta().end()) {
        tv.source_task = it->second;
    }
    tv.processed = task_vector::processing::raw;
    return tv;
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::vector<const param_set *> delta_ptrs(const std::vector<task_vector> & vectors) {
    std::vector<const param_set *> ptrs;
    ptrs.reserve(vectors.size());
    for (const auto & v : vectors) {
        ptrs.push_back(&v.delta);
    }
    return ptrs;
}

// Flat view of a param_set: concatenation of tensors in entry order.
std::vector<float> flatten(const param_set & p) {
    std::vector<float> flat;
    flat.reserve(p.numel());
    for (const auto & e : p.entries()) {
        flat.insert(flat.end(), e.tens.data.begin(), e.tens.data.end());
    }
    return flat;
}

param_set unflatten_like(const param_set & layout, const std::vector<float> & flat) {
    param_set out;
    std::size_t pos = 0;
    for (const auto & e : layout.entries()) {
        std::size_t n = e.tens.numel();
        tensor t(e.tens.shape, std::vector<float>(flat.begin() + pos, flat.begin() + pos + n));
        out.add(e.name, e.layer_index, std::move(t));
        pos += n;
    }
    return out;
}

} // namespace

std::vector<task_vector> phi(const std::vector<task_vector> & vectors, double keep_fraction) {
    if (vectors.empty()) {
        throw invalid_argument("phi needs at least one task vector");
    }
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
        throw invalid_fraction("keep_fraction must be in (0, 1], got " + std::to_string(keep_fraction));
    }
    for (const auto & v : vectors) {
        if (v.processed != task_vector::processing::raw) {
            throw invalid_argument("phi expects raw task vectors ('" + v.source_task +
                                   "' is already processed)");
        }
    }
    auto ptrs = delta_ptrs(vectors);
    validate_aligned(std::span<const param_set * const>(ptrs.data(), ptrs.size()));

    const std::size_t n_tasks = vectors.size();
    const std::size_t dim = vectors[0].delta.numel();
    const std::size_t keep = static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(dim)));

    // Stage 1: trim each vector to its `keep` largest-magnitude coordinates.
    std::vector<std::vector<float>> trimmed(n_tasks);
    for (std::size_t k = 0; k < n_tasks; ++k) {
        std::vector<float> flat = flatten(vectors[k].delta);
        if (keep < dim) {
            std::vector<std::size_t> order(dim);
            std::iota(order.begin(), order.end(), 0);
            auto more_important = [&](std::size_t a, std::size_t b) {
                float ma = std::fabs(flat[a]);
                float mb = std::fabs(flat[b]);
                return ma > mb || (ma == mb && a < b);
            };
            std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep) - 1,
                             order.end(), more_important);
            std::vector<float> kept(dim, 0.0f);
            for (std::size_t i = 0; i < keep; ++i) {
                kept[order[i]] = flat[order[i]];
            }
            trimmed[k] = std::move(kept);
        } else {
            trimmed[k] = std::move(flat);
        }
    }

    // Stages 2 + 3: elect a sign per coordinate, then spread the disjoint
    // mean over the sign-matching tasks.
    std::vector<std::vector<float>> result(n_tasks, std::vector<float>(dim, 0.0f));
    for (std::size_t j = 0; j < dim; ++j) {
        double total = 0.0;
        for (std::size_t k = 0; k < n_tasks; ++k) {
            total += static_cast<double>(trimmed[k][j]);
        }
        int elected = sign_of(total);
        if (elected == 0) {
            continue;
        }
        int matching = 0;
        for (std::size_t k = 0; k < n_tasks; ++k) {
            if (sign_of(trimmed[k][j]) == elected) {
                ++matching;
            }
        }
        for (std::size_t k = 0; k < n_tasks; ++k) {
            if (sign_of(trimmed[k][j]) == elected) {
                result[k][j] = static_cast<float>(static_cast<double>(trimmed[k][j]) /
                                                  static_cast<double>(matching));
            }
        }
    }

    std::vector<task_vector> out;
    out.reserve(n_tasks);
    for (std::size_t k = 0; k < n_tasks; ++k) {
        task_vector tv;
        tv.delta = unflatten_like(vectors[k].delta, result[k]);
        tv.source_task = vectors[k].source_task;
        tv.processed = task_vector::processing::phi;
        out.push_back(std::move(tv));
    }
    return out;
}

param_set compose(const param_set & theta_pre, const std::vector<task_vector> & vectors,
                  const merge_coefficients & coeffs) {
    std::vector<const param_set *> ptrs{&theta_pre};
    for (const auto & v : vectors) {
        ptrs.push_back(&v.delta);
    }
    validate_aligned(std::span<const param_set * const>(ptrs.data(), ptrs.size()));
    coeffs.check(vectors.size(), theta_pre.layer_count());

    const auto & k = kernels::active();
    param_set out;
    out.meta() = theta_pre.meta();
    std::vector<double> acc;
    for (std::size_t i = 0; i < theta_pre.size(); ++i) {
        const auto & base = theta_pre.entry(i);
        const std::size_t n = base.tens.numel();
        acc.resize(n);
        k.widen_f32(base.tens.data.data(), acc.data(), n);
        for (std::size_t t = 0; t < vectors.size(); ++t) {
            double lambda = coeffs.at(t, base.layer_index);
            k.accum_f32(acc.data(), vectors[t].delta.entry(i).tens.data.data(), lambda, n);
        }
        tensor result = tensor::zeros(base.tens.shape);
        k.narrow_f64(acc.data(), result.data.data(), n);
        check_finite(result, "compose result '" + base.name + "'");
        out.add(base.name, base.layer_index, std::move(result));
    }
    return out;
}

param_set fixed_task_arithmetic(const param_set & theta_pre, const std::vector<task_vector> & vectors,
                                double lambda) {
    return compose(theta_pre, vectors,
                   merge_coefficients::constant(merge_coefficients::arrangement::task_wise,
                                                vectors.size(), 1, lambda));
}

void save_task_vector(const task_vector & v, const std::string & path) {
    param_set p = v.delta;
    p.meta()["processed"] = v.processed == task_vector::processing::phi ? "phi" : "raw";
    p.meta()["source_task"] = v.source_task;
    save_checkpoint(p, path);
}

task_vector load_task_vector(const std::string & path) {
    param_set p = load_checkpoint(path);
    task_vector tv;
    auto proc = p.meta().find("processed");
    tv.processed = (proc != p.meta().end() && proc->second == "phi") ? task_vector::processing::phi
                                                                     : task_vector::processing::raw;
    auto src = p.meta().find("source_task");
    if (src != p.meta().end()) {
        tv.source_task = src->second;
    }
    p.meta().erase("processed");
    p.meta().erase("source_task");
    tv.delta = std::move(p);
    return tv;
}

} // namespace tvmerge
