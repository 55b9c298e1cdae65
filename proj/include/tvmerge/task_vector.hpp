#pragma once

#include "tvmerge/param_set.hpp"

#include <string>
#include <vector>

namespace tvmerge {

// Weight delta between a fine-tuned model and its pretrained initialization.
struct task_vector {
    enum class processing { raw, phi };

    param_set delta; // same layout as the pretrained set
    std::string source_task;
    processing processed = processing::raw;
};

// Learnable merging coefficients: one scalar per task, or one per
// (task, layer) pair. Values are unconstrained reals; the optimizer is free
// to leave [0, 1].
struct merge_coefficients {
    enum class arrangement { task_wise, layer_wise };

    arrangement mode = arrangement::task_wise;
    std::size_t task_count = 0;
    std::size_t layer_count = 1;           // meaningful for layer_wise only
    std::vector<double> values;            // K, or K*L row-major [task][layer]
    std::vector<std::string> task_ids;

    static merge_coefficients task_wise(std::vector<double> vals, std::vector<std::string> ids = {});
    static merge_coefficients layer_wise(std::size_t tasks, std::size_t layers,
                                         std::vector<double> vals, std::vector<std::string> ids = {});
    static merge_coefficients constant(arrangement mode, std::size_t tasks, std::size_t layers,
                                       double value);

    double at(std::size_t task) const { return values[task]; }
    double at(std::size_t task, std::size_t layer) const {
        return mode == arrangement::task_wise ? values[task] : values[task * layer_count + layer];
    }
    std::size_t arity() const { return values.size(); }

    void check(std::size_t expected_tasks, std::size_t expected_layers) const;
};

// delta = theta_k - theta_pre, coordinate-wise.
task_vector make_task_vector(const param_set & theta_k, const param_set & theta_pre);

// Trim / elect sign / disjoint merge across a whole task-vector list.
//
// Coordinates index the flattened concatenation of tensors in entry order.
// With D total coordinates and m = ceil(keep_fraction * D):
//   1. trim: per vector, keep the m largest coordinates by |value| (ties by
//      lower flat index), zero the rest;
//   2. elect: per coordinate, s = sign of the sum (double, ascending task
//      order) of trimmed values; sign(0) = 0 and exact zeros never vote;
//   3. merge: a trimmed value whose sign matches s is divided by the number
//      of sign-matching tasks at that coordinate (double quotient, rounded
//      once to f32); everything else becomes 0.
// Summing the returned vectors therefore yields the disjoint mean of the
// sign-agreeing trimmed values at every coordinate.
std::vector<task_vector> phi(const std::vector<task_vector> & vectors, double keep_fraction);

// theta_pre + sum_k lambda_k * T_k (task-wise), or the per-layer form with
// lambda_k^l (layer-wise). Accumulates each coordinate in double across
// tasks and rounds once to f32.
param_set compose(const param_set & theta_pre, const std::vector<task_vector> & vectors,
                  const merge_coefficients & coeffs);

inline constexpr double k_default_lambda = 0.3;

// compose with every coefficient equal to lambda.
param_set fixed_task_arithmetic(const param_set & theta_pre, const std::vector<task_vector> & vectors,
                                double lambda = k_default_lambda);

// TVCK round-trip with meta keys "processed" (raw|phi) and "source_task".
void save_task_vector(const task_vector & v, const std::string & path);
task_vector load_task_vector(const std::string & path);

} // namespace tvmerge
