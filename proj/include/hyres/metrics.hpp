#ifndef HYRES_METRICS_HPP
#define HYRES_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <vector>

#include "hyres/errors.hpp"

namespace hyres {

/// Per-pixel integer class labels; -1 marks unclustered pixels.
struct LabelMask {
    int height = 0;
    int width = 0;
    std::vector<int> labels; // row-major

    LabelMask() = default;
    LabelMask(int h, int w, std::vector<int> data) : height(h), width(w), labels(std::move(data)) {
        if (h < 1 || w < 1) throw validation_error("LabelMask: non-positive dimensions");
        if (labels.size() != static_cast<std::size_t>(h) * w)
            throw validation_error("LabelMask: label count != height*width");
    }

    bool same_dims(const LabelMask& other) const {
        return height == other.height && width == other.width;
    }
};

/// Sorensen-Dice for one class: 2|A and B| / (|A| + |B|); both sets empty -> 1.
inline double dice(const LabelMask& a, const LabelMask& b, int class_id) {
    if (!a.same_dims(b)) throw validation_error("dice: mask dimension mismatch");
    std::size_t na = 0, nb = 0, both = 0;
    for (std::size_t k = 0; k < a.labels.size(); ++k) {
        const bool in_a = a.labels[k] == class_id;
        const bool in_b = b.labels[k] == class_id;
        na += in_a;
        nb += in_b;
        both += in_a && in_b;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

/// Class-mean Dice over classes present in either mask, excluding the
/// unclustered label -1.
inline double dice_mean(const LabelMask& a, const LabelMask& b) {
    if (!a.same_dims(b)) throw validation_error("dice_mean: mask dimension mismatch");
    std::set<int> classes(a.labels.begin(), a.labels.end());
    classes.insert(b.labels.begin(), b.labels.end());
    classes.erase(-1);
    if (classes.empty()) throw validation_error("dice_mean: no clustered classes");
    double total = 0.0;
    for (int c : classes) total += dice(a, b, c);
    return total / static_cast<double>(classes.size());
}

namespace detail {

// mid-ranks: ties get the average of the ranks they span (1-based)
inline std::vector<double> mid_ranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = x[k] - mx, dy = y[k] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw validation_error("spearman: zero-variance rank sequence");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace detail

/// Pearson correlation of mid-ranks.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw validation_error("spearman: length mismatch");
    if (x.size() < 3) throw validation_error("spearman: need at least 3 samples");
    return detail::pearson(detail::mid_ranks(x), detail::mid_ranks(y));
}

/// Mann-Whitney AUC: P(random positive outscores random negative), ties 1/2.
inline double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw validation_error("roc_auc: length mismatch");
    if (scores.size() < 2) throw validation_error("roc_auc: need at least 2 samples");
    // rank-sum formulation handles ties exactly via mid-ranks
    const std::vector<double> ranks = detail::mid_ranks(scores);
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] != 0 && labels[k] != 1)
            throw validation_error("roc_auc: labels must be 0 or 1");
        if (labels[k] == 1) {
            rank_sum_pos += ranks[k];
            ++n_pos;
        } else {
            ++n_neg;
        }
    }
    if (n_pos == 0 || n_neg == 0) throw validation_error("roc_auc: single-class input");
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

/// Arithmetic mean of sensitivity and specificity.
inline double balanced_accuracy(double sensitivity, double specificity) {
    if (!(sensitivity >= 0.0 && sensitivity <= 1.0) || !(specificity >= 0.0 && specificity <= 1.0))
        throw validation_error("balanced_accuracy: inputs must be in [0,1]");
    return 0.5 * (sensitivity + specificity);
}

} // namespace hyres

#endif
