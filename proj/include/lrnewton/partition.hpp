#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lrn {

/// Strictly increasing set of shear moduli.
class ParameterSet {
public:
    /// Throws InvalidArgument unless `values` is nonempty, finite and strictly increasing.
    explicit ParameterSet(std::vector<double> values);

    /// `count` points spaced uniformly over [lo, hi], both endpoints included.
    static ParameterSet uniform(double lo, double hi, std::size_t count);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

private:
    std::vector<double> values_;
};

/// 1-based index of the upper median of a sorted set of size n: floor(n/2)+1.
std::size_t upper_median_index(std::size_t n);

/// K contiguous, disjoint, balanced index ranges covering a ParameterSet.
/// Subset k spans global indices [begin(k), end(k)), 0-based.
class ParameterPartition {
public:
    ParameterPartition(ParameterSet parent, std::vector<std::size_t> boundaries);

    const ParameterSet& parent() const noexcept { return parent_; }
    std::size_t num_subsets() const noexcept { return boundaries_.size() - 1; }
    std::span<const std::size_t> boundaries() const noexcept { return boundaries_; }

    std::size_t begin(std::size_t k) const;
    std::size_t end(std::size_t k) const;
    std::size_t subset_size(std::size_t k) const { return end(k) - begin(k); }
    std::span<const double> values(std::size_t k) const;

    /// 1-based position of the upper median inside subset k.
    std::size_t median_local_index(std::size_t k) const { return upper_median_index(subset_size(k)); }
    /// 0-based global index of subset k's upper median.
    std::size_t median_global_index(std::size_t k) const { return begin(k) + median_local_index(k) - 1; }
    double median_value(std::size_t k) const { return parent_[median_global_index(k)]; }

    /// Subset containing global index i.
    std::size_t subset_of(std::size_t i) const;

    friend bool operator==(const ParameterPartition&, const ParameterPartition&) = default;

private:
    ParameterSet parent_;
    std::vector<std::size_t> boundaries_;
};

/// Balanced split into K subsets; with m = qK + r the first r subsets get q+1
/// elements. Throws InvalidPartition when K == 0 or K > m.
ParameterPartition split(const ParameterSet& s, std::size_t k);

struct SubsetShifts {
    std::vector<double> shifts;  // mu_i - mu_ref
    std::vector<double> values;  // mu_i
};

/// Diagonal of D_k = diag(mu_i) - mu_ref * I and the parameter vector of subset k.
SubsetShifts subset_diag(const ParameterPartition& p, std::size_t k, double mu_ref);

}  // namespace lrn
