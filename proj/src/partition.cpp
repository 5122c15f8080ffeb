#include "lrnewton/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lrnewton/errors.hpp"

namespace lrn {

ParameterSet::ParameterSet(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("ParameterSet: empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw InvalidArgument("ParameterSet: non-finite value");
        if (i > 0 && !(values_[i - 1] < values_[i])) {
            throw InvalidArgument("ParameterSet: values must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

ParameterSet ParameterSet::uniform(double lo, double hi, std::size_t count) {
    if (count == 0) throw InvalidArgument("ParameterSet::uniform: count must be positive");
    if (count == 1) return ParameterSet({lo});
    if (!(lo < hi)) throw InvalidArgument("ParameterSet::uniform: interval is degenerate");
    std::vector<double> v(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
    v.back() = hi;
    return ParameterSet(std::move(v));
}

std::size_t upper_median_index(std::size_t n) {
    if (n == 0) throw InvalidArgument("upper_median_index: empty set");
    return n / 2 + 1;
}

ParameterPartition::ParameterPartition(ParameterSet parent, std::vector<std::size_t> boundaries)
    : parent_(std::move(parent)), boundaries_(std::move(boundaries)) {
    if (boundaries_.size() < 2 || boundaries_.front() != 0 || boundaries_.back() != parent_.size()) {
        throw InvalidPartition("partition boundaries must run from 0 to the set size");
    }
    for (std::size_t k = 0; k + 1 < boundaries_.size(); ++k) {
        if (boundaries_[k] >= boundaries_[k + 1]) throw InvalidPartition("partition has an empty subset");
    }
}

std::size_t ParameterPartition::begin(std::size_t k) const {
    if (k >= num_subsets()) throw InvalidArgument("subset index " + std::to_string(k) + " out of range");
    return boundaries_[k];
}

std::size_t ParameterPartition::end(std::size_t k) const {
    if (k >= num_subsets()) throw InvalidArgument("subset index " + std::to_string(k) + " out of range");
    return boundaries_[k + 1];
}

std::span<const double> ParameterPartition::values(std::size_t k) const {
    return parent_.values().subspan(begin(k), subset_size(k));
}

std::size_t ParameterPartition::subset_of(std::size_t i) const {
    if (i >= parent_.size()) throw InvalidArgument("parameter index " + std::to_string(i) + " out of range");
    auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), i);
    return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

ParameterPartition split(const ParameterSet& s, std::size_t k) {
    const std::size_t m = s.size();
    if (k == 0 || k > m) {
        throw InvalidPartition("cannot split " + std::to_string(m) + " parameters into " + std::to_string(k) +
                               " subsets");
    }
    const std::size_t q = m / k;
    const std::size_t r = m % k;
    std::vector<std::size_t> b(k + 1, 0);
    for (std::size_t j = 0; j < k; ++j) b[j + 1] = b[j] + q + (j < r ? 1 : 0);
    return ParameterPartition(s, std::move(b));
}

SubsetShifts subset_diag(const ParameterPartition& p, std::size_t k, double mu_ref) {
    const auto v = p.values(k);
    SubsetShifts out;
    out.values.assign(v.begin(), v.end());
    out.shifts.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.shifts[i] = v[i] - mu_ref;
    return out;
}

}  // namespace lrn
