#include "riskrjt/config_index.hpp"

#include <stdexcept>
#include <string>

namespace riskrjt {

ConfigIndexer::ConfigIndexer(std::vector<NodeId> scope, std::vector<std::size_t> radices)
    : scope_(std::move(scope)), radices_(std::move(radices)) {
    if (scope_.size() != radices_.size()) {
        throw std::invalid_argument("ConfigIndexer: scope and radices differ in length");
    }
    init();
}

ConfigIndexer::ConfigIndexer(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
    init();
}

void ConfigIndexer::init() {
    strides_.assign(radices_.size(), 1);
    total_ = 1;
    for (std::size_t k = radices_.size(); k-- > 0;) {
        if (radices_[k] == 0) throw std::invalid_argument("ConfigIndexer: zero radix");
        strides_[k] = total_;
        total_ = saturating_mul(total_, radices_[k]);
        if (total_ == UINT64_MAX) {
            throw CapExceeded("configuration space", UINT64_MAX, UINT64_MAX - 1);
        }
    }
}

std::uint64_t ConfigIndexer::index(std::span<const int> states) const {
    if (states.size() != radices_.size()) {
        throw std::out_of_range("ConfigIndexer: tuple has " + std::to_string(states.size()) +
                                " entries, scope has " + std::to_string(radices_.size()));
    }
    std::uint64_t flat = 0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k] < 0 || static_cast<std::size_t>(states[k]) >= radices_[k]) {
            throw std::out_of_range("ConfigIndexer: state " + std::to_string(states[k]) +
                                    " out of range at position " + std::to_string(k));
        }
        flat += static_cast<std::uint64_t>(states[k]) * strides_[k];
    }
    return flat;
}

std::vector<int> ConfigIndexer::decode(std::uint64_t index) const {
    std::vector<int> out(radices_.size());
    decode_into(index, out);
    return out;
}

void ConfigIndexer::decode_into(std::uint64_t index, std::span<int> out) const {
    if (index >= total_) {
        throw std::out_of_range("ConfigIndexer: index " + std::to_string(index) +
                                " >= total " + std::to_string(total_));
    }
    for (std::size_t k = radices_.size(); k-- > 0;) {
        out[k] = static_cast<int>(index % radices_[k]);
        index /= radices_[k];
    }
}

}  // namespace riskrjt
