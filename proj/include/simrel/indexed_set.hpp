#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace simrel {

/// Set of small integer ids: a membership bitmap plus the list of members in
/// insertion order. Insert and lookup are amortized O(1); iteration and
/// clear are linear in the number of members.
template <typename Id = std::uint32_t>
class IndexedSet {
public:
    bool insert(Id id)
    {
        if (id >= member_.size()) {
            member_.resize(std::max<std::size_t>(id + 1, member_.size() * 2), 0);
        }
        if (member_[id]) {
            return false;
        }
        member_[id] = 1;
        items_.push_back(id);
        return true;
    }

    bool contains(Id id) const { return id < member_.size() && member_[id]; }

    void clear()
    {
        for (Id id : items_) {
            member_[id] = 0;
        }
        items_.clear();
    }

    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }

    std::span<const Id> items() const noexcept { return items_; }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }

    void swap(IndexedSet& other) noexcept
    {
        member_.swap(other.member_);
        items_.swap(other.items_);
    }

private:
    std::vector<std::uint8_t> member_;
    std::vector<Id> items_;
};

} // namespace simrel
