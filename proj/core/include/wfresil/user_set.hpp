#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace wfresil {

// Fixed-universe bitset over user indices, used for removal sets and memo keys.
class UserSet {
public:
    UserSet() = default;
    explicit UserSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    [[nodiscard]] std::size_t universe() const noexcept { return universe_; }

    [[nodiscard]] bool contains(std::size_t u) const noexcept {
        return u < universe_ && ((words_[u / 64] >> (u % 64)) & 1U) != 0;
    }
    void insert(std::size_t u) noexcept { words_[u / 64] |= std::uint64_t{1} << (u % 64); }
    void erase(std::size_t u) noexcept { words_[u / 64] &= ~(std::uint64_t{1} << (u % 64)); }

    [[nodiscard]] std::size_t size() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    [[nodiscard]] bool empty() const noexcept { return size() == 0; }
    [[nodiscard]] bool full() const noexcept { return size() == universe_; }

    [[nodiscard]] std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t u = 0; u < universe_; ++u)
            if (contains(u)) out.push_back(u);
        return out;
    }

    [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    bool operator==(const UserSet&) const = default;
    auto operator<=>(const UserSet&) const = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace wfresil
