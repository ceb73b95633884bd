#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace ltsynth {

// Dynamic bitset used for state sets over S_Psi.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    void resize(std::size_t n) { n_ = n; w_.resize((n + 63) / 64, 0); }

    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { w_[i >> 6] |= (uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    bool any() const {
        for (auto x : w_)
            if (x) return true;
        return false;
    }
    bool none() const { return !any(); }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += std::popcount(x);
        return c;
    }
    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bits& operator&=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bits& minus(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }
    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
    friend Bits operator-(Bits a, const Bits& b) { return a.minus(b); }

    bool operator==(const Bits& o) const { return w_ == o.w_; }
    // bitset order: compare as little-endian integers from the lowest state up
    bool operator<(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            if (w_[i] == o.w_[i]) continue;
            uint64_t d = w_[i] ^ o.w_[i];
            uint64_t low = d & (~d + 1);
            return (o.w_[i] & low) != 0;
        }
        return false;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            uint64_t x = w_[i];
            while (x) {
                int b = std::countr_zero(x);
                f(i * 64 + b);
                x &= x - 1;
            }
        }
    }
    std::vector<int> elements() const {
        std::vector<int> r;
        for_each([&](std::size_t i) { r.push_back(int(i)); });
        return r;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : w_) h = (h ^ x) * 1099511628211ull;
        return h;
    }
    const std::vector<uint64_t>& words() const { return w_; }

private:
    std::size_t n_ = 0;
    std::vector<uint64_t> w_;
};

inline void hash_mix(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

} // namespace ltsynth

template <>
struct std::hash<ltsynth::Bits> {
    std::size_t operator()(const ltsynth::Bits& b) const { return b.hash(); }
};
