#include "mcdnn/rng.hpp"

namespace mcdnn {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::unit() {
    // 53 top bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi)) throw ShapeError("uniform: invalid range, lo must be < hi");
    return lo + unit() * (hi - lo);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ShapeError("below: n must be positive");
    return next_u64() % n;
}

std::uint64_t Rng::hash_words(std::initializer_list<std::uint64_t> words) {
    std::uint64_t x = 0x9E3779B97F4A7C15ull;
    for (std::uint64_t w : words) {
        x ^= w + 0x9E3779B97F4A7C15ull + (x << 6) + (x >> 2);
        std::uint64_t s = x;
        x = splitmix64(s);
    }
    return x;
}

Rng Rng::derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(hash_words({seed, stream}));
}

} // namespace mcdnn
