#include "hids/rng.hpp"

#include "hids/digest.hpp"

namespace hids {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
    std::uint64_t h = fnv1a64(std::string_view(buf, 8));
    h ^= fnv1a64(tag);
    return h * 0x9e3779b97f4a7c15ull + 1;
}

std::vector<std::uint32_t> shuffled_indices(std::uint32_t n, RandomStream& rng) {
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    for (std::uint32_t i = n; i > 1; --i) {
        std::uint32_t j = rng.below(i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

}  // namespace hids
