#ifndef HIDS_DIGEST_HPP
#define HIDS_DIGEST_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace hids {

// FNV-1a over bytes; stable across platforms, used to fingerprint schemas
// and effective configurations inside artifact files.
std::uint64_t fnv1a64(std::string_view bytes);

// 16 lowercase hex chars.
std::string digest_hex(std::string_view bytes);

}  // namespace hids

#endif
