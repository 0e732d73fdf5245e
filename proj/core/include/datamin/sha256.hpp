#ifndef DATAMIN_SHA256_HPP
#define DATAMIN_SHA256_HPP

#include <string>
#include <string_view>

namespace datamin {

// FIPS 180-4 SHA-256, hex-encoded. Self-contained so the core library
// carries no crypto dependency for one content hash.
std::string sha256_hex(std::string_view data);

}  // namespace datamin

#endif
