#include "cakeforge/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "cakeforge/text_util.hpp"

namespace cake {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex.append(buf, 2);
  }
  return hex;
}

std::string file_sha256_hex(const std::string& path) { return sha256_hex(text::read_file(path)); }

}  // namespace cake
