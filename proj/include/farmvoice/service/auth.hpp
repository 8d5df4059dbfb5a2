#pragma once

#include <string>
#include <string_view>

namespace fv::service {

/// "pbkdf2-sha256$<iterations>$<salt hex>$<hash hex>"
std::string hash_credential(std::string_view password, int iterations);

/// Constant-time comparison of the derived key. Malformed encodings verify
/// as false.
bool verify_credential(std::string_view password, std::string_view encoded);

/// 32 random bytes, hex encoded (256 bits of entropy).
std::string new_session_token();

/// SHA-256 hex digest; sessions are stored by the digest of their token.
std::string token_digest(std::string_view token);

std::string to_hex(const unsigned char* data, std::size_t n);

}  // namespace fv::service
