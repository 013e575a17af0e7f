#include "coattn/serialize.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>

#include "coattn/errors.hpp"

namespace coattn {

const char* encoding_name(RealEncoding e) {
  return e == RealEncoding::kBase64 ? "base64" : "hex";
}

RealEncoding encoding_from_name(const std::string& name) {
  if (name == "base64") return RealEncoding::kBase64;
  if (name == "hex") return RealEncoding::kHexFloat;
  throw DomainError("unknown real encoding '" + name +
                    "' (expected base64 or hex)");
}

namespace {

constexpr char kB64Chars[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

std::uint64_t to_le_bits(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, 8);
  return u;  // this library targets little-endian hosts
}

double from_le_bits(std::uint64_t u) {
  double d;
  std::memcpy(&d, &u, 8);
  return d;
}

}  // namespace

std::string base64_encode_doubles(const double* data, std::size_t n) {
  std::vector<unsigned char> bytes(n * 8);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t u = to_le_bits(data[i]);
    for (int b = 0; b < 8; ++b)
      bytes[i * 8 + static_cast<std::size_t>(b)] =
          static_cast<unsigned char>((u >> (8 * b)) & 0xff);
  }
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    std::uint32_t v = (static_cast<std::uint32_t>(bytes[i]) << 16) |
                      (static_cast<std::uint32_t>(bytes[i + 1]) << 8) |
                      bytes[i + 2];
    out.push_back(kB64Chars[(v >> 18) & 63]);
    out.push_back(kB64Chars[(v >> 12) & 63]);
    out.push_back(kB64Chars[(v >> 6) & 63]);
    out.push_back(kB64Chars[v & 63]);
    i += 3;
  }
  std::size_t rem = bytes.size() - i;
  if (rem == 1) {
    std::uint32_t v = static_cast<std::uint32_t>(bytes[i]) << 16;
    out.push_back(kB64Chars[(v >> 18) & 63]);
    out.push_back(kB64Chars[(v >> 12) & 63]);
    out.push_back('=');
    out.push_back('=');
  } else if (rem == 2) {
    std::uint32_t v = (static_cast<std::uint32_t>(bytes[i]) << 16) |
                      (static_cast<std::uint32_t>(bytes[i + 1]) << 8);
    out.push_back(kB64Chars[(v >> 18) & 63]);
    out.push_back(kB64Chars[(v >> 12) & 63]);
    out.push_back(kB64Chars[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<double> base64_decode_doubles(const std::string& text) {
  std::vector<unsigned char> bytes;
  bytes.reserve(text.size() / 4 * 3);
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    int v = b64_value(c);
    if (v < 0) throw ValidationError("invalid base64 character in payload");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      bytes.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
    }
  }
  if (bytes.size() % 8 != 0)
    throw ValidationError("base64 payload is not a whole number of doubles");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t u = 0;
    for (int b = 7; b >= 0; --b)
      u = (u << 8) | bytes[i * 8 + static_cast<std::size_t>(b)];
    out[i] = from_le_bits(u);
  }
  return out;
}

std::string hex_encode_doubles(const double* data, std::size_t n) {
  std::string out;
  char buf[48];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%a", data[i]);
    if (i) out.push_back(',');
    out += buf;
  }
  return out;
}

std::vector<double> hex_decode_doubles(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str())
      throw ValidationError("invalid hex-float token '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string encode_doubles(const double* data, std::size_t n,
                           RealEncoding e) {
  return e == RealEncoding::kBase64 ? base64_encode_doubles(data, n)
                                    : hex_encode_doubles(data, n);
}

std::vector<double> decode_doubles(const std::string& text, RealEncoding e) {
  return e == RealEncoding::kBase64 ? base64_decode_doubles(text)
                                    : hex_decode_doubles(text);
}

}  // namespace coattn
