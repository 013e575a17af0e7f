#pragma once

#include <string>
#include <vector>

#include "coattn/tensor.hpp"

namespace coattn {

/// Lossless payload encodings for checkpoint tensors.
enum class RealEncoding { kBase64, kHexFloat };

const char* encoding_name(RealEncoding e);
RealEncoding encoding_from_name(const std::string& name);

/// Doubles as base64 over their little-endian 64-bit words.
std::string base64_encode_doubles(const double* data, std::size_t n);
std::vector<double> base64_decode_doubles(const std::string& text);

/// Doubles as comma-separated C hex-float literals.
std::string hex_encode_doubles(const double* data, std::size_t n);
std::vector<double> hex_decode_doubles(const std::string& text);

std::string encode_doubles(const double* data, std::size_t n, RealEncoding e);
std::vector<double> decode_doubles(const std::string& text, RealEncoding e);

}  // namespace coattn
