#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace coattn {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";

/// Token-to-id map with dense ids in [0, size). Id 0 is always the padding
/// token and id 1 the unknown token.
class Vocabulary {
 public:
  Vocabulary();

  /// Adds a token if absent; returns its id either way.
  int add(const std::string& token);

  /// Id for a token, or the unknown id when absent.
  int id_of(const std::string& token) const;
  bool contains(const std::string& token) const;
  const std::string& token_of(int id) const;

  std::size_t size() const { return tokens_.size(); }

  /// Serialized form: a JSON object mapping token to id.
  std::string to_json() const;
  static Vocabulary from_json(const std::string& text);
  static Vocabulary load(const std::string& path);
  void save(const std::string& path) const;

  /// Stable fingerprint of the canonical JSON form.
  std::uint64_t hash() const;

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> tokens_;
};

/// Lowercases and splits on runs of non-alphanumeric characters.
std::vector<std::string> tokenize(const std::string& text);

/// Tokenizes and maps to ids; unknown tokens become the unknown id.
std::vector<int> tokenize_to_ids(const std::string& text,
                                 const Vocabulary& vocab);

}  // namespace coattn
