#include "coattn/vocab.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "coattn/errors.hpp"
#include "coattn/rng.hpp"

namespace coattn {

Vocabulary::Vocabulary() {
  add(kPadToken);
  add(kUnkToken);
}

int Vocabulary::add(const std::string& token) {
  auto it = ids_.find(token);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(tokens_.size());
  ids_.emplace(token, id);
  tokens_.push_back(token);
  return id;
}

int Vocabulary::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return ids_.count(token) > 0;
}

const std::string& Vocabulary::token_of(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw VocabularyError("token id " + std::to_string(id) +
                          " outside vocabulary of size " +
                          std::to_string(tokens_.size()));
  return tokens_[static_cast<std::size_t>(id)];
}

std::string Vocabulary::to_json() const {
  // std::map keeps keys sorted, so the dump is canonical
  nlohmann::json j = nlohmann::json::object();
  std::map<std::string, int> sorted(ids_.begin(), ids_.end());
  for (const auto& [tok, id] : sorted) j[tok] = id;
  return j.dump(2) + "\n";
}

Vocabulary Vocabulary::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("vocabulary parse error: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("vocabulary must be a JSON object");

  std::vector<std::string> by_id(j.size());
  for (const auto& [tok, idj] : j.items()) {
    if (!idj.is_number_integer())
      throw ValidationError("vocabulary id for '" + tok +
                            "' is not an integer");
    int id = idj.get<int>();
    if (id < 0 || static_cast<std::size_t>(id) >= j.size())
      throw ValidationError("vocabulary ids must be dense in [0, " +
                            std::to_string(j.size()) + "), got " +
                            std::to_string(id));
    if (!by_id[static_cast<std::size_t>(id)].empty())
      throw ValidationError("vocabulary id " + std::to_string(id) +
                            " assigned twice");
    by_id[static_cast<std::size_t>(id)] = tok;
  }
  if (by_id.size() < 2 || by_id[0] != kPadToken || by_id[1] != kUnkToken)
    throw ValidationError(std::string("vocabulary must map ") + kPadToken +
                          " to 0 and " + kUnkToken + " to 1");

  Vocabulary v;
  for (std::size_t i = 2; i < by_id.size(); ++i) v.add(by_id[i]);
  return v;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open vocabulary file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write vocabulary file " + path);
  out << to_json();
}

std::uint64_t Vocabulary::hash() const { return fnv1a(to_json()); }

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> tokenize_to_ids(const std::string& text,
                                 const Vocabulary& vocab) {
  std::vector<int> ids;
  for (const std::string& tok : tokenize(text)) ids.push_back(vocab.id_of(tok));
  return ids;
}

}  // namespace coattn
