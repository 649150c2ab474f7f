#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snmine {

struct Token {
  std::string text;
  std::uint32_t position = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits UTF-8 text into lowercase, NFC-normalized tokens.
///
/// A token is a maximal run of letters, combining marks and numbers; every
/// other code point (whitespace, punctuation, symbols) separates tokens.
/// Positions count tokens, not bytes. Throws InvalidUtf8Error.
std::vector<Token> tokenize(std::string_view text);

/// Token strings only, in order.
std::vector<std::string> tokenize_words(std::string_view text);

struct Document {
  std::string doc_id;
  std::string text;
  std::vector<Token> tokens;

  /// Tokenizes `text`; invalid UTF-8 raises IngestError naming `doc_id`.
  static Document from_text(std::string doc_id, std::string text);

  friend bool operator==(const Document&, const Document&) = default;
};

/// Immutable, doc_id-ordered collection of documents.
class Corpus {
 public:
  Corpus() = default;
  /// Sorts by doc_id. Throws DuplicateIdError on repeated ids.
  Corpus(std::vector<Document> documents, std::string source);

  /// Convenience for in-memory corpora: (doc_id, text) pairs.
  static Corpus from_texts(
      const std::vector<std::pair<std::string, std::string>>& texts,
      std::string source = "memory");

  const std::vector<Document>& documents() const noexcept { return documents_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Document> documents_;
  std::string source_;
};

/// One document per regular `*.txt` file directly inside `dir`; doc_id is
/// the file stem.
Corpus ingest_directory(const std::filesystem::path& dir);

/// One document per line of `{"id": ..., "text": ...}`. Blank lines are
/// skipped; errors report the 1-based line number.
Corpus ingest_jsonl(const std::filesystem::path& path);

/// Directory -> ingest_directory, anything else -> ingest_jsonl.
Corpus ingest(const std::filesystem::path& path);

}  // namespace snmine
