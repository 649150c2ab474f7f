#include "snmine/corpus.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include "json.hpp"
#include <sstream>

#include "snmine/error.hpp"

namespace snmine {
namespace {

constexpr std::uint32_t kTokenCategories =
    U_GC_L_MASK | U_GC_M_MASK | U_GC_N_MASK;

bool is_token_char(UChar32 c) {
  return (U_GET_GC_MASK(c) & kTokenCategories) != 0;
}

void check_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) throw InvalidUtf8Error(static_cast<std::size_t>(start));
  }
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error("ICU NFC normalizer unavailable");
  }
  return *n;
}

icu::UnicodeString normalize(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read file: " + path.string());
  std::string data{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  if (in.bad()) throw IngestError("cannot read file: " + path.string());
  return data;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  check_utf8(text);
  const icu::UnicodeString normalized = normalize(icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size()))));

  std::vector<Token> tokens;
  auto flush = [&](std::int32_t begin, std::int32_t end) {
    if (begin >= end) return;
    icu::UnicodeString run(normalized, begin, end - begin);
    run.toLower(icu::Locale::getRoot());
    std::string utf8;
    normalize(run).toUTF8String(utf8);
    if (utf8.empty()) return;
    tokens.push_back(
        {std::move(utf8), static_cast<std::uint32_t>(tokens.size())});
  };

  std::int32_t run_start = -1;
  std::int32_t i = 0;
  const std::int32_t n = normalized.length();
  while (i < n) {
    const UChar32 c = normalized.char32At(i);
    if (is_token_char(c)) {
      if (run_start < 0) run_start = i;
    } else if (run_start >= 0) {
      flush(run_start, i);
      run_start = -1;
    }
    i += U16_LENGTH(c);
  }
  if (run_start >= 0) flush(run_start, n);
  return tokens;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> words;
  for (auto& t : tokenize(text)) words.push_back(std::move(t.text));
  return words;
}

Document Document::from_text(std::string doc_id, std::string text) {
  Document doc;
  try {
    doc.tokens = tokenize(text);
  } catch (const InvalidUtf8Error& e) {
    throw IngestError("document '" + doc_id + "': " + e.what());
  }
  doc.doc_id = std::move(doc_id);
  doc.text = std::move(text);
  return doc;
}

Corpus::Corpus(std::vector<Document> documents, std::string source)
    : documents_(std::move(documents)), source_(std::move(source)) {
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) {
              return a.doc_id < b.doc_id;
            });
  auto dup = std::adjacent_find(documents_.begin(), documents_.end(),
                                [](const Document& a, const Document& b) {
                                  return a.doc_id == b.doc_id;
                                });
  if (dup != documents_.end()) {
    throw DuplicateIdError("duplicate document id: " + dup->doc_id);
  }
}

Corpus Corpus::from_texts(
    const std::vector<std::pair<std::string, std::string>>& texts,
    std::string source) {
  std::vector<Document> docs;
  docs.reserve(texts.size());
  for (const auto& [id, text] : texts) docs.push_back(Document::from_text(id, text));
  return Corpus(std::move(docs), std::move(source));
}

Corpus ingest_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IngestError("not a readable directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".txt") {
      files.push_back(it->path());
    }
  }
  if (ec) throw IngestError("cannot list directory " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& file : files) {
    std::string text = read_file(file);
    try {
      docs.push_back(Document::from_text(file.stem().string(), std::move(text)));
    } catch (const IngestError& e) {
      throw IngestError("file " + file.string() + ": " + e.what());
    }
  }
  return Corpus(std::move(docs), dir.string());
}

Corpus ingest_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read file: " + path.string());

  auto fail = [&](std::size_t line_no, const std::string& why) {
    return IngestError(path.string() + ":" + std::to_string(line_no) + ": " + why);
  };

  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw fail(line_no, "expected a JSON object");
    auto id = obj.find("id");
    auto text = obj.find("text");
    if (id == obj.end() || !id->is_string()) throw fail(line_no, "missing string field \"id\"");
    if (text == obj.end() || !text->is_string()) throw fail(line_no, "missing string field \"text\"");
    try {
      docs.push_back(Document::from_text(id->get<std::string>(), text->get<std::string>()));
    } catch (const IngestError& e) {
      throw fail(line_no, e.what());
    }
  }
  if (in.bad()) throw IngestError("read error: " + path.string());

  try {
    return Corpus(std::move(docs), path.string());
  } catch (const DuplicateIdError& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
}

Corpus ingest(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return ingest_directory(path);
  return ingest_jsonl(path);
}

}  // namespace snmine
