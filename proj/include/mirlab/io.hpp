#pragma once

// Input files for the command-line front end. Every malformed-input error
// names the file and a 0-based byte offset into it.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirlab/chordnet.hpp"
#include "mirlab/distributions.hpp"
#include "mirlab/information.hpp"
#include "mirlab/rubato.hpp"

namespace mirlab::io {

using nlohmann::json;

class InputError : public std::runtime_error {
 public:
  InputError(std::string path, std::size_t offset, const std::string& detail)
      : std::runtime_error(path + ": byte " + std::to_string(offset) + ": " + detail),
        path_(std::move(path)),
        offset_(offset) {}
  const std::string& path() const { return path_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string path_;
  std::size_t offset_;
};

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using PathStep = std::variant<std::size_t, std::string>;

namespace detail {

inline std::size_t skip_ws(std::string_view t, std::size_t i) {
  while (i < t.size() && (t[i] == ' ' || t[i] == '\t' || t[i] == '\n' || t[i] == '\r')) ++i;
  return i;
}

// Position just past the string literal starting at `i` (t[i] == '"').
inline std::size_t skip_string(std::string_view t, std::size_t i) {
  for (++i; i < t.size(); ++i) {
    if (t[i] == '\\') ++i;
    else if (t[i] == '"') return i + 1;
  }
  return t.size();
}

// Position just past the value starting at `i`. Text is known-valid JSON.
inline std::size_t skip_value(std::string_view t, std::size_t i) {
  if (i >= t.size()) return i;
  if (t[i] == '"') return skip_string(t, i);
  if (t[i] == '[' || t[i] == '{') {
    int depth = 0;
    while (i < t.size()) {
      const char c = t[i];
      if (c == '"') {
        i = skip_string(t, i);
        continue;
      }
      if (c == '[' || c == '{') ++depth;
      if (c == ']' || c == '}') {
        if (--depth == 0) return i + 1;
      }
      ++i;
    }
    return i;
  }
  while (i < t.size() && t[i] != ',' && t[i] != ']' && t[i] != '}' &&
         !std::isspace(static_cast<unsigned char>(t[i]))) {
    ++i;
  }
  return i;
}

}  // namespace detail

/// Byte offset where the value at `path` starts in `text`, which must be
/// valid JSON. Falls back to the deepest container reached when the path
/// does not resolve.
inline std::size_t value_offset(std::string_view text, const std::vector<PathStep>& path) {
  std::size_t i = detail::skip_ws(text, 0);
  for (const auto& step : path) {
    if (i >= text.size()) return i;
    const std::size_t container = i;
    if (const auto* index = std::get_if<std::size_t>(&step)) {
      if (text[i] != '[') return container;
      i = detail::skip_ws(text, i + 1);
      for (std::size_t k = 0; k < *index; ++k) {
        i = detail::skip_ws(text, detail::skip_value(text, i));
        if (i >= text.size() || text[i] != ',') return container;
        i = detail::skip_ws(text, i + 1);
      }
    } else {
      const auto& key = std::get<std::string>(step);
      if (text[i] != '{') return container;
      i = detail::skip_ws(text, i + 1);
      bool found = false;
      while (i < text.size() && text[i] == '"') {
        const std::size_t key_end = detail::skip_string(text, i);
        const auto parsed = json::parse(text.substr(i, key_end - i)).get<std::string>();
        i = detail::skip_ws(text, key_end);
        i = detail::skip_ws(text, i + 1);  // ':'
        if (parsed == key) {
          found = true;
          break;
        }
        i = detail::skip_ws(text, detail::skip_value(text, i));
        if (i < text.size() && text[i] == ',') i = detail::skip_ws(text, i + 1);
      }
      if (!found) return container;
    }
  }
  return i;
}

/// A parsed JSON file that can point at its own values in error messages.
struct JsonDocument {
  std::string path;
  std::string text;
  json root;

  [[noreturn]] void fail(const std::vector<PathStep>& at, const std::string& detail) const {
    throw InputError(path, value_offset(text, at), detail);
  }
};

inline JsonDocument parse_json_text(std::string path, std::string text) {
  JsonDocument doc{std::move(path), std::move(text), {}};
  try {
    doc.root = json::parse(doc.text);
  } catch (const json::parse_error& e) {
    std::string detail = e.what();
    const auto colon = detail.find("] ");
    if (colon != std::string::npos) detail = detail.substr(colon + 2);
    const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, doc.text.size());
    throw InputError(doc.path, offset, detail);
  }
  return doc;
}

inline JsonDocument load_json(const std::filesystem::path& path) {
  return parse_json_text(path.string(), read_text(path));
}

namespace detail {

inline const json& require_array(const JsonDocument& doc, const json& v,
                                 const std::vector<PathStep>& at, std::string_view what) {
  if (!v.is_array()) doc.fail(at, "expected " + std::string(what) + " (a JSON array)");
  return v;
}

inline std::vector<double> numbers_at(const JsonDocument& doc, const json& arr,
                                      std::vector<PathStep> at, std::string_view what) {
  require_array(doc, arr, at, what);
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    at.emplace_back(i);
    if (!v.is_number()) doc.fail(at, "expected a number in " + std::string(what));
    const double x = v.get<double>();
    if (!std::isfinite(x)) doc.fail(at, "number is not finite");
    out.push_back(x);
    at.pop_back();
  }
  return out;
}

inline std::vector<std::uint64_t> counts_at(const JsonDocument& doc, const json& arr,
                                            std::vector<PathStep> at, std::string_view what) {
  require_array(doc, arr, at, what);
  std::vector<std::uint64_t> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    at.emplace_back(i);
    if (!v.is_number_unsigned()) {
      if (v.is_number_float()) {
        const double x = v.get<double>();
        if (x >= 0.0 && x == std::floor(x) && x < 9.0e15) {
          out.push_back(static_cast<std::uint64_t>(x));
          at.pop_back();
          continue;
        }
      }
      doc.fail(at, "expected a non-negative integer count in " + std::string(what));
    }
    out.push_back(v.get<std::uint64_t>());
    at.pop_back();
  }
  return out;
}

inline std::string string_field(const JsonDocument& doc, const json& obj,
                                const std::vector<PathStep>& at, const std::string& key,
                                bool required = true) {
  if (!obj.contains(key)) {
    if (!required) return {};
    doc.fail(at, "missing field \"" + key + "\"");
  }
  auto field_at = at;
  field_at.emplace_back(key);
  if (!obj[key].is_string()) doc.fail(field_at, "field \"" + key + "\" must be a string");
  return obj[key].get<std::string>();
}

inline bool is_json_array_text(std::string_view text) {
  const std::size_t i = skip_ws(text, 0);
  return i < text.size() && text[i] == '[';
}

}  // namespace detail

/// A JSON array of symbol strings, or plain text with one symbol per line
/// (surrounding whitespace trimmed, blank lines ignored).
inline SymbolSequence parse_sequence(const std::string& path, const std::string& text) {
  SymbolSequence seq;
  if (detail::is_json_array_text(text)) {
    const auto doc = parse_json_text(path, text);
    for (std::size_t i = 0; i < doc.root.size(); ++i) {
      if (!doc.root[i].is_string()) doc.fail({i}, "expected a symbol string");
      seq.push_back(doc.root[i].get<std::string>());
    }
    return seq;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::size_t a = start, b = end;
    while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
    if (a < b) {
      for (std::size_t k = a; k < b; ++k) {
        if (text[k] == '\0') throw InputError(path, k, "NUL byte in sequence file");
      }
      seq.emplace_back(text.substr(a, b - a));
    }
    start = end + 1;
  }
  return seq;
}

inline SymbolSequence read_sequence(const std::filesystem::path& path) {
  return parse_sequence(path.string(), read_text(path));
}

inline Alphabet read_alphabet(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  detail::require_array(doc, doc.root, {}, "an alphabet");
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < doc.root.size(); ++i) {
    if (!doc.root[i].is_string()) doc.fail({i}, "expected a symbol string");
    auto s = doc.root[i].get<std::string>();
    for (const auto& prev : symbols) {
      if (prev == s) doc.fail({i}, "duplicate symbol '" + s + "'");
    }
    symbols.push_back(std::move(s));
  }
  if (symbols.size() < 2) doc.fail({}, "an alphabet needs at least 2 symbols");
  return Alphabet(std::move(symbols));
}

inline std::vector<double> read_numbers(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  return detail::numbers_at(doc, doc.root, {}, "a list of numbers");
}

/// A JSON array of numbers, or plain text with one number per line (blank
/// lines ignored).
inline std::vector<double> read_numeric_sequence(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (detail::is_json_array_text(text)) {
    const auto doc = parse_json_text(path.string(), text);
    return detail::numbers_at(doc, doc.root, {}, "a numeric sequence");
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::size_t a = start, b = end;
    while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
    if (a < b) {
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data() + a, text.data() + b, x);
      if (ec != std::errc() || ptr != text.data() + b || !std::isfinite(x)) {
        throw InputError(path.string(), a, "expected one number per line");
      }
      out.push_back(x);
    }
    start = end + 1;
  }
  return out;
}

inline CountVector read_counts(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  return {detail::counts_at(doc, doc.root, {}, "a list of counts")};
}

inline CountMatrix read_count_matrix(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  detail::require_array(doc, doc.root, {}, "a square count matrix");
  CountMatrix m;
  for (std::size_t r = 0; r < doc.root.size(); ++r) {
    m.push_back(detail::counts_at(doc, doc.root[r], {r}, "a count-matrix row"));
    if (m.back().size() != doc.root.size()) {
      doc.fail({r}, "row " + std::to_string(r) + " has " + std::to_string(m.back().size()) +
                        " entries; the matrix has " + std::to_string(doc.root.size()) + " rows");
    }
  }
  return m;
}

/// {"bpm": [positive reals]}.
inline TempoCurve read_tempo_curve(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  if (!doc.root.is_object()) doc.fail({}, "expected a tempo-curve object {\"bpm\": [...]}");
  if (!doc.root.contains("bpm")) doc.fail({}, "missing field \"bpm\"");
  auto bpm = detail::numbers_at(doc, doc.root["bpm"], {"bpm"}, "\"bpm\"");
  for (std::size_t i = 0; i < bpm.size(); ++i) {
    if (!(bpm[i] > 0.0)) doc.fail({"bpm", i}, "BPM sample must be positive");
  }
  if (bpm.empty()) doc.fail({"bpm"}, "tempo curve is empty");
  return TempoCurve(std::move(bpm));
}

enum class EntryKind { sequence, tempo_curve, bigram_matrix };

inline std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::sequence: return "sequence";
    case EntryKind::tempo_curve: return "tempo_curve";
    case EntryKind::bigram_matrix: return "bigram_matrix";
  }
  return "unknown";
}

struct ManifestEntry {
  std::string label;
  std::string id;                   // path as written in the manifest
  std::filesystem::path path;       // resolved against the manifest's directory
  EntryKind kind = EntryKind::sequence;
};

struct CorpusManifest {
  std::string path;
  std::vector<ManifestEntry> entries;

  // Labels in order of first appearance.
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& e : entries) {
      if (std::find(out.begin(), out.end(), e.label) == out.end()) out.push_back(e.label);
    }
    return out;
  }
};

/// Either {"entries": [...]} or a bare array of
/// {"label": text, "path": text, "kind": "sequence" | "tempo_curve" | "bigram_matrix"}.
inline CorpusManifest read_manifest(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  std::vector<PathStep> base;
  const json* entries = &doc.root;
  if (doc.root.is_object()) {
    if (!doc.root.contains("entries")) doc.fail({}, "missing field \"entries\"");
    entries = &doc.root["entries"];
    base.emplace_back(std::string("entries"));
  }
  detail::require_array(doc, *entries, base, "manifest entries");
  CorpusManifest m;
  m.path = path.string();
  const auto dir = path.parent_path();
  for (std::size_t i = 0; i < entries->size(); ++i) {
    auto at = base;
    at.emplace_back(i);
    const auto& e = (*entries)[i];
    if (!e.is_object()) doc.fail(at, "manifest entry must be an object");
    ManifestEntry entry;
    entry.label = detail::string_field(doc, e, at, "label");
    if (entry.label.empty()) {
      auto lat = at;
      lat.emplace_back(std::string("label"));
      doc.fail(lat, "label must be non-empty");
    }
    entry.id = detail::string_field(doc, e, at, "path");
    entry.path = std::filesystem::path(entry.id).is_absolute() ? std::filesystem::path(entry.id)
                                                              : dir / entry.id;
    if (!std::filesystem::is_regular_file(entry.path)) {
      auto pat = at;
      pat.emplace_back(std::string("path"));
      doc.fail(pat, "file '" + entry.path.string() + "' does not exist");
    }
    const auto kind = detail::string_field(doc, e, at, "kind");
    if (kind == "sequence") entry.kind = EntryKind::sequence;
    else if (kind == "tempo_curve") entry.kind = EntryKind::tempo_curve;
    else if (kind == "bigram_matrix") entry.kind = EntryKind::bigram_matrix;
    else {
      auto kat = at;
      kat.emplace_back(std::string("kind"));
      doc.fail(kat, "unknown kind '" + kind + "' (expected sequence, tempo_curve or bigram_matrix)");
    }
    m.entries.push_back(std::move(entry));
  }
  if (m.entries.empty()) doc.fail(base, "manifest has no entries");
  return m;
}

/// {"labels": [...], "values": [[...]], "symmetrized": bool}.
inline DivergenceMatrix read_divergence_matrix(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  if (!doc.root.is_object()) doc.fail({}, "expected a divergence-matrix object");
  DivergenceMatrix dm;
  if (!doc.root.contains("labels")) doc.fail({}, "missing field \"labels\"");
  if (!doc.root.contains("values")) doc.fail({}, "missing field \"values\"");
  const auto& labels = detail::require_array(doc, doc.root["labels"], {"labels"}, "\"labels\"");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) doc.fail({"labels", i}, "expected a label string");
    dm.labels.push_back(labels[i].get<std::string>());
  }
  const auto& values = detail::require_array(doc, doc.root["values"], {"values"}, "\"values\"");
  if (values.size() != dm.labels.size()) {
    doc.fail({"values"}, "matrix has " + std::to_string(values.size()) + " rows for " +
                             std::to_string(dm.labels.size()) + " labels");
  }
  for (std::size_t r = 0; r < values.size(); ++r) {
    dm.values.push_back(detail::numbers_at(doc, values[r], {"values", r}, "a matrix row"));
    if (dm.values.back().size() != dm.labels.size()) doc.fail({"values", r}, "row length differs from the label count");
  }
  if (doc.root.contains("symmetrized")) {
    if (!doc.root["symmetrized"].is_boolean()) doc.fail({"symmetrized"}, "expected true or false");
    dm.symmetrized = doc.root["symmetrized"].get<bool>();
  }
  return dm;
}

struct CurvePair {
  std::string unit;
  std::string before;  // manifest path as written
  std::string after;
};

/// {"pairs": [{"unit": text, "before": manifest path, "after": manifest path}]}.
inline std::vector<CurvePair> read_pairing(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  if (!doc.root.is_object() || !doc.root.contains("pairs")) {
    doc.fail({}, "expected an object with a \"pairs\" array");
  }
  const auto& pairs = detail::require_array(doc, doc.root["pairs"], {"pairs"}, "\"pairs\"");
  std::vector<CurvePair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::vector<PathStep> at = {std::string("pairs"), i};
    if (!pairs[i].is_object()) doc.fail(at, "pair must be an object");
    out.push_back({detail::string_field(doc, pairs[i], at, "unit"),
                   detail::string_field(doc, pairs[i], at, "before"),
                   detail::string_field(doc, pairs[i], at, "after")});
  }
  return out;
}

struct LabeledTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

/// A bare array of numbers (one dimension labelled "values"), or
/// {"labels": [...], "rows": [[...], ...]} with one column per label.
inline LabeledTable read_labeled_table(const std::filesystem::path& path) {
  const auto doc = load_json(path);
  LabeledTable t;
  if (doc.root.is_array()) {
    t.labels = {"values"};
    for (double x : detail::numbers_at(doc, doc.root, {}, "a list of numbers")) t.rows.push_back({x});
    return t;
  }
  if (!doc.root.is_object() || !doc.root.contains("labels") || !doc.root.contains("rows")) {
    doc.fail({}, "expected an array of numbers or an object with \"labels\" and \"rows\"");
  }
  const auto& labels = detail::require_array(doc, doc.root["labels"], {"labels"}, "\"labels\"");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) doc.fail({"labels", i}, "expected a label string");
    t.labels.push_back(labels[i].get<std::string>());
  }
  const auto& rows = detail::require_array(doc, doc.root["rows"], {"rows"}, "\"rows\"");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    t.rows.push_back(detail::numbers_at(doc, rows[r], {"rows", r}, "a row"));
    if (t.rows.back().size() != t.labels.size()) {
      doc.fail({"rows", r}, "row has " + std::to_string(t.rows.back().size()) + " values for " +
                                std::to_string(t.labels.size()) + " labels");
    }
  }
  return t;
}

/// Distinguishes a count file (JSON array of numbers) from a sequence file.
inline bool looks_like_counts(const std::string& text) {
  const std::size_t i = detail::skip_ws(text, 0);
  if (i >= text.size() || text[i] != '[') return false;
  const std::size_t j = detail::skip_ws(text, i + 1);
  return j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '-');
}

}  // namespace mirlab::io
