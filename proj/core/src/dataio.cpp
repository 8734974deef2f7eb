#include "firstorder/dataio.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>

namespace firstorder {

namespace {

double parse_real(const std::string& tok, long line) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + tok + "'", line);
  }
  if (pos != tok.size()) throw ParseError("malformed number '" + tok + "'", line);
  return v;
}

long long parse_integer(const std::string& tok, long line) {
  size_t pos = 0;
  long long v;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("malformed integer '" + tok + "'", line);
  }
  if (pos != tok.size())
    throw ParseError("malformed integer '" + tok + "'", line);
  return v;
}

uint32_t read_be32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw std::runtime_error("idx: truncated header");
  return (uint32_t(buf[0]) << 24) | (uint32_t(buf[1]) << 16) |
         (uint32_t(buf[2]) << 8) | uint32_t(buf[3]);
}

}  // namespace

std::vector<SparseExample> parse_libsvm(std::istream& in) {
  std::vector<SparseExample> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    SparseExample ex;
    ex.label = parse_real(tok, lineno);
    int last_index = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected idx:val, got '" + tok + "'", lineno);
      long long idx = parse_integer(tok.substr(0, colon), lineno);
      double val = parse_real(tok.substr(colon + 1), lineno);
      if (idx < 1) throw ParseError("feature index must be >= 1", lineno);
      if (idx <= last_index)
        throw ParseError("feature indices must be strictly increasing", lineno);
      last_index = static_cast<int>(idx);
      ex.features.emplace_back(last_index, val);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::string serialize_libsvm(const std::vector<SparseExample>& examples) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& ex : examples) {
    os << ex.label;
    for (const auto& [idx, val] : ex.features) os << ' ' << idx << ':' << val;
    os << '\n';
  }
  return os.str();
}

std::vector<RatingTriple> parse_movielens(std::istream& in) {
  std::vector<RatingTriple> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4)
      throw ParseError("expected 4 tab-separated fields", lineno);
    RatingTriple t;
    t.user = static_cast<int>(parse_integer(fields[0], lineno));
    t.item = static_cast<int>(parse_integer(fields[1], lineno));
    t.rating = static_cast<int>(parse_integer(fields[2], lineno));
    t.timestamp = parse_integer(fields[3], lineno);
    if (t.user < 1 || t.item < 1)
      throw ParseError("user and item ids must be >= 1", lineno);
    if (t.rating < 1 || t.rating > 5)
      throw ParseError("rating out of range 1..5", lineno);
    out.push_back(t);
  }
  return out;
}

Mat parse_idx_images(std::istream& in) {
  uint32_t magic = read_be32(in);
  if (magic != 0x00000803u)
    throw std::runtime_error("idx: wrong magic number (expected 0x00000803)");
  uint32_t count = read_be32(in);
  uint32_t rows = read_be32(in);
  uint32_t cols = read_be32(in);
  const size_t pixels = size_t(rows) * cols;
  Mat out(count, static_cast<Index>(pixels));
  std::vector<unsigned char> buf(pixels);
  for (uint32_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
    if (static_cast<size_t>(in.gcount()) != pixels)
      throw std::runtime_error("idx: truncated image payload");
    for (size_t p = 0; p < pixels; ++p)
      out(i, static_cast<Index>(p)) = buf[p] / 255.0;
  }
  return out;
}

Mat densify(const std::vector<SparseExample>& examples, Vec* labels) {
  int max_index = 0;
  std::map<double, int> label_counts;
  for (const auto& ex : examples) {
    if (!ex.features.empty()) max_index = std::max(max_index, ex.features.back().first);
    ++label_counts[ex.label];
  }
  if (label_counts.size() > 2)
    throw std::invalid_argument("densify: more than two distinct labels");

  // Map the most frequent label to +1, the other to -1.
  double pos_label = 0.0, neg_label = 0.0;
  if (!label_counts.empty()) {
    auto it = std::max_element(
        label_counts.begin(), label_counts.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    pos_label = it->first;
    for (const auto& [l, n] : label_counts)
      if (l != pos_label) neg_label = l;
  }

  Mat x = Mat::Zero(static_cast<Index>(examples.size()), max_index);
  if (labels) labels->resize(static_cast<Index>(examples.size()));
  for (size_t i = 0; i < examples.size(); ++i) {
    for (const auto& [idx, val] : examples[i].features)
      x(static_cast<Index>(i), idx - 1) = val;
    if (labels)
      (*labels)[static_cast<Index>(i)] = examples[i].label == pos_label ? 1.0 : -1.0;
  }
  return x;
}

}  // namespace firstorder
