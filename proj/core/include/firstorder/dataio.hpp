#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "firstorder/linop.hpp"

namespace firstorder {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_number(line) {}
  long line_number;
};

struct SparseExample {
  double label = 0.0;
  std::vector<std::pair<int, double>> features;  // 1-based, strictly increasing
};

struct RatingTriple {
  int user = 0;
  int item = 0;
  int rating = 0;  // 1..5
  long long timestamp = 0;
};

/// LIBSVM format: "<label> <idx>:<val> ...", indices strictly increasing.
std::vector<SparseExample> parse_libsvm(std::istream& in);
std::string serialize_libsvm(const std::vector<SparseExample>& examples);

/// MovieLens u.data format: user<TAB>item<TAB>rating<TAB>timestamp.
std::vector<RatingTriple> parse_movielens(std::istream& in);

/// MNIST idx image format (big-endian magic 0x00000803); pixels scaled to
/// [0,1], one image per row.
Mat parse_idx_images(std::istream& in);

/// Densify sparse examples; the two most frequent labels are remapped to
/// +1/-1 (most frequent first), any third label is rejected.
Mat densify(const std::vector<SparseExample>& examples, Vec* labels);

}  // namespace firstorder
