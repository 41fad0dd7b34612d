#include "poleswap/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "poleswap/errors.hpp"

namespace poleswap {

namespace {

using nlohmann::json;

std::string with_position(std::size_t line, std::size_t column, const std::string& what) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
}

// nlohmann reports a byte offset one past the offending character.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  const std::size_t end = std::min(offset == 0 ? 0 : offset - 1, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

ComplexMatrix read_matrix(const json& doc, const char* key, Index n) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw MatrixParseError(0, 0, std::string("missing field \"") + key + "\"");
  if (!it->is_array()) throw MatrixParseError(0, 0, std::string("field \"") + key + "\" must be an array");
  if (static_cast<Index>(it->size()) != n * n) {
    throw MatrixParseError(0, 0, std::string("field \"") + key + "\" has " + std::to_string(it->size()) +
                                     " entries, expected " + std::to_string(n * n));
  }
  ComplexMatrix m(n, n);
  for (Index idx = 0; idx < n * n; ++idx) {
    const json& e = (*it)[static_cast<std::size_t>(idx)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw MatrixParseError(0, 0, std::string(key) + "[" + std::to_string(idx) + "] must be a [re, im] pair");
    }
    m(idx / n, idx % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  if (!all_finite(m)) throw MatrixParseError(0, 0, std::string(key) + " has non-finite entries");
  return m;
}

json pair_array(const ComplexMatrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

}  // namespace

MatrixParseError::MatrixParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(with_position(line, column, what)), line_(line), column_(column) {}

PencilData parse_pencil(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw MatrixParseError(line, column, "malformed JSON");
  } catch (const json::out_of_range& e) {
    // Overflowing literals carry no offset; locate the quoted token instead.
    const std::string msg = e.what();
    const auto open = msg.find("parsing '");
    const auto close = open == std::string::npos ? open : msg.find('\'', open + 9);
    std::size_t line = 0, column = 0;
    if (close != std::string::npos) {
      const auto at = text.find(msg.substr(open + 9, close - open - 9));
      if (at != std::string_view::npos) std::tie(line, column) = line_column(text, at + 1);
    }
    throw MatrixParseError(line, column, "number out of range");
  }
  if (!doc.is_object()) throw MatrixParseError(1, 1, "top level must be an object");
  const auto nit = doc.find("n");
  if (nit == doc.end() || !nit->is_number_integer() || nit->get<long long>() < 1) {
    throw MatrixParseError(0, 0, "field \"n\" must be a positive integer");
  }
  const auto n = static_cast<Index>(nit->get<long long>());
  PencilData out{read_matrix(doc, "A", n), read_matrix(doc, "B", n)};
  return out;
}

PencilData read_pencil_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MatrixParseError(0, 0, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pencil(buf.str());
}

std::string format_pencil(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw DimensionMismatch("format_pencil: A and B must be square of equal size");
  }
  json doc;
  doc["n"] = a.rows();
  doc["A"] = pair_array(a);
  doc["B"] = pair_array(b);
  return doc.dump(1) + "\n";
}

}  // namespace poleswap
