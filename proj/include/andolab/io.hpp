#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dilation.hpp"

namespace andolab {

using nlohmann::json;

// Wire formats. Matrices are row-major {"rows", "cols", "re", "im"}; vectors
// {"re", "im"}. All doubles round-trip losslessly through nlohmann's
// shortest-representation printing, so files are byte-stable for fixed input.

inline json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("re") || !j.contains("im"))
    throw Error(Err::IoError, "malformed matrix object");
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (rows < 0 || cols < 0 ||
      re.size() != static_cast<std::size_t>(rows * cols) ||
      im.size() != static_cast<std::size_t>(rows * cols))
    throw Error(Err::IoError, "matrix entry count mismatch");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
      const auto k = static_cast<std::size_t>(i * cols + j2);
      const double a = re[k].get<double>(), b = im[k].get<double>();
      if (!std::isfinite(a) || !std::isfinite(b))
        throw Error(Err::IoError, "non-finite matrix entry");
      m(i, j2) = Complex(a, b);
    }
  return m;
}

inline json vector_to_json(const ComplexVector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", re}, {"im", im}};
}

inline ComplexVector vector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw Error(Err::IoError, "malformed vector object");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size())
    throw Error(Err::IoError, "vector entry count mismatch");
  ComplexVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) {
    const double a = re[k].get<double>(), b = im[k].get<double>();
    if (!std::isfinite(a) || !std::isfinite(b))
      throw Error(Err::IoError, "non-finite vector entry");
    v(static_cast<Eigen::Index>(k)) = Complex(a, b);
  }
  return v;
}

inline json state_to_json(const DilationState& s) {
  json blocks = json::array();
  for (const auto& b : s.blocks) blocks.push_back(vector_to_json(b));
  return json{{"head", vector_to_json(s.head)},
              {"blocks", blocks},
              {"block_dim", s.block_dim}};
}

inline DilationState state_from_json(const json& j) {
  DilationState s;
  s.head = vector_from_json(j.at("head"));
  s.block_dim = j.at("block_dim").get<Eigen::Index>();
  for (const auto& b : j.at("blocks")) {
    ComplexVector v = vector_from_json(b);
    if (v.size() != s.block_dim)
      throw Error(Err::IoError, "block dimension mismatch in state");
    s.blocks.push_back(std::move(v));
  }
  return s;
}

inline json pair_to_json(const ContractionPair& p, std::uint64_t seed,
                         const std::string& method, double r1, double r2) {
  return json{{"t1", matrix_to_json(p.t1)},
              {"t2", matrix_to_json(p.t2)},
              {"meta",
               {{"seed", seed}, {"method", method}, {"norms", {r1, r2}}}}};
}

/// Reads and re-validates a fixture file's pair. Strictness is checked with a
/// margin inferred from the stored norms, so near-boundary fixtures load.
inline ContractionPair pair_from_json(const json& j,
                                      bool require_strict = true) {
  const ComplexMatrix t1 = matrix_from_json(j.at("t1"));
  const ComplexMatrix t2 = matrix_from_json(j.at("t2"));
  double margin = kDefaultStrictMargin;
  if (j.contains("meta") && j.at("meta").contains("norms")) {
    const auto& norms = j.at("meta").at("norms");
    const double rmax =
        std::max(norms[0].get<double>(), norms[1].get<double>());
    margin = std::min(margin, (1.0 - rmax) / 2.0);
  }
  return validate_pair(t1, t2, require_strict, -1.0, margin);
}

/// FNV-1a 64 over a canonical JSON dump; the fixture/artifact linkage key.
inline std::string content_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Err::IoError, "cannot open for writing: " + path);
  f << body;
  if (!f) throw Error(Err::IoError, "write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Err::IoError, "cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline json load_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Err::IoError, std::string("invalid JSON in ") + path + ": " +
                                  e.what());
  }
}

// p is serialized as a number when finite and as the string "inf" otherwise
// (JSON has no infinity literal).
inline json p_to_json(double p) {
  if (std::isinf(p)) return json("inf");
  return json(p);
}

inline double p_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    throw Error(Err::IoError, "bad p value");
  }
  return j.get<double>();
}

}  // namespace andolab
