#include "sgl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgl {

namespace {

double parse_value(const std::string& token, const std::string& path, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0'))
    throw std::runtime_error(path + ":" + std::to_string(line) +
                             ": cannot parse value '" + token + "'");
  if (!std::isfinite(v))
    throw std::runtime_error(path + ":" + std::to_string(line) +
                             ": non-finite value '" + token + "'");
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Matrix load_matrix_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty matrix file");
  const auto first = split_commas(lines[0]);
  const Eigen::Index cols = static_cast<Eigen::Index>(first.size());
  Matrix m(static_cast<Eigen::Index>(lines.size()), cols);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto tokens = split_commas(lines[r]);
    if (static_cast<Eigen::Index>(tokens.size()) != cols)
      throw std::runtime_error(path + ":" + std::to_string(r + 1) +
                               ": ragged row (expected " + std::to_string(cols) +
                               " values, got " + std::to_string(tokens.size()) + ")");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), c) =
          parse_value(tokens[c], path, static_cast<int>(r + 1));
  }
  return m;
}

Vector load_vector_csv(const std::string& path) {
  const auto lines = read_lines(path);
  Vector v(static_cast<Eigen::Index>(lines.size()));
  for (std::size_t r = 0; r < lines.size(); ++r)
    v[static_cast<Eigen::Index>(r)] = parse_value(lines[r], path, static_cast<int>(r + 1));
  return v;
}

std::vector<int> load_groups(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<int> out(lines.size());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    int value = 0;
    const auto res =
        std::from_chars(lines[r].data(), lines[r].data() + lines[r].size(), value);
    if (res.ec != std::errc{} || res.ptr != lines[r].data() + lines[r].size())
      throw std::runtime_error(path + ":" + std::to_string(r + 1) +
                               ": cannot parse group index '" + lines[r] + "'");
    out[r] = value;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void save_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void save_vector_csv(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
}

void save_groups(const std::string& path, const std::vector<int>& assignment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int g : assignment) out << g << '\n';
}

}  // namespace sgl
