#include "hdts/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>

namespace hdts {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string cell = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(std::move(cell));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double* out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, *out);
  return result.ec == std::errc() && result.ptr == end && !cell.empty();
}

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::DataError, "cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_line(line));
  }
  if (rows.empty()) fail(ErrorKind::DataError, "'" + path + "' is empty");
  return rows;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

Series read_series_csv(const std::string& path, std::optional<bool> has_header) {
  const auto rows = read_rows(path);

  bool header;
  if (has_header) {
    header = *has_header;
  } else {
    header = false;
    double ignored;
    for (const std::string& cell : rows.front()) {
      if (!parse_double(cell, &ignored)) {
        header = true;
        break;
      }
    }
  }

  std::vector<std::string> names;
  std::size_t first = 0;
  if (header) {
    names = rows.front();
    first = 1;
    if (rows.size() == 1) fail(ErrorKind::DataError, "'" + path + "' has no data rows");
  }

  const std::size_t p = rows[first].size();
  Eigen::MatrixXd data(Eigen::Index(rows.size() - first), Eigen::Index(p));
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (rows[r].size() != p) {
      fail(ErrorKind::DataError,
           "ragged row " + std::to_string(r + 1) + " in '" + path + "': expected " +
               std::to_string(p) + " cells, got " + std::to_string(rows[r].size()));
    }
    for (std::size_t c = 0; c < p; ++c) {
      double v;
      if (!parse_double(rows[r][c], &v)) {
        fail(ErrorKind::DataError, "non-numeric cell '" + rows[r][c] + "' at row " +
                                       std::to_string(r + 1) + ", column " +
                                       std::to_string(c + 1) + " in '" + path + "'");
      }
      data(Eigen::Index(r - first), Eigen::Index(c)) = v;
    }
  }
  return Series(std::move(data), std::move(names));
}

MatrixSeries read_matrix_series_csv(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.front() != std::vector<std::string>{"t", "i", "j", "value"}) {
    fail(ErrorKind::DataError,
         "'" + path + "' must start with the exact header t,i,j,value");
  }

  struct Key {
    long t, i, j;
    bool operator<(const Key& o) const {
      return std::tie(t, i, j) < std::tie(o.t, o.i, o.j);
    }
  };
  std::map<Key, double> cells;
  long max_t = 0, max_i = 0, max_j = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 4) {
      fail(ErrorKind::DataError, "row " + std::to_string(r + 1) + " needs 4 cells");
    }
    double tv, iv, jv, value;
    if (!parse_double(rows[r][0], &tv) || !parse_double(rows[r][1], &iv) ||
        !parse_double(rows[r][2], &jv) || !parse_double(rows[r][3], &value)) {
      fail(ErrorKind::DataError, "non-numeric cell at row " + std::to_string(r + 1));
    }
    const Key key{long(tv), long(iv), long(jv)};
    if (key.t < 1 || key.i < 1 || key.j < 1) {
      fail(ErrorKind::DataError, "indices must be >= 1 at row " + std::to_string(r + 1));
    }
    if (!cells.emplace(key, value).second) {
      fail(ErrorKind::DataError,
           "duplicate entry (t=" + std::to_string(key.t) + ", i=" +
               std::to_string(key.i) + ", j=" + std::to_string(key.j) + ")");
    }
    max_t = std::max(max_t, key.t);
    max_i = std::max(max_i, key.i);
    max_j = std::max(max_j, key.j);
  }

  Eigen::MatrixXd vecs(max_i * max_j, max_t);
  for (long t = 1; t <= max_t; ++t) {
    for (long j = 1; j <= max_j; ++j) {
      for (long i = 1; i <= max_i; ++i) {
        const auto it = cells.find(Key{t, i, j});
        if (it == cells.end()) {
          fail(ErrorKind::DataError,
               "missing entry (t=" + std::to_string(t) + ", i=" + std::to_string(i) +
                   ", j=" + std::to_string(j) + ")");
        }
        vecs((j - 1) * max_i + (i - 1), t - 1) = it->second;
      }
    }
  }
  return MatrixSeries(std::move(vecs), max_i, max_j);
}

MatrixSeries reshape_series(const Series& wide, Eigen::Index p, Eigen::Index q) {
  if (p * q != wide.p()) {
    fail(ErrorKind::ShapeError, "reshape dims " + std::to_string(p) + "x" +
                                    std::to_string(q) + " do not match " +
                                    std::to_string(wide.p()) + " columns");
  }
  Eigen::MatrixXd vecs(p * q, wide.n());
  for (Eigen::Index t = 0; t < wide.n(); ++t) {
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < q; ++j) {
        vecs(j * p + i, t) = wide.data()(t, i * q + j);
      }
    }
  }
  return MatrixSeries(std::move(vecs), p, q);
}

void write_matrix_csv(const std::string& path,
                      const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                      const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::DataError, "cannot write '" + path + "'");
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      out << (c ? "," : "") << header[c];
    }
    out << '\n';
  }
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      out << (c ? "," : "") << format_double(matrix(r, c));
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::DataError, "write failed for '" + path + "'");
}

void write_matrix_series_csv(const std::string& path, const MatrixSeries& series) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::DataError, "cannot write '" + path + "'");
  out << "t,i,j,value\n";
  for (Eigen::Index t = 0; t < series.n(); ++t) {
    const auto slice = series.slice(t);
    for (Eigen::Index i = 0; i < series.p(); ++i) {
      for (Eigen::Index j = 0; j < series.q(); ++j) {
        out << (t + 1) << ',' << (i + 1) << ',' << (j + 1) << ','
            << format_double(slice(i, j)) << '\n';
      }
    }
  }
  if (!out) fail(ErrorKind::DataError, "write failed for '" + path + "'");
}

}  // namespace hdts
