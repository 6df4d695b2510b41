#include <hcurl/matrix_market.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hcurl {

void write_matrix_market(std::ostream& os, const SparseMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  os << std::setprecision(17);
  for (const auto& t : a.to_triplets()) os << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_matrix_market(os, a);
}

SparseMatrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("matrix market: empty input");
  std::string lower = line;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower.rfind("%%matrixmarket", 0) != 0) throw ParseError("matrix market: missing banner");
  if (lower.find("coordinate") == std::string::npos || lower.find("real") == std::string::npos)
    throw ParseError("matrix market: only coordinate real matrices are supported");
  const bool symmetric = lower.find("symmetric") != std::string::npos;

  while (std::getline(is, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream header(line);
  long nr = 0, nc = 0, nz = 0;
  if (!(header >> nr >> nc >> nz) || nr < 0 || nc < 0 || nz < 0)
    throw ParseError("matrix market: malformed size line");

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * nz : nz));
  for (long k = 0; k < nz; ++k) {
    long i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v)) throw ParseError("matrix market: truncated entry list");
    if (i < 1 || i > nr || j < 1 || j > nc) throw ParseError("matrix market: index out of range");
    t.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
    if (symmetric && i != j) t.push_back({static_cast<Index>(j - 1), static_cast<Index>(i - 1), v});
  }
  return SparseMatrix::from_triplets(static_cast<Index>(nr), static_cast<Index>(nc), std::move(t));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  return read_matrix_market(is);
}

} // namespace hcurl
