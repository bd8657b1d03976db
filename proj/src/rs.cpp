#include "byitfl/rs.hpp"

namespace byitfl {

namespace {

// Row-reduce an augmented system and return any solution, with free
// variables fixed to zero (first solution in column order).  Returns
// std::nullopt if inconsistent.
std::optional<std::vector<FieldElement>> solve_linear(
    std::vector<std::vector<FieldElement>> rows, std::size_t ncols,
    const Field& f) {
  std::size_t rank = 0;
  std::vector<int> pivot_of_col(ncols, -1);
  for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && rows[sel][col].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    FieldElement inv = rows[rank][col].inv();
    for (auto& e : rows[rank]) e *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      FieldElement factor = rows[r][col];
      for (std::size_t c = col; c <= ncols; ++c)
        rows[r][c] -= factor * rows[rank][c];
    }
    pivot_of_col[col] = static_cast<int>(rank);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (!rows[r][ncols].is_zero()) return std::nullopt;
  std::vector<FieldElement> x(ncols, f.zero());
  for (std::size_t col = 0; col < ncols; ++col)
    if (pivot_of_col[col] >= 0) x[col] = rows[pivot_of_col[col]][ncols];
  return x;
}

}  // namespace

RsResult rs_decode(const NoisyCodeword& cw, int b_max) {
  if (b_max < 0) throw std::invalid_argument("rs_decode: negative b_max");
  const int D = cw.degree_bound;
  std::vector<std::size_t> present;
  for (std::size_t i = 0; i < cw.entries.size(); ++i)
    if (cw.entries[i].second.has_value()) present.push_back(i);
  const int np = static_cast<int>(present.size());
  if (np < D + 2 * b_max + 1)
    throw InsufficientRedundancy(std::to_string(np) + " present entries < " +
                                 std::to_string(D + 2 * b_max + 1));
  if (cw.entries.empty()) throw InsufficientRedundancy("empty codeword");
  const Field& f = *cw.entries[present[0]].first.field();

  FieldPoly decoded;
  if (b_max == 0) {
    std::vector<std::pair<FieldElement, FieldElement>> pts;
    for (int i = 0; i <= D; ++i)
      pts.emplace_back(cw.entries[present[i]].first,
                       *cw.entries[present[i]].second);
    decoded = poly_interp(pts);
  } else {
    // Berlekamp-Welch: E monic of degree e, Q of degree <= D + e, with
    // Q(x_i) = y_i * E(x_i) at every present point.
    const int e = b_max;
    const std::size_t nq = D + e + 1;  // Q coefficients
    const std::size_t ncols = nq + e;  // plus E_0..E_{e-1}
    std::vector<std::vector<FieldElement>> rows;
    rows.reserve(np);
    for (int idx : present) {
      const FieldElement& x = cw.entries[idx].first;
      const FieldElement& y = *cw.entries[idx].second;
      std::vector<FieldElement> row(ncols + 1, f.zero());
      FieldElement xp = f.one();
      for (std::size_t j = 0; j < nq; ++j) {
        row[j] = xp;
        if (j < static_cast<std::size_t>(e)) row[nq + j] = -(y * xp);
        xp *= x;
      }
      // xp is now x^{D+e+1}; recompute x^e for the RHS.
      row[ncols] = y * x.pow(static_cast<unsigned long>(e));
      rows.push_back(std::move(row));
    }
    auto sol = solve_linear(std::move(rows), ncols, f);
    if (!sol) throw DecodeFailure("no error-locator solution");
    std::vector<FieldElement> qc(sol->begin(), sol->begin() + nq);
    std::vector<FieldElement> ec(sol->begin() + nq, sol->end());
    ec.push_back(f.one());  // monic x^e
    FieldPoly Q((std::vector<FieldElement>(qc)));
    FieldPoly E((std::vector<FieldElement>(ec)));
    auto [quot, rem] = Q.divrem(E);
    if (!rem.is_zero()) throw DecodeFailure("error locator does not divide");
    if (quot.degree() > D) throw DecodeFailure("message degree too high");
    decoded = quot;
  }

  RsResult res;
  res.poly = decoded;
  for (std::size_t i : present) {
    if (decoded.eval(cw.entries[i].first) != *cw.entries[i].second)
      res.error_positions.push_back(i);
  }
  if (static_cast<int>(res.error_positions.size()) > b_max)
    throw DecodeFailure("more than b_max disagreements");
  return res;
}

}  // namespace byitfl
