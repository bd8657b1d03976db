#include "byitfl/lcc.hpp"

#include <set>

namespace byitfl {

EvalDomain EvalDomain::make(const Field& f, int n, int m, int t) {
  if (n < 1 || m < 1 || t < 0) throw DomainError("need n >= 1, m >= 1, t >= 0");
  if (f.prime() <= n + m + t)
    throw DomainError("field too small for distinct evaluation points");
  EvalDomain d;
  d.field = &f;
  d.n = n;
  d.m = m;
  d.t = t;
  for (int j = 1; j <= n; ++j) d.alphas.push_back(f.from_int(j));
  for (int l = 1; l <= m + t; ++l) d.betas.push_back(f.from_int(n + l));
  std::set<mpz_class> seen;
  seen.insert(0);  // VSS anchor
  for (const auto& e : d.alphas)
    if (!seen.insert(e.value()).second) throw DomainError("points not distinct");
  for (const auto& e : d.betas)
    if (!seen.insert(e.value()).second) throw DomainError("points not distinct");
  return d;
}

const FieldElement& EvalDomain::alpha(int party) const {
  if (party < 1 || party > n) throw DomainError("party index out of range");
  return alphas[party - 1];
}

void PackedShare::serialize(ByteWriter& w) const {
  w.str(source_tag);
  w.u32(static_cast<std::uint32_t>(owner));
  w.u32(static_cast<std::uint32_t>(degree_bound));
  w.fe_list(values);
}

PackedShare PackedShare::deserialize(ByteReader& r, const Field& f) {
  PackedShare s;
  s.source_tag = r.str();
  s.owner = static_cast<int>(r.u32());
  s.degree_bound = static_cast<int>(r.u32());
  s.values = r.fe_list(f);
  return s;
}

SecretBundle SecretBundle::from_vector(const std::vector<FieldElement>& v,
                                       const EvalDomain& domain, Rng& rng) {
  const Field& f = *domain.field;
  std::size_t m = domain.m;
  std::size_t len = (v.size() + m - 1) / m;
  if (len == 0) len = 1;
  SecretBundle b;
  b.subvectors.assign(m, std::vector<FieldElement>(len, f.zero()));
  for (std::size_t i = 0; i < v.size(); ++i) b.subvectors[i / len][i % len] = v[i];
  for (int j = 0; j < domain.t; ++j) {
    std::vector<FieldElement> mask(len);
    for (auto& e : mask) e = rng.uniform(f);
    b.masks.push_back(std::move(mask));
  }
  return b;
}

SecretBundle SecretBundle::replicated_scalar(const FieldElement& s,
                                             const EvalDomain& domain,
                                             Rng& rng) {
  SecretBundle b;
  b.subvectors.assign(domain.m, std::vector<FieldElement>{s});
  for (int j = 0; j < domain.t; ++j)
    b.masks.push_back({rng.uniform(*domain.field)});
  return b;
}

std::vector<FieldPoly> lcc_encode_polys(const SecretBundle& secret,
                                        const EvalDomain& domain) {
  if (static_cast<int>(secret.subvectors.size()) != domain.m ||
      static_cast<int>(secret.masks.size()) != domain.t)
    throw DomainError("bundle shape does not match domain (m, t)");
  std::size_t len = secret.slot_len();
  for (const auto& sv : secret.subvectors)
    if (sv.size() != len) throw ShapeError("ragged sub-vectors");
  for (const auto& mk : secret.masks)
    if (mk.size() != len) throw ShapeError("ragged mask vectors");
  std::vector<FieldPoly> polys;
  polys.reserve(len);
  for (std::size_t c = 0; c < len; ++c) {
    std::vector<std::pair<FieldElement, FieldElement>> pts;
    for (int j = 0; j < domain.m; ++j)
      pts.emplace_back(domain.betas[j], secret.subvectors[j][c]);
    for (int j = 0; j < domain.t; ++j)
      pts.emplace_back(domain.betas[domain.m + j], secret.masks[j][c]);
    polys.push_back(poly_interp(pts));
  }
  return polys;
}

std::vector<PackedShare> shares_from_polys(const std::vector<FieldPoly>& polys,
                                           const EvalDomain& domain,
                                           int degree_bound,
                                           const std::string& tag) {
  std::vector<PackedShare> out;
  out.reserve(domain.n);
  for (int j = 1; j <= domain.n; ++j) {
    PackedShare s;
    s.owner = j;
    s.degree_bound = degree_bound;
    s.source_tag = tag;
    s.values.reserve(polys.size());
    for (const auto& p : polys) s.values.push_back(p.eval(domain.alpha(j)));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PackedShare> lcc_encode(const SecretBundle& secret,
                                    const EvalDomain& domain,
                                    const std::string& tag) {
  auto polys = lcc_encode_polys(secret, domain);
  return shares_from_polys(polys, domain, domain.pack_degree(), tag);
}

std::vector<PackedShare> replicate_scalar_encode(const FieldElement& s,
                                                 const EvalDomain& domain,
                                                 Rng& rng,
                                                 const std::string& tag) {
  auto bundle = SecretBundle::replicated_scalar(s, domain, rng);
  return lcc_encode(bundle, domain, tag);
}

PackedShare share_add(const PackedShare& a, const PackedShare& b) {
  if (a.owner != b.owner) throw ShapeError("share_add: different owners");
  if (a.values.size() != b.values.size())
    throw ShapeError("share_add: size mismatch");
  PackedShare out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += b.values[i];
  out.degree_bound = std::max(a.degree_bound, b.degree_bound);
  return out;
}

PackedShare share_mul(const PackedShare& a, const PackedShare& b) {
  if (a.owner != b.owner) throw ShapeError("share_mul: different owners");
  const PackedShare* big = &a;
  const PackedShare* small = &b;
  if (big->values.size() < small->values.size()) std::swap(big, small);
  if (small->values.size() != big->values.size() && small->values.size() != 1)
    throw ShapeError("share_mul: incompatible shapes");
  PackedShare out = *big;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] *= small->values[small->values.size() == 1 ? 0 : i];
  out.degree_bound = a.degree_bound + b.degree_bound;
  return out;
}

PackedShare apply_poly_to_share(const std::vector<FieldElement>& h_field,
                                const PackedShare& a) {
  if (a.values.size() != 1)
    throw ShapeError("apply_poly_to_share: expects a scalar slot");
  FieldPoly h(h_field);
  PackedShare out = a;
  out.values[0] = h.eval(a.values[0]);
  int k = h.degree() < 0 ? 0 : h.degree();
  out.degree_bound = k * a.degree_bound;
  return out;
}

FieldPoly decode_coordinate(const std::vector<PackedShare>& shares,
                            const EvalDomain& domain, std::size_t coord) {
  std::vector<std::pair<FieldElement, FieldElement>> pts;
  for (const auto& s : shares) {
    if (coord >= s.values.size()) throw ShapeError("decode: coord out of range");
    pts.emplace_back(domain.alpha(s.owner), s.values[coord]);
  }
  return poly_interp(pts);
}

std::vector<FieldElement> data_evaluations(const FieldPoly& poly,
                                           const EvalDomain& domain) {
  std::vector<FieldElement> out;
  for (int j = 0; j < domain.m; ++j) out.push_back(poly.eval(domain.betas[j]));
  return out;
}

}  // namespace byitfl
