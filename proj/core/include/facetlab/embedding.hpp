#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace facetlab {

// A dense token->vector map, row-major. `kind` names the producing model,
// `space` which side of the model the rows came from ("input", "target", or
// "explicit" for count vectors).
struct EmbeddingSet {
  std::vector<std::string> tokens;
  size_t dim = 0;
  std::vector<double> data;  // tokens.size() * dim
  std::string kind;
  std::string space;

  const double* row(size_t i) const { return data.data() + i * dim; }
  double* row(size_t i) { return data.data() + i * dim; }
  std::optional<size_t> find(std::string_view token) const;
};

// Text format: header "V D", then one "token c1 ... cD" line per word.
// Values are written as shortest round-trip decimals, so save/load is exact.
void save_embeddings(const EmbeddingSet& e, const std::string& path);
EmbeddingSet load_embeddings(const std::string& path);

double dot(const double* a, const double* b, size_t n);
double l2_norm(const double* a, size_t n);
// cos(a,b); 0 when either vector has zero norm
double cosine(const double* a, const double* b, size_t n);

}  // namespace facetlab
