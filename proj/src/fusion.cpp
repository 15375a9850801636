#include "bridging/fusion.hpp"

#include <string>

#include "bridging/errors.hpp"

namespace bridging {

WordVector make_filler(std::size_t dim, double value) {
  if (dim == 0) {
    throw DimensionError("filler dimension must be positive");
  }
  return WordVector(dim, value);
}

EmbeddingTable fuse(const FusionSpec& spec) {
  if (!spec.left || !spec.right) {
    throw StructuralError("fuse requires both a left and a right table");
  }
  const EmbeddingTable& left = *spec.left;
  const EmbeddingTable& right = *spec.right;
  const std::size_t dim = left.dimension() + right.dimension();
  const WordVector left_filler = make_filler(left.dimension(), spec.filler_value);
  const WordVector right_filler = make_filler(right.dimension(), spec.filler_value);

  EmbeddingTable fused(dim);
  WordVector row(dim);
  auto assemble = [&](VectorView first, VectorView second) {
    std::copy(first.begin(), first.end(), row.begin());
    std::copy(second.begin(), second.end(), row.begin() + first.size());
  };

  for (std::size_t i = 0; i < left.size(); ++i) {
    const std::string& token = left.tokens()[i];
    auto in_right = right.lookup(token);
    assemble(left.vector_at(i), in_right ? *in_right : VectorView(right_filler));
    fused.insert(token, row);
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    const std::string& token = right.tokens()[i];
    if (left.contains(token)) {
      continue;
    }
    assemble(left_filler, right.vector_at(i));
    fused.insert(token, row);
  }
  return fused;
}

}  // namespace bridging
