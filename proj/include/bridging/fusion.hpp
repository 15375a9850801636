#pragma once

#include <cstddef>

#include "bridging/embedding_table.hpp"

namespace bridging {

// Inputs for building a combined table out of a general space (left) and a
// PP-context space (right). Tokens present on one side only are padded with
// a constant filler vector on the missing side.
struct FusionSpec {
  const EmbeddingTable* left = nullptr;
  const EmbeddingTable* right = nullptr;
  double filler_value = 0.1;
};

// Constant vector of the given length.
WordVector make_filler(std::size_t dim, double value);

// Concatenates the two spaces. Output dimension is left.dim + right.dim and
// the vocabulary is the union of both: tokens in both get concat(v_left,
// v_right); left-only tokens get the filler on the right half and right-only
// tokens (the "_PP"-suffixed part of the vocabulary) the filler on the left
// half. Output order is the left vocabulary in stored order followed by
// right-only tokens in stored order, so repeated runs are bit-identical.
EmbeddingTable fuse(const FusionSpec& spec);

}  // namespace bridging
