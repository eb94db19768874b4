#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mlink/context.hpp"
#include "mlink/types.hpp"

namespace mlink {

// Token representations plus a binary attention mask, for backends that pool
// externally produced token vectors.
struct TokenMatrix {
  std::vector<std::vector<double>> rows;  // n tokens x D
  std::vector<int> mask;                  // n values in {0,1}
};

// Unit-norm semantic vector for a mention or centroid. A default-constructed
// or all-zero vector marks a degenerate encoding; the cascade routes those to
// the unmatched path instead of aborting.
struct EmbeddingVector {
  std::vector<double> values;

  double norm() const;
  bool degenerate() const;
  static EmbeddingVector degenerate_of(std::size_t dim) {
    return EmbeddingVector{std::vector<double>(dim, 0.0)};
  }
  bool operator==(const EmbeddingVector&) const = default;
};

double dot(const EmbeddingVector& a, const EmbeddingVector& b);
// 1 - <a,b>; assumes unit vectors, clamped into [0,2].
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

// Mask-weighted mean of token rows. Throws on an all-zero mask.
std::vector<double> mean_pool(const TokenMatrix& t);

// Scale to unit norm. Throws ValidationError when the norm is below 1e-12.
EmbeddingVector l2_normalize(std::vector<double> v);

class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;
  virtual const std::string& name() const = 0;
  virtual std::size_t dim() const = 0;
  // Deterministic within a process: identical inputs give identical outputs.
  virtual std::vector<EmbeddingVector> encode_batch(const std::vector<ContextString>& batch) = 0;
};

// Deterministic character-3-gram hashing encoder. Each 3-gram of the context
// string is hashed with FNV-1a/64; the hash picks a dimension and a +/-1 sign,
// and the accumulated vector is L2-normalized. Strings shorter than three
// characters are padded with a sentinel byte.
class ReferenceEncoder : public EncoderBackend {
 public:
  explicit ReferenceEncoder(std::size_t dim);
  const std::string& name() const override { return name_; }
  std::size_t dim() const override { return dim_; }
  std::vector<EmbeddingVector> encode_batch(const std::vector<ContextString>& batch) override;

  EmbeddingVector encode_one(const ContextString& c) const;

 private:
  std::size_t dim_;
  std::string name_ = "reference";
};

std::uint64_t fnv1a64(std::string_view bytes);

// Order-preserving batched encoding. Verifies the backend dimension against
// `expected_dim` and wraps backend failures with the failing batch index.
std::vector<EmbeddingVector> encode_corpus(EncoderBackend& backend,
                                           const std::vector<ContextString>& contexts,
                                           std::size_t batch_size, std::size_t expected_dim);

}  // namespace mlink
