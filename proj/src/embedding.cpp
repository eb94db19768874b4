#include "mlink/embedding.hpp"

#include <cmath>

namespace mlink {

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

bool EmbeddingVector::degenerate() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.values.size() != b.values.size()) {
    throw ValidationError("dimension mismatch in dot product");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s;
}

double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  double d = 1.0 - dot(a, b);
  if (d < 0.0) return 0.0;
  if (d > 2.0) return 2.0;
  return d;
}

std::vector<double> mean_pool(const TokenMatrix& t) {
  if (t.rows.size() != t.mask.size()) {
    throw ValidationError("token matrix has " + std::to_string(t.rows.size()) + " rows but " +
                          std::to_string(t.mask.size()) + " mask values");
  }
  double mask_sum = 0.0;
  for (int a : t.mask) mask_sum += a;
  if (mask_sum <= 0.0) {
    throw ValidationError("mean_pool: all-zero attention mask");
  }
  std::size_t dim = t.rows.empty() ? 0 : t.rows.front().size();
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (!t.mask[i]) continue;
    if (t.rows[i].size() != dim) {
      throw ValidationError("mean_pool: ragged token matrix");
    }
    for (std::size_t d = 0; d < dim; ++d) out[d] += t.rows[i][d];
  }
  for (double& v : out) v /= mask_sum;
  return out;
}

EmbeddingVector l2_normalize(std::vector<double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  double n = std::sqrt(s);
  if (!(n > 1e-12)) {
    throw ValidationError("l2_normalize: vector norm below 1e-12");
  }
  for (double& x : v) x /= n;
  return EmbeddingVector{std::move(v)};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ReferenceEncoder::ReferenceEncoder(std::size_t dim) : dim_(dim) {
  if (dim_ < 1) throw ConfigError("encoder dimension must be >= 1");
}

EmbeddingVector ReferenceEncoder::encode_one(const ContextString& c) const {
  std::string s = c.value;
  if (s.size() < 3) s.append(3 - s.size(), '\x01');

  std::vector<double> acc(dim_, 0.0);
  for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
    std::uint64_t h = fnv1a64(std::string_view(s).substr(i, 3));
    acc[h % dim_] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm_sq = 0.0;
  for (double v : acc) norm_sq += v * v;
  if (norm_sq <= 1e-24) {
    // 3-gram signs cancelled out exactly; fall back to a deterministic axis.
    acc.assign(dim_, 0.0);
    acc[fnv1a64(s) % dim_] = 1.0;
    norm_sq = 1.0;
  }
  double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : acc) v *= inv;
  return EmbeddingVector{std::move(acc)};
}

std::vector<EmbeddingVector> ReferenceEncoder::encode_batch(
    const std::vector<ContextString>& batch) {
  std::vector<EmbeddingVector> out;
  out.reserve(batch.size());
  for (const auto& c : batch) out.push_back(encode_one(c));
  return out;
}

std::vector<EmbeddingVector> encode_corpus(EncoderBackend& backend,
                                           const std::vector<ContextString>& contexts,
                                           std::size_t batch_size, std::size_t expected_dim) {
  if (backend.dim() != expected_dim) {
    throw ConfigError("encoder '" + backend.name() + "' has dimension " +
                      std::to_string(backend.dim()) + " but the pipeline expects " +
                      std::to_string(expected_dim));
  }
  if (batch_size < 1) batch_size = 1;

  std::vector<EmbeddingVector> out;
  out.reserve(contexts.size());
  std::size_t batch_index = 0;
  for (std::size_t start = 0; start < contexts.size(); start += batch_size, ++batch_index) {
    std::size_t end = std::min(contexts.size(), start + batch_size);
    std::vector<ContextString> batch(contexts.begin() + start, contexts.begin() + end);
    std::vector<EmbeddingVector> encoded;
    try {
      encoded = backend.encode_batch(batch);
    } catch (const std::exception& e) {
      throw StageError("embedding",
                       "backend failed on batch " + std::to_string(batch_index) + ": " + e.what());
    }
    if (encoded.size() != batch.size()) {
      throw StageError("embedding", "backend returned " + std::to_string(encoded.size()) +
                                        " vectors for a batch of " + std::to_string(batch.size()) +
                                        " (batch " + std::to_string(batch_index) + ")");
    }
    for (auto& v : encoded) {
      if (v.values.size() != expected_dim) {
        throw StageError("embedding", "backend emitted a vector of dimension " +
                                          std::to_string(v.values.size()) + " in batch " +
                                          std::to_string(batch_index));
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace mlink
