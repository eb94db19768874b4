#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "mlink/embedding.hpp"

namespace mlink {

// Adapter for an external sentence-encoder process. The command is launched
// through /bin/sh; both sides open with a `DIM <D>` handshake line, then each
// request is one JSON-escaped context string on the child's stdin and the
// reply is one line of exactly D space-separated decimal floats. Replies are
// L2-normalized here; a near-zero reply becomes a degenerate (all-zero)
// vector, which the cascade treats as unmatched.
class ExternalEncoder : public EncoderBackend {
 public:
  ExternalEncoder(std::string command, std::size_t dim);
  ~ExternalEncoder() override;

  ExternalEncoder(const ExternalEncoder&) = delete;
  ExternalEncoder& operator=(const ExternalEncoder&) = delete;

  const std::string& name() const override { return name_; }
  std::size_t dim() const override { return dim_; }
  std::vector<EmbeddingVector> encode_batch(const std::vector<ContextString>& batch) override;

 private:
  std::string read_line();
  void write_line(const std::string& line);
  void close_child();

  std::string command_;
  std::string name_;
  std::size_t dim_;
  int child_pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace mlink
