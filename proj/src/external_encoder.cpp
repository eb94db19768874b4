#include "mlink/external_encoder.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include <json.hpp>

namespace mlink {

ExternalEncoder::ExternalEncoder(std::string command, std::size_t dim)
    : command_(std::move(command)), name_("external:" + command_), dim_(dim) {
  if (dim_ < 1) throw ConfigError("encoder dimension must be >= 1");

  int to_child[2];    // parent writes -> child stdin
  int from_child[2];  // child stdout -> parent reads
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw StageError("embedding", std::string("pipe: ") + std::strerror(errno));
  }

  pid_t pid = fork();
  if (pid < 0) {
    throw StageError("embedding", std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  child_pid_ = pid;
  close(to_child[0]);
  close(from_child[1]);
  to_child_ = fdopen(to_child[1], "w");
  from_child_ = fdopen(from_child[0], "r");
  if (!to_child_ || !from_child_) {
    close_child();
    throw StageError("embedding", "fdopen failed for encoder pipes");
  }

  write_line("DIM " + std::to_string(dim_));
  std::string reply = read_line();
  if (reply != "DIM " + std::to_string(dim_)) {
    close_child();
    throw ConfigError("external encoder handshake mismatch: sent 'DIM " + std::to_string(dim_) +
                      "', received '" + reply + "'");
  }
}

ExternalEncoder::~ExternalEncoder() { close_child(); }

void ExternalEncoder::close_child() {
  if (to_child_) {
    std::fclose(to_child_);
    to_child_ = nullptr;
  }
  if (from_child_) {
    std::fclose(from_child_);
    from_child_ = nullptr;
  }
  if (child_pid_ > 0) {
    int status = 0;
    waitpid(child_pid_, &status, 0);
    child_pid_ = -1;
  }
}

void ExternalEncoder::write_line(const std::string& line) {
  if (!to_child_ || std::fputs((line + "\n").c_str(), to_child_) == EOF ||
      std::fflush(to_child_) != 0) {
    throw StageError("embedding", "external encoder write failed (" + command_ + ")");
  }
}

std::string ExternalEncoder::read_line() {
  if (!from_child_) throw StageError("embedding", "external encoder is not running");
  std::string line;
  int c;
  while ((c = std::fgetc(from_child_)) != EOF) {
    if (c == '\n') return line;
    line.push_back(static_cast<char>(c));
  }
  throw StageError("embedding", "external encoder closed its output (" + command_ + ")");
}

std::vector<EmbeddingVector> ExternalEncoder::encode_batch(
    const std::vector<ContextString>& batch) {
  std::vector<EmbeddingVector> out;
  out.reserve(batch.size());
  for (const ContextString& c : batch) {
    write_line(nlohmann::json(c.value).dump());
    std::istringstream reply(read_line());
    std::vector<double> values;
    values.reserve(dim_);
    double v;
    while (reply >> v) values.push_back(v);
    if (values.size() != dim_) {
      throw StageError("embedding", "external encoder returned " + std::to_string(values.size()) +
                                        " values, expected " + std::to_string(dim_));
    }
    try {
      out.push_back(l2_normalize(std::move(values)));
    } catch (const ValidationError&) {
      out.push_back(EmbeddingVector::degenerate_of(dim_));
    }
  }
  return out;
}

}  // namespace mlink
