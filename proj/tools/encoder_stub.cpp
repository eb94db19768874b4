// Minimal external-encoder protocol partner, used by the tests and as a
// template for wiring a real sentence encoder. Handshake: read "DIM <D>" on
// stdin, answer "DIM <D>" (or a forced dimension given as argv[1], to exercise
// mismatch handling). Then for each JSON-escaped context line, emit D
// space-separated floats derived from a rolling hash of the string.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

int main(int argc, char** argv) {
  long forced_dim = argc > 1 ? std::strtol(argv[1], nullptr, 10) : 0;

  std::string line;
  if (!std::getline(std::cin, line)) return 1;
  std::istringstream handshake(line);
  std::string tag;
  std::size_t dim = 0;
  if (!(handshake >> tag >> dim) || tag != "DIM") {
    std::cerr << "encoder_stub: bad handshake line: " << line << '\n';
    return 1;
  }
  std::size_t reply_dim = forced_dim > 0 ? static_cast<std::size_t>(forced_dim) : dim;
  std::cout << "DIM " << reply_dim << std::endl;

  while (std::getline(std::cin, line)) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    std::string text = j.is_string() ? j.get<std::string>() : line;
    std::string out;
    char buf[40];
    for (std::size_t d = 0; d < dim; ++d) {
      std::uint64_t h = fnv1a64(text + "#" + std::to_string(d));
      double v = (static_cast<double>(h % 2000001) - 1000000.0) / 1000000.0;
      std::snprintf(buf, sizeof(buf), "%.9f", v);
      if (d) out.push_back(' ');
      out += buf;
    }
    std::cout << out << std::endl;
  }
  return 0;
}
