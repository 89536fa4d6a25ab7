#include "manifest.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "infoflow/csv.hpp"
#include "infoflow/error.hpp"

namespace infoflow::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot open '" + path.string() + "'");
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);

  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(md[i]);
  }
  return hex.str();
}

void RunManifest::add_input(const std::filesystem::path& path) {
  input_digests[path.string()] = "sha256:" + sha256_file(path);
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["input_digests"] = input_digests;
  j["tool_version"] = kToolVersion;
  return j;
}

std::string RunManifest::comment_line() const {
  return "manifest " + to_json().dump();
}

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("INFOFLOW_SEED");
  if (env == nullptr) return fallback;
  std::uint64_t value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return fallback;
  return value;
}

std::pair<double, double> parse_span(const std::string& text,
                                     const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument,
                flag + " expects START:END, got '" + text + "'");
  }
  const auto a = parse_real(std::string_view(text).substr(0, colon));
  const auto b = parse_real(std::string_view(text).substr(colon + 1));
  if (!a || !b) {
    throw Error(ErrorCode::InvalidArgument,
                flag + " expects START:END, got '" + text + "'");
  }
  return {*a, *b};
}

}  // namespace infoflow::cli
