#include "dhsic/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include "dhsic/config.hpp"
#include "dhsic/csv.hpp"
#include "dhsic/error.hpp"

namespace dhsic {

using nlohmann::json;

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const TestResult& r) {
  return json{{"method", std::string(to_string(r.method))},
              {"statistic", r.statistic},
              {"scale", r.scale},
              {"z_score", optional_json(r.z_score)},
              {"p_value", r.p_value},
              {"alpha", r.alpha},
              {"reject", r.reject},
              {"n", r.n},
              {"d", r.d},
              {"gamma", optional_json(r.gamma)},
              {"scheme", r.scheme ? json(std::string(to_string(*r.scheme))) : json(nullptr)},
              {"num_permutations", optional_json(r.num_permutations)},
              {"seed", optional_json(r.seed)}};
}

json to_json(const sim::StudyReport& report, bool include_timing) {
  json rates = json::array();
  for (const auto& r : report.rates) {
    rates.push_back({{"method", std::string(sim::to_string(r.method))},
                     {"rejections", r.rejections},
                     {"rate", r.rate}});
  }
  json out{{"rates", rates}, {"replicates", report.replicates}, {"config", to_json(report.config)}};
  if (include_timing) out["wall_time_seconds"] = report.wall_time_seconds;
  return out;
}

std::string study_csv(const sim::StudyReport& report) {
  std::ostringstream out;
  out << "f,lambda,method,replicates,rejections,rate\n";
  for (const auto& r : report.rates) {
    out << sim::to_string(report.config.model.f) << ','
        << csv::format_double(report.config.model.lambda) << ',' << sim::to_string(r.method) << ','
        << report.replicates << ',' << r.rejections << ',' << csv::format_double(r.rate) << '\n';
  }
  return out.str();
}

std::string table_row(const sim::StudyReport& report) {
  std::ostringstream out;
  out << sim::to_string(report.config.model.f)
      << " lambda=" << csv::format_double(report.config.model.lambda);
  for (const auto& r : report.rates) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.rate);
    out << ' ' << sim::to_string(r.method) << '=' << buf;
  }
  return out.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 initialisation failed");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 0xF]);
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace dhsic
