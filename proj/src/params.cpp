#include "kaondec/params.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kaondec {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Constants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("constants file not readable: " + path);
  Constants c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    double x;
    try {
      size_t used = 0;
      x = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad numeric value '" + val + "'");
    }
    if (key == "gamma_L_over_gamma_S")
      c.gamma_L_over_gamma_S = x;
    else if (key == "delta_m_over_gamma_S")
      c.delta_m_over_gamma_S = x;
    else if (key == "gamma_S_mev")
      c.gamma_S_mev = x;
    else if (key == "tau_S_per_cm")
      c.tau_S_per_cm = x;
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
  return c;
}

void KaonParams::validate() const {
  if (!(gamma_S > 0.0))
    throw std::invalid_argument("KaonParams: gamma_S must be > 0");
  if (gamma_L < 0.0)
    throw std::invalid_argument("KaonParams: gamma_L must be >= 0");
  if (lambda < 0.0)
    throw std::invalid_argument("KaonParams: lambda must be >= 0");
}

KaonParams KaonParams::with_lambda(double lam) {
  KaonParams p;
  p.lambda = lam;
  p.validate();
  return p;
}

KaonParams KaonParams::from_constants(const Constants& c, double lam) {
  KaonParams p;
  p.gamma_L = c.gamma_L_over_gamma_S;
  p.delta_m = c.delta_m_over_gamma_S;
  p.lambda = lam;
  p.validate();
  return p;
}

}  // namespace kaondec
