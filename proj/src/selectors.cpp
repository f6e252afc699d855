#include "onsum/selectors.hpp"

#include <cstdlib>
#include <stdexcept>

#include "onsum/quadrature.hpp"

namespace onsum {

namespace {

long parse_long(const std::string& s, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument(std::string("selector: bad ") + what + " '" + s + "'");
  return v;
}

}  // namespace

OrthonormalSystem parse_system(const std::string& selector) {
  if (selector == "cosine") return system_cosine();
  if (selector == "haar") return system_haar();
  if (selector == "walsh") return system_walsh();
  if (selector.rfind("cr:", 0) == 0)
    return compress_reflect(parse_system(selector.substr(3)));
  if (selector.rfind("rand:", 0) == 0) {
    const std::string body = selector.substr(5);
    const size_t c1 = body.find(':');
    const size_t c2 = body.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("selector: rand needs seed:count:granularity");
    const long seed = parse_long(body.substr(0, c1), "seed");
    const long count = parse_long(body.substr(c1 + 1, c2 - c1 - 1), "count");
    const long gran = parse_long(body.substr(c2 + 1), "granularity");
    if (seed < 0) throw std::invalid_argument("selector: seed must be nonnegative");
    return gram_schmidt_random(static_cast<std::uint64_t>(seed),
                               static_cast<int>(count), static_cast<int>(gran));
  }
  if (selector.rfind("csv:", 0) == 0) return load_system_csv(selector.substr(4));
  throw std::invalid_argument("selector: unknown system '" + selector + "'");
}

FunctionHandle parse_function(const std::string& selector) {
  if (selector.rfind("phi:", 0) == 0) {
    const std::string body = selector.substr(4);
    const size_t cut = body.rfind(':');
    if (cut == std::string::npos || cut + 1 >= body.size())
      throw std::invalid_argument("selector: phi needs <system>:<k>");
    const long k = parse_long(body.substr(cut + 1), "element index");
    const OrthonormalSystem S = parse_system(body.substr(0, cut));
    return S.element(static_cast<int>(k));
  }
  if (selector.rfind("antideriv:", 0) == 0)
    return prefix_integral(parse_function(selector.substr(10)));
  return make_named(selector);
}

}  // namespace onsum
