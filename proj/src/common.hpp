#ifndef EPIC_COMMON_HPP
#define EPIC_COMMON_HPP

#include <atomic>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace epic {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Fresh names have the form "<stem>#<k>"; the parsers reject '#', so a fresh
// name can never collide with a parsed one.
class FreshNames {
public:
  static std::string next(const std::string& hint) {
    std::string stem = hint.substr(0, hint.find('#'));
    if (stem.empty()) stem = "v";
    std::ostringstream os;
    os << stem << '#' << counter_.fetch_add(1, std::memory_order_relaxed);
    return os.str();
  }

private:
  static inline std::atomic<std::uint64_t> counter_{0};
};

} // namespace epic

#endif
