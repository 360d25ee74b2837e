#include "strata/harness/fixtures.hpp"

#include <algorithm>
#include <stdexcept>
#include <string_view>

namespace strata::harness {
namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& fixture_sources();
}

const std::vector<Fixture>& bundled_fixtures() {
  static const std::vector<Fixture> fixtures = [] {
    std::vector<Fixture> out;
    for (const auto& [name, text] : detail::fixture_sources()) {
      const Json doc = Json::parse(text);
      out.push_back(Fixture{std::string(name), doc.value("description", ""), parse_config_json(doc)});
    }
    std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
    return out;
  }();
  return fixtures;
}

const Fixture& bundled_fixture(const std::string& name) {
  for (const Fixture& f : bundled_fixtures()) {
    if (f.name == name) return f;
  }
  throw std::out_of_range("no bundled fixture named " + name);
}

}  // namespace strata::harness
