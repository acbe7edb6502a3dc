#include "ouq/registry.hpp"

#include <algorithm>

#include "ouq/errors.hpp"

namespace ouq {

ResponseEntry make_sphir_entry(const sphir::SurrogateParams& params) {
  params.validate();
  ResponseEntry entry;
  entry.name = std::string(kSphirResponse);
  entry.arity = 3;
  entry.fn = sphir::make_response(params);
  entry.auxiliary = [params](std::span<const double> x) {
    return sphir::ballistic_limit(x[0], x[1], params);
  };
  entry.auxiliary_name = "v_bl";
  return entry;
}

ResponseRegistry::ResponseRegistry() { entries_.push_back(make_sphir_entry()); }

ResponseRegistry& ResponseRegistry::global() {
  static ResponseRegistry registry;
  return registry;
}

void ResponseRegistry::add(ResponseEntry entry) {
  if (entry.name.empty() || !entry.fn || entry.arity == 0) {
    raise(ErrorCode::InvalidArgument, "response entries need a name, a function and an arity");
  }
  std::lock_guard lock(mutex_);
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const ResponseEntry& e) { return e.name == entry.name; });
  if (it != entries_.end()) {
    *it = std::move(entry);
  } else {
    entries_.push_back(std::move(entry));
  }
}

bool ResponseRegistry::contains(std::string_view name) const {
  std::lock_guard lock(mutex_);
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const ResponseEntry& e) { return e.name == name; });
}

ResponseEntry ResponseRegistry::find(std::string_view name) const {
  std::lock_guard lock(mutex_);
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  raise(ErrorCode::UnknownResponse, "no response registered as '" + std::string(name) + "'");
}

std::vector<std::string> ResponseRegistry::names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

PointValue eval_point(const ResponseRegistry& registry, std::string_view name,
                      std::span<const double> coords) {
  const ResponseEntry entry = registry.find(name);
  if (coords.size() != entry.arity) {
    raise(ErrorCode::ArityMismatch, "'" + entry.name + "' takes " + std::to_string(entry.arity) +
                                        " coordinates, got " + std::to_string(coords.size()));
  }
  PointValue out;
  out.value = entry.fn(coords);
  if (entry.auxiliary) {
    out.auxiliary = entry.auxiliary(coords);
    out.auxiliary_name = entry.auxiliary_name;
  }
  return out;
}

}  // namespace ouq
