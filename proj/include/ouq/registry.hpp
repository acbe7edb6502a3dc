#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ouq/measure.hpp"
#include "ouq/surrogate.hpp"

namespace ouq {

inline constexpr std::string_view kSphirResponse = "sphir-perforation";

struct ResponseEntry {
  std::string name;
  std::size_t arity = 0;
  Response fn;
  /// Optional secondary quantity printed next to the value; the surrogate
  /// reports its ballistic limit here.
  std::function<double(std::span<const double>)> auxiliary;
  std::string auxiliary_name;
};

/// Named response functions. The process-wide instance starts with the
/// built-in surrogate and is safe to use from several threads.
class ResponseRegistry {
 public:
  ResponseRegistry();

  static ResponseRegistry& global();

  /// Adds or replaces an entry.
  void add(ResponseEntry entry);
  bool contains(std::string_view name) const;
  ResponseEntry find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  mutable std::mutex mutex_;
  std::vector<ResponseEntry> entries_;
};

ResponseEntry make_sphir_entry(const sphir::SurrogateParams& params = {});

struct PointValue {
  double value = 0.0;
  std::optional<double> auxiliary;
  std::string auxiliary_name;
};

/// Evaluates a registered response at one point, checking the arity.
PointValue eval_point(const ResponseRegistry& registry, std::string_view name,
                      std::span<const double> coords);

}  // namespace ouq
