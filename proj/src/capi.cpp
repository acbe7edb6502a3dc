#include "ouq/ouq.h"

#include <exception>
#include <new>
#include <string>

#include "ouq/artifacts.hpp"
#include "ouq/config.hpp"
#include "ouq/errors.hpp"
#include "ouq/registry.hpp"
#include "ouq/solver.hpp"
#include "ouq/surrogate.hpp"

struct ouq_config {
  ouq::RunConfig value;
};

struct ouq_result {
  ouq::OUQResult value;
};

namespace {

thread_local std::string last_error;

ouq_status status_of(ouq::ErrorCode code) {
  using ouq::ErrorCode;
  switch (code) {
    case ErrorCode::ParseError: return OUQ_ERR_PARSE;
    case ErrorCode::ValidationError: return OUQ_ERR_VALIDATION;
    case ErrorCode::IoError: return OUQ_ERR_IO;
    case ErrorCode::UnknownResponse: return OUQ_ERR_UNKNOWN_RESPONSE;
    case ErrorCode::ArityMismatch: return OUQ_ERR_ARITY;
    case ErrorCode::DomainError: return OUQ_ERR_DOMAIN;
    case ErrorCode::InvalidArgument: return OUQ_ERR_INVALID_ARGUMENT;
    default: return OUQ_ERR_SOLVER;
  }
}

ouq_status fail(ouq_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
ouq_status guarded(Body&& body) noexcept {
  try {
    body();
    return OUQ_OK;
  } catch (const ouq::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(OUQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OUQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OUQ_ERR_INTERNAL, "unknown exception");
  }
}

ouq_status null_argument(const char* name) {
  return fail(OUQ_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* ouq_version(void) { return "1.0.0"; }

const char* ouq_last_error(void) { return last_error.c_str(); }

const char* ouq_status_name(ouq_status status) {
  switch (status) {
    case OUQ_OK: return "ok";
    case OUQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OUQ_ERR_PARSE: return "parse error";
    case OUQ_ERR_VALIDATION: return "validation error";
    case OUQ_ERR_IO: return "i/o error";
    case OUQ_ERR_UNKNOWN_RESPONSE: return "unknown response";
    case OUQ_ERR_ARITY: return "arity mismatch";
    case OUQ_ERR_DOMAIN: return "domain error";
    case OUQ_ERR_SOLVER: return "solver error";
    case OUQ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int ouq_exit_code(ouq_status status) {
  switch (status) {
    case OUQ_OK: return 0;
    case OUQ_ERR_IO: return 3;
    case OUQ_ERR_INVALID_ARGUMENT:
    case OUQ_ERR_PARSE:
    case OUQ_ERR_VALIDATION:
    case OUQ_ERR_UNKNOWN_RESPONSE:
    case OUQ_ERR_ARITY:
      return 1;
    default: return 2;
  }
}

ouq_status ouq_config_load(const char* path, ouq_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ouq_config{ouq::load_config(path)}; });
}

ouq_status ouq_config_parse(const char* text, ouq_config** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ouq_config{ouq::parse_config(text)}; });
}

void ouq_config_free(ouq_config* config) { delete config; }

ouq_status ouq_config_set_seed(ouq_config* config, uint64_t seed) {
  if (!config) return null_argument("config");
  config->value.seed = seed;
  return OUQ_OK;
}

ouq_status ouq_config_set_runs(ouq_config* config, size_t runs) {
  if (!config) return null_argument("config");
  if (runs < 1) return fail(OUQ_ERR_VALIDATION, "runs must be at least 1");
  config->value.runs = runs;
  return OUQ_OK;
}

ouq_status ouq_config_set_output_dir(ouq_config* config, const char* dir) {
  if (!config) return null_argument("config");
  if (!dir || !*dir) return fail(OUQ_ERR_INVALID_ARGUMENT, "output directory must be non-empty");
  return guarded([&] { config->value.output_dir = dir; });
}

ouq_status ouq_config_get_seed(const ouq_config* config, uint64_t* seed) {
  if (!config) return null_argument("config");
  if (!seed) return null_argument("seed");
  *seed = config->value.seed;
  return OUQ_OK;
}

ouq_status ouq_config_get_runs(const ouq_config* config, size_t* runs) {
  if (!config) return null_argument("config");
  if (!runs) return null_argument("runs");
  *runs = config->value.runs;
  return OUQ_OK;
}

ouq_status ouq_config_param_count(const ouq_config* config, size_t* count) {
  if (!config) return null_argument("config");
  if (!count) return null_argument("count");
  *count = config->value.layout().size();
  return OUQ_OK;
}

ouq_status ouq_run(const ouq_config* config, ouq_summary* summary) {
  if (!config) return null_argument("config");
  return guarded([&] {
    const ouq::RunSummary s = ouq::run_solve(config->value);
    if (summary) *summary = ouq_summary{s.bounds.size(), s.best_run, s.best_bound};
  });
}

ouq_status ouq_solve(const ouq_config* config, uint64_t seed, ouq_result** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    ouq::OUQProblem problem = ouq::to_problem(config->value);
    problem.outer.seed = seed;
    *out = new ouq_result{ouq::ouq_solve(problem)};
  });
}

void ouq_result_free(ouq_result* result) { delete result; }

double ouq_result_probability_bound(const ouq_result* result) {
  return result ? result->value.probability_bound : 0.0;
}

double ouq_result_expectation(const ouq_result* result) {
  return result ? result->value.expectation_at_maximizer : 0.0;
}

size_t ouq_result_generations(const ouq_result* result) {
  return result ? result->value.report.generations_run : 0;
}

size_t ouq_result_evaluations(const ouq_result* result) {
  return result ? result->value.report.evaluations : 0;
}

size_t ouq_result_param_count(const ouq_result* result) {
  return result ? result->value.report.opt_params.size() : 0;
}

ouq_status ouq_result_params(const ouq_result* result, double* out, size_t capacity) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  const auto& params = result->value.report.opt_params;
  if (capacity < params.size()) {
    return fail(OUQ_ERR_INVALID_ARGUMENT,
                "buffer holds " + std::to_string(capacity) + " values, need " +
                    std::to_string(params.size()));
  }
  std::copy(params.begin(), params.end(), out);
  return OUQ_OK;
}

ouq_status ouq_eval(const char* response, const double* coords, size_t n, double* value,
                    double* auxiliary, int* has_auxiliary) {
  if (!response) return null_argument("response");
  if (!coords && n > 0) return null_argument("coords");
  if (!value) return null_argument("value");
  return guarded([&] {
    const ouq::PointValue v = ouq::eval_point(ouq::ResponseRegistry::global(), response,
                                              std::span<const double>(coords, n));
    *value = v.value;
    if (has_auxiliary) *has_auxiliary = v.auxiliary.has_value() ? 1 : 0;
    if (auxiliary && v.auxiliary) *auxiliary = *v.auxiliary;
  });
}

ouq_status ouq_response_arity(const char* response, size_t* arity) {
  if (!response) return null_argument("response");
  if (!arity) return null_argument("arity");
  return guarded([&] { *arity = ouq::ResponseRegistry::global().find(response).arity; });
}

ouq_status ouq_register_response(const char* name, size_t arity, ouq_response_fn fn,
                                 void* user_data) {
  if (!name) return null_argument("name");
  if (!fn) return null_argument("fn");
  return guarded([&] {
    ouq::ResponseEntry entry;
    entry.name = name;
    entry.arity = arity;
    entry.fn = [fn, user_data](std::span<const double> x) {
      return fn(x.data(), x.size(), user_data);
    };
    ouq::ResponseRegistry::global().add(std::move(entry));
  });
}

ouq_status ouq_ballistic_limit(double h_mm, double theta_rad, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = ouq::sphir::ballistic_limit(h_mm, theta_rad); });
}

double ouq_mils_to_mm(double mils) { return ouq::sphir::mils_to_mm(mils); }

double ouq_mm_to_mils(double mm) { return ouq::sphir::mm_to_mils(mm); }

}  // extern "C"
