#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rank1sft/functions.hpp"
#include "rank1sft/numerics.hpp"
#include "rank1sft/spaces.hpp"
#include "rank1sft/transform.hpp"

namespace rank1sft::cli {

using nlohmann::json;

// Rejected configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string rule, const std::string& detail)
      : std::runtime_error("invalid config (" + rule + "): " + detail), rule_(std::move(rule)) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

// Test functions a config can name.
struct FunctionSpec {
  std::string kind = "bump";  // bump | discrete | cosh_power
  double t0 = 1.5;            // bump centre
  double width = 0.5;         // bump half-width
  int k = 0;                  // discrete: Phi0_{-lambda_k}
  double delta = 1.0;         // cosh_power: (cosh t)^{-delta-rho}
};

RadialFunction make_function(const spaces::SpaceGeometry& g, const FunctionSpec& f);
json describe_function(const FunctionSpec& f);

struct RunConfig {
  std::string space_name;  // preset name, or "custom"
  spaces::MultiplicityDatum multiplicities;
  std::vector<std::string> warnings;

  double r = 1.0;
  double epsilon0 = 0.25;
  double R = 3.0;  // degree parameter of p_R and q_R
  numerics::QuadratureSpec quadrature;
  transform::FixedRuleSpec fixed_rule;

  struct Eval {
    std::string object = "eisenstein";  // eisenstein | phi0 | cfunction | hcseries
    std::vector<cplx> lambdas;
    std::vector<double> ts;
  } eval;

  struct Transform {
    FunctionSpec function;
    std::vector<cplx> lambdas;
  } transform;

  struct Invert {
    FunctionSpec function;
    std::vector<double> ts;
  } invert;

  struct Calibrate {
    std::optional<FunctionSpec> function;  // reference bump when absent
  } calibrate;

  struct Check {
    std::string suite;
    std::optional<FunctionSpec> function;
    double nu_max = 20.0;
    int points = 30;                  // random points per randomized check
    std::optional<double> tolerance;  // overrides every tolerance of the suite
    int re_points = 60;               // schwartz strip grid
    int im_points = 120;
    double grid_nu_max = 200.0;
    int max_order = 4;                // omega_{n,q} for n, q <= max_order
  } check;

  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 1;

  spaces::SpaceGeometry geometry() const { return spaces::SpaceGeometry(multiplicities); }
};

// Parses and validates; throws ConfigError naming the rule that failed.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

// Re-validates after command-line overrides.
void validate_config(RunConfig& c);

inline const std::vector<std::string> kSuites = {"kernel", "inversion", "eigen", "symmetry",
                                                 "schwartz", "bounds", "contour"};
inline const std::vector<std::string> kObjects = {"eisenstein", "phi0", "cfunction", "hcseries"};

}  // namespace rank1sft::cli
