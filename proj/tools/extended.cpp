#include "commands.hpp"
#include "daha/extended.hpp"

namespace daha::cli {

CheckReport run_suite_extended(const std::string& name, const SuiteConfig& cfg) { return run_suite_as<xcd>(name, cfg); }

json koornwinder_compute_extended(const SuiteConfig& cfg, const Exp& lam) { return koornwinder_compute<xcd>(cfg, lam); }

json qkz_build_extended(const SuiteConfig& cfg) { return qkz_build<xcd>(cfg); }

CheckReport qkz_verify_extended(const json& sol, const SuiteConfig& cfg) { return qkz_verify<xcd>(sol, cfg); }

}  // namespace daha::cli
