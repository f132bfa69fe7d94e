#include "reap/pipeline.hpp"

#include "reap/errors.hpp"
#include "reap/numerics.hpp"

namespace reap {

TerminalMethod resolve_method(const RunConfig& cfg, const DiscreteLti& model) {
  if (cfg.method) return *cfg.method;
  return is_observable(model.C, model.A) ? TerminalMethod::kPrediction
                                         : TerminalMethod::kLyapunov;
}

ValidationReport validate(const RunConfig& cfg) {
  ValidationReport report;
  auto failed = [&](int code, std::string message) {
    report.exit_code = code;
    report.message = std::move(message);
    return report;
  };

  try {
    if (cfg.continuous) {
      report.model = zoh_discretize({cfg.A, cfg.B, cfg.C, cfg.D}, cfg.dt);
    } else {
      check_dimensions(cfg.A, cfg.B, cfg.C, cfg.D);
      report.model = DiscreteLti{cfg.A, cfg.B, cfg.C, cfg.D, cfg.dt};
    }
  } catch (const std::exception& e) {
    return failed(kExitConfig, e.what());
  }
  const DiscreteLti& model = report.model;

  if (!is_controllable(model.A, model.B)) {
    return failed(kExitUncontrollable, kMsgUncontrollable);
  }

  SteadyTarget target;
  try {
    target = cfg.target_kind == TargetKind::kReference
                 ? resolve_target_from_reference(model, cfg.X, cfg.U,
                                                 cfg.target_value)
                 : resolve_target_from_equilibrium(model, cfg.X, cfg.U,
                                                   cfg.target_value);
  } catch (const ConfigError& e) {
    return failed(kExitTarget, e.what());
  }

  const TerminalMethod method = resolve_method(cfg, model);
  if (method == TerminalMethod::kPrediction &&
      !is_observable(model.C, model.A)) {
    return failed(kExitUnobservable, kMsgUnobservable);
  }

  try {
    report.controller =
        make_controller(model, cfg.X, cfg.U, cfg.Qx, cfg.Qu, cfg.horizon,
                        target, method, cfg.solver, cfg.tightening);
  } catch (const OmegaCapError& e) {
    return failed(kExitTerminal, e.what());
  } catch (const NumericalError& e) {
    return failed(kExitTerminal, e.what());
  } catch (const ConfigError& e) {
    // Weight validation happens inside the Riccati solve.
    return failed(kExitConfig, e.what());
  }

  try {
    report.initial =
        initialize_at_k0(report.controller->build(cfg.x0), cfg.solver);
  } catch (const HorizonError&) {
    return failed(kExitHorizon, kMsgHorizon);
  } catch (const RegionOfAttractionError&) {
    return failed(kExitRegion, kMsgRegion);
  }
  return report;
}

}  // namespace reap
