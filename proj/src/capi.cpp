#include "epic/epic.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "encode.hpp"
#include "epi_lts.hpp"
#include "epi_ops.hpp"
#include "epi_text.hpp"
#include "epi_types.hpp"
#include "fuzz.hpp"
#include "harness.hpp"
#include "wc_sem.hpp"
#include "wc_text.hpp"
#include "wc_types.hpp"

using nlohmann::json;

struct epic_process {
  epi::Proc proc;
};
struct epic_typeenv {
  epi::TypeEnv env;
};
struct epic_wcprogram {
  wc::Program program;
};
struct epic_unit {
  wc::CompilationUnit unit;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error, const std::string& msg) {
  if (error) *error = dup_string(msg);
}

// Runs the body, mapping C++ exceptions onto status codes.
template <class F>
epic_status guarded(char** error, F&& body) {
  try {
    return body();
  } catch (const epi::ParseError& e) {
    set_error(error, e.what());
    return EPIC_ERR_PARSE;
  } catch (const epi::TypeError& e) {
    set_error(error, e.what());
    return EPIC_ERR_TYPE;
  } catch (const wc::WcTypeError& e) {
    set_error(error, e.what());
    return EPIC_ERR_TYPE;
  } catch (const epi::EvalError& e) {
    set_error(error, e.what());
    return EPIC_ERR_EVAL;
  } catch (const epi::StateExplosion& e) {
    set_error(error, e.what());
    return EPIC_ERR_STATE_EXPLOSION;
  } catch (const wc::FuelExhausted& e) {
    set_error(error, e.what());
    return EPIC_ERR_FUEL;
  } catch (const wc::StuckError& e) {
    set_error(error, e.what());
    return EPIC_ERR_STUCK;
  } catch (const wc::DecodeError& e) {
    set_error(error, e.what());
    return EPIC_ERR_DECODE;
  } catch (const wc::Untranslatable& e) {
    set_error(error, e.what());
    return EPIC_ERR_UNTRANSLATABLE;
  } catch (const wc::DuplicateName& e) {
    set_error(error, e.what());
    return EPIC_ERR_INVALID;
  } catch (const std::exception& e) {
    set_error(error, e.what());
    return EPIC_ERR_INVALID;
  }
}

} // namespace

extern "C" {

void epic_string_free(char* s) { std::free(s); }
void epic_process_free(epic_process* p) { delete p; }
void epic_typeenv_free(epic_typeenv* g) { delete g; }
void epic_wcprogram_free(epic_wcprogram* p) { delete p; }
void epic_unit_free(epic_unit* u) { delete u; }

epic_status epic_process_parse(const char* text, epic_process** out, char** error) {
  return guarded(error, [&] {
    *out = new epic_process{epi::parse_process(text)};
    return EPIC_OK;
  });
}

char* epic_process_print(const epic_process* p) {
  return dup_string(epi::print_process(p->proc));
}

epic_status epic_typeenv_parse(const char* text, epic_typeenv** out, char** error) {
  return guarded(error, [&] {
    *out = new epic_typeenv{epi::parse_typeenv(text)};
    return EPIC_OK;
  });
}

char* epic_typeenv_print(const epic_typeenv* g) { return dup_string(epi::print_typeenv(g->env)); }

epic_status epic_wcprogram_parse(const char* text, epic_wcprogram** out, char** error) {
  return guarded(error, [&] {
    *out = new epic_wcprogram{wc::parse_program(text)};
    return EPIC_OK;
  });
}

char* epic_wcprogram_print(const epic_wcprogram* p) {
  return dup_string(wc::print_program(p->program));
}

char* epic_wcprogram_warnings(const epic_wcprogram* p) {
  std::string out;
  for (const std::string& w : p->program.warnings) out += w + "\n";
  return dup_string(out);
}

epic_status epic_typeenv_wellformed(const epic_typeenv* g, char** error) {
  std::vector<std::string> diags = epi::check_wellformed(g->env);
  if (diags.empty()) return EPIC_OK;
  std::string all;
  for (const std::string& d : diags) all += d + "\n";
  set_error(error, all);
  return EPIC_ERR_TYPE;
}

epic_status epic_check_process(const epic_typeenv* g, const epic_process* p, char** error) {
  return guarded(error, [&] {
    epi::typecheck_process_or_throw(g->env, p->proc);
    return EPIC_OK;
  });
}

int epic_wrong(const epic_typeenv* g, const epic_process* p) {
  return epi::wrong(g->env, p->proc) ? 1 : 0;
}

epic_status epic_safe_bounded(const epic_typeenv* g, const epic_process* p, size_t depth,
                              size_t frontier_cap, int* is_safe, char** error) {
  return guarded(error, [&] {
    *is_safe = epi::safe_bounded(g->env, p->proc, depth, frontier_cap) ? 1 : 0;
    return EPIC_OK;
  });
}

epic_status epic_step(const epic_process* p, int format, char** out, char** error) {
  return guarded(error, [&] {
    std::vector<std::string> diags;
    std::vector<epi::Transition> ts = epi::transitions(p->proc, {}, &diags);
    if (format == 0) {
      std::string text;
      for (const epi::Transition& t : ts)
        text += epi::print_label(t.label) + "  ->  " + epi::print_process(t.target) + "\n";
      for (const std::string& d : diags) text += "note: " + d + "\n";
      *out = dup_string(text);
    } else {
      json arr = json::array();
      for (const epi::Transition& t : ts)
        arr.push_back(
            {{"label", epi::print_label(t.label)}, {"process", epi::print_process(t.target)}});
      json doc = {{"transitions", arr}, {"diagnostics", diags}};
      *out = dup_string(doc.dump(2));
    }
    return EPIC_OK;
  });
}

epic_status epic_run_tau(const epic_process* p, int strategy, size_t max_steps, uint64_t seed,
                         int format, char** trace, epic_process** final_state, int* quiescent,
                         char** error) {
  return guarded(error, [&] {
    epi::TauRun run = epi::run_tau(
        p->proc, strategy == 0 ? epi::Strategy::Deterministic : epi::Strategy::Random,
        max_steps, seed);
    if (trace) {
      if (format == 0) {
        std::string text;
        for (const epi::TauStep& s : run.steps)
          text += "tau: " + epi::print_process(s.state) + "\n";
        text += run.quiescent ? "quiescent after " : "step budget exhausted after ";
        text += std::to_string(run.steps.size()) + " steps\n";
        *trace = dup_string(text);
      } else {
        json arr = json::array();
        for (size_t i = 0; i < run.steps.size(); ++i)
          arr.push_back({{"step", i + 1},
                         {"label", "tau"},
                         {"process", epi::print_process(run.steps[i].state)}});
        json doc = {{"trace", arr},
                    {"quiescent", run.quiescent},
                    {"final", epi::print_process(run.final_state)}};
        *trace = dup_string(doc.dump(2));
      }
    }
    if (final_state) *final_state = new epic_process{run.final_state};
    if (quiescent) *quiescent = run.quiescent ? 1 : 0;
    return EPIC_OK;
  });
}

epic_status epic_wc_check(const epic_wcprogram* p, char** error) {
  if (std::optional<wc::WcTypeError> err = wc::typecheck_program(p->program)) {
    set_error(error, err->what());
    return EPIC_ERR_TYPE;
  }
  return EPIC_OK;
}

epic_status epic_wc_run(const epic_wcprogram* p, uint64_t fuel, char** output, char** error) {
  return guarded(error, [&] {
    wc::Environments env = wc::build_environments(p->program.classes);
    wc::ExecResult r = wc::exec(env.envt, env.envs, wc::EnvV{}, p->program.main,
                                fuel ? fuel : wc::kDefaultFuel);
    std::string text = wc::format_store(r.envs);
    for (const auto& [var, value] : r.envv.entries)
      text += var + " = " + wc::print_value(value) + "\n";
    *output = dup_string(text);
    return EPIC_OK;
  });
}

epic_status epic_compile(const epic_wcprogram* p, epic_unit** out, char** error) {
  return guarded(error, [&] {
    *out = new epic_unit{wc::compile(p->program)};
    return EPIC_OK;
  });
}

epic_process* epic_unit_process(const epic_unit* u) { return new epic_process{u->unit.process}; }

epic_typeenv* epic_unit_typeenv(const epic_unit* u) { return new epic_typeenv{u->unit.tenv}; }

char* epic_unit_decoder_json(const epic_unit* u) {
  json doc = json::object();
  for (const auto& [key, subject] : u->unit.decoder) {
    std::string subj;
    for (size_t i = 0; i < subject.size(); ++i) {
      if (i) subj += "*";
      subj += epi::print_value(subject[i]);
    }
    doc[key.first + "." + key.second] = subj;
  }
  return dup_string(doc.dump(2));
}

epic_status epic_correspond(const epic_wcprogram* p, int* verdict, char** report) {
  return guarded(report, [&] {
    epic::CorrespondReport r = epic::correspond(p->program);
    *verdict = static_cast<int>(r.verdict);
    if (report) {
      std::string text = std::string(epic::to_string(r.verdict)) + "\n";
      text += std::string("wc: ") + (r.wc_ok ? "well-typed" : "ill-typed") + "\n";
      if (r.epi_ok)
        text += std::string("epi: ") + (*r.epi_ok ? "well-typed" : "ill-typed") + "\n";
      if (!r.detail.empty()) text += r.detail + "\n";
      *report = dup_string(text);
    }
    return EPIC_OK;
  });
}

epic_status epic_agree(const epic_wcprogram* p, size_t max_steps, uint64_t seed, int* verdict,
                       char** report, char** error) {
  return guarded(error, [&] {
    epic::AgreeReport r = epic::agree(p->program, max_steps ? max_steps : 10000, seed);
    *verdict = static_cast<int>(r.verdict);
    if (report) {
      std::string text = std::string(epic::to_string(r.verdict)) + "\n";
      if (!r.detail.empty()) text += r.detail + "\n";
      if (!r.wc_store.empty()) text += "direct:\n" + r.wc_store;
      if (!r.epi_store.empty()) text += "compiled:\n" + r.epi_store;
      *report = dup_string(text);
    }
    return EPIC_OK;
  });
}

epic_status epic_fuzz(size_t count, uint64_t seed, size_t term_depth, size_t max_vec,
                      size_t pool, size_t explore_depth, size_t* failures, char** summary) {
  return guarded(summary, [&] {
    epic::FuzzConfig config;
    if (count) config.count = count;
    config.seed = seed;
    if (term_depth) config.max_depth = term_depth;
    if (max_vec) config.max_vec = max_vec;
    if (pool) config.pool = pool;
    epic::FuzzSummary s = epic::run_fuzz(config, explore_depth ? explore_depth : 10);
    if (failures) *failures = s.failures.size();
    if (summary) *summary = dup_string(s.describe());
    return EPIC_OK;
  });
}

epic_status epic_lemma_checks(size_t count, uint64_t seed, size_t* failures, char** summary) {
  return guarded(summary, [&] {
    epic::FuzzConfig config;
    if (count) config.count = count;
    config.seed = seed;
    epic::LemmaSummary s = epic::run_lemma_checks(config);
    if (failures) *failures = s.failures.size();
    if (summary) {
      std::string text = "weakening: " + std::to_string(s.weakening) +
                         ", strengthening: " + std::to_string(s.strengthening) +
                         ", substitution: " + std::to_string(s.substitution) +
                         ", failures: " + std::to_string(s.failures.size());
      for (const epic::FuzzFailure& f : s.failures)
        text += "\n  case " + std::to_string(f.index) + " " + f.what + ": " + f.detail;
      *summary = dup_string(text);
    }
    return EPIC_OK;
  });
}

} // extern "C"
