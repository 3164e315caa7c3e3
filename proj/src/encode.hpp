#ifndef EPIC_ENCODE_HPP
#define EPIC_ENCODE_HPP

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "epi_types.hpp"
#include "wc_ast.hpp"
#include "wc_types.hpp"

namespace wc {

// The translation of a statement or expression needs type annotations for
// the restrictions it introduces; when an annotation is underivable the
// translation itself is undefined.
struct Untranslatable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic generator for compiler-introduced names. The '$' prefix is
// rejected by the WC parser, so minted names cannot clash with source ones.
class NameMint {
public:
  std::string fresh(const std::string& stem) {
    return "$" + stem + std::to_string(next_++);
  }

private:
  std::uint64_t next_ = 0;
};

// Container type names: a cell holding a B-value, a method channel, and the
// return-signal type.
std::string ref_container_name(const BaseType& b);                   // $Ref_<B>
std::string proc_container_name(const std::vector<BaseType>& sig);   // $Proc_<B1>_..._<Bn>
inline const std::string kRetTypeName = "$Ret";                      // I^ret

// Collects the container definitions a compilation uses; duplicates
// coalesce, a name demanded at two different definitions is a conflict.
class ContainerSet {
public:
  epi::BaseType ref(const BaseType& b);                 // $Ref_B : (ch(B), {})
  epi::BaseType proc(const std::vector<BaseType>& sig); // $Proc_sig : (ch($Ret, sig), {})
  epi::BaseType ret();                                  // $Ret : (ch(), {})
  const std::map<std::string, epi::TreeType>& defs() const { return defs_; }

private:
  std::map<std::string, epi::TreeType> defs_;
};

// Reference-cell protocol: a cell is a floating output, read and written by
// input-then-reoutput.
epi::Proc loc_new(const std::string& cell, const epi::BaseType& container, epi::Expr init,
                  epi::Proc body);
epi::Proc loc_read(std::vector<epi::Value> cell, const std::string& binder, epi::Proc body);
epi::Proc loc_write(std::vector<epi::Value> cell, const std::string& scratch, epi::Expr value,
                    epi::Proc body);

// A process with exactly one hole; filling is capture-permitting, the
// context's binders scope over the plug.
class ProcessContext {
public:
  ProcessContext() : fill_([](epi::Proc p) { return p; }) {}
  explicit ProcessContext(std::function<epi::Proc(epi::Proc)> f) : fill_(std::move(f)) {}
  epi::Proc fill(epi::Proc plug) const { return fill_(std::move(plug)); }

private:
  std::function<epi::Proc(epi::Proc)> fill_;
};

struct CompilationUnit {
  epi::Proc process;
  epi::TypeEnv tenv;
  // (class, field) -> cell subject [A, p]
  std::map<std::pair<std::string, std::string>, std::vector<epi::Value>> decoder;
  std::string return_name; // minted top-level return channel
};

// Translates the interface/class type environment. Used-member and container
// entries are added globally; `extra` receives every container minted here.
epi::TypeEnv encode_gamma(const WcTypeEnv& gamma, const std::set<std::string>& class_names,
                          ContainerSet& containers);

// Statement/expression/environment translations, exposed for tests. Each
// uses the supplied mint for auxiliary names.
class Encoder {
public:
  Encoder(WcTypeEnv gamma, std::set<std::string> class_names);

  epi::Proc encode_expr(const Expr& e, const std::string& z, const WcTypeEnv& gamma);
  epi::Proc encode_stm(const StmPtr& s, const std::string& r, const WcTypeEnv& gamma);
  epi::Proc encode_env_f(const EnvF& envf, const std::string& cls);
  epi::Proc encode_env_m(const EnvM& envm, const std::string& cls);
  epi::Proc encode_env_s(const EnvS& envs);
  epi::Proc encode_env_t(const EnvT& envt);
  ProcessContext encode_env_v(const EnvV& envv, const WcTypeEnv& gamma);

  // Top-level configuration translation for <S, envTSV>.
  CompilationUnit encode_config(const EnvT& envt, const EnvS& envs, const EnvV& envv,
                                const StmPtr& main);

  NameMint& mint() { return mint_; }
  ContainerSet& containers() { return containers_; }
  const WcTypeEnv& gamma() const { return gamma_; }

private:
  WcTypeEnv gamma_;
  std::set<std::string> class_names_;
  NameMint mint_;
  ContainerSet containers_;

  BaseType type_of(const WcTypeEnv& gamma, const Expr& e); // throws Untranslatable
};

// Whole-program compilation; deterministic. Throws Untranslatable when the
// translation is undefined for the input.
CompilationUnit compile(const Program& program);

// Reads final field values back from a quiescent compiled state: scans
// parallel components under restrictions but never under a prefix.
std::map<std::pair<std::string, std::string>, Value> decode_fields(const epi::Proc& quiescent,
                                                                   const CompilationUnit& unit);

} // namespace wc

#endif
