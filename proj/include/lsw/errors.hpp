#pragma once

#include <stdexcept>
#include <string>

namespace lsw {

// Base for every contract violation raised by the library. The label names
// the violated contract so callers (and the CLI) can report it verbatim.
class contract_error : public std::runtime_error {
 public:
  contract_error(const std::string& label, const std::string& detail)
      : std::runtime_error(label + ": " + detail), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

struct non_hermitian_error : contract_error {
  explicit non_hermitian_error(const std::string& d) : contract_error("NonHermitian", d) {}
};

struct invalid_state_error : contract_error {
  explicit invalid_state_error(const std::string& d) : contract_error("InvalidState", d) {}
};

struct domain_error : contract_error {
  explicit domain_error(const std::string& d) : contract_error("DomainError", d) {}
};

struct negative_radicand_error : contract_error {
  explicit negative_radicand_error(const std::string& d) : contract_error("NegativeRadicand", d) {}
};

struct effect_invalid_error : contract_error {
  explicit effect_invalid_error(const std::string& d) : contract_error("EffectInvalid", d) {}
};

struct mismatched_eta_error : contract_error {
  explicit mismatched_eta_error(const std::string& d) : contract_error("MismatchedEta", d) {}
};

struct not_rank1_error : contract_error {
  explicit not_rank1_error(const std::string& d) : contract_error("NotRank1", d) {}
};

struct chi_out_of_range_error : contract_error {
  explicit chi_out_of_range_error(const std::string& d) : contract_error("ChiOutOfRange", d) {}
};

struct ill_conditioned_error : contract_error {
  explicit ill_conditioned_error(const std::string& d) : contract_error("IllConditioned", d) {}
};

struct non_unitary_error : contract_error {
  explicit non_unitary_error(const std::string& d) : contract_error("NonUnitary", d) {}
};

struct solver_error : contract_error {
  explicit solver_error(const std::string& d) : contract_error("SolverFailure", d) {}
};

struct config_error : contract_error {
  explicit config_error(const std::string& d) : contract_error("ConfigError", d) {}
};

}  // namespace lsw
