#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "fnmc/bits.hpp"

namespace fnmc {

/// Off-diagonal entries with magnitude at or below this are treated as absent
/// by row access, stoquasticity checks and sign classification.
inline constexpr double kEntryThreshold = 1e-12;

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

struct PauliFactor {
  int site;
  Pauli label;
};

/// coefficient * P_{s1} P_{s2} ... with strictly increasing sites.
class PauliTerm {
 public:
  PauliTerm(double coefficient, std::vector<PauliFactor> support);

  double coefficient() const noexcept { return coefficient_; }
  const std::vector<PauliFactor>& support() const noexcept { return support_; }
  int y_count() const noexcept { return y_count_; }
  int max_site() const noexcept {
    return support_.empty() ? -1 : support_.back().site;
  }

 private:
  double coefficient_;
  std::vector<PauliFactor> support_;
  int y_count_ = 0;
};

struct Entry {
  BitConfiguration state;
  double value;
};

struct ComplexEntry {
  BitConfiguration state;
  std::complex<double> value;
};

/// Real symmetric operator accessed one column at a time.
///
/// row(x) lists every y with <y|A|x> != 0; the diagonal entry comes first and
/// is always present, even when zero.
class RowOperator {
 public:
  virtual ~RowOperator() = default;

  virtual int num_qubits() const = 0;
  virtual std::vector<Entry> row(const BitConfiguration& x) const = 0;
  virtual double matrix_element(const BitConfiguration& y,
                                const BitConfiguration& x) const = 0;
  /// Upper bound on the operator norm.
  virtual double norm_bound() const = 0;
  /// Upper bound on the number of off-diagonal nonzeros in any row.
  virtual int max_row_degree() const = 0;
};

/// Hermitian operator given as a list of Pauli terms with real coefficients.
///
/// Terms are grouped by the bit mask they flip, so a row costs one pass over
/// the term list and duplicate targets are summed exactly once. The operator
/// is real (hence usable through RowOperator) iff every term has an even
/// number of Y factors; otherwise only complex_row() is available and the
/// operator must go through real_embedding().
class SparseHamiltonian : public RowOperator {
 public:
  SparseHamiltonian(int num_qubits, std::vector<PauliTerm> terms);

  static SparseHamiltonian from_json(int num_qubits, const nlohmann::json& j);
  nlohmann::json to_json() const;

  int num_qubits() const override { return n_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  bool is_real() const noexcept { return real_; }
  /// Largest support size over all terms.
  int locality() const noexcept { return locality_; }

  /// Throws InvalidHamiltonian unless is_real().
  std::vector<Entry> row(const BitConfiguration& x) const override;
  double matrix_element(const BitConfiguration& y,
                        const BitConfiguration& x) const override;

  std::vector<ComplexEntry> complex_row(const BitConfiguration& x) const;
  std::complex<double> complex_matrix_element(const BitConfiguration& y,
                                              const BitConfiguration& x) const;

  /// Sum of |coefficient| over terms.
  double norm_bound() const override { return norm_bound_; }
  /// Number of distinct nontrivial flip masks.
  int max_row_degree() const override {
    return static_cast<int>(groups_.size()) - 1;
  }

 private:
  struct CompiledTerm {
    BitConfiguration phase_mask;  // sites carrying Y or Z
    std::complex<double> factor;  // coefficient * i^{#Y}
  };
  struct Group {
    BitConfiguration flip;  // sites carrying X or Y
    std::vector<CompiledTerm> terms;
  };

  void require_real() const;
  std::complex<double> group_value(const Group& g,
                                   const BitConfiguration& x) const noexcept;

  int n_;
  std::vector<PauliTerm> terms_;
  std::vector<Group> groups_;  // groups_[0] is the diagonal group
  std::unordered_map<BitConfiguration, std::size_t, BitConfigurationHash>
      group_index_;
  bool real_ = true;
  int locality_ = 0;
  double norm_bound_ = 0.0;
};

double norm_bound(const RowOperator& h);

struct StoquasticityWitness {
  BitConfiguration x;
  BitConfiguration y;
  double value;  // <y|H|x> > 0
};

struct StoquasticityResult {
  enum class Verdict { kStoquastic, kNotStoquastic, kUndecidedAtCap };
  Verdict verdict;
  std::optional<StoquasticityWitness> witness;
  std::uint64_t states_checked = 0;

  bool stoquastic() const { return verdict == Verdict::kStoquastic; }
};

using StateFilter = std::function<bool(const BitConfiguration&)>;

/// Checks <y|H|x> <= kEntryThreshold for all x != y with x (and y) passing
/// the optional filter. Enumerates the 2^n basis; reports undecided once more
/// than `state_cap` states pass the filter.
StoquasticityResult is_stoquastic(const RowOperator& h,
                                  const StateFilter& sector = {},
                                  std::uint64_t state_cap = std::uint64_t{1}
                                                            << 20);

std::ostream& operator<<(std::ostream& os, Pauli p);

}  // namespace fnmc
