#pragma once
// Packed exterior forms and the chain spaces C_l = (l-forms) (x) T, T = four slots
// (sigma: k-form, phi: (k+1)-form, mu: (k-1)-form, rho: k-form).

#include <array>
#include <cstdint>
#include <vector>

namespace ckp {

using IndexTuple = std::array<std::int8_t, 8>;

class FormBasis {
 public:
  static const FormBasis& get(int n, int p);

  int n() const { return n_; }
  int degree() const { return p_; }
  int dim() const { return static_cast<int>(tuples_.size()); }
  const IndexTuple& tuple(int i) const { return tuples_[i]; }
  // colex rank of a strictly increasing tuple
  int rank_sorted(const int* idx) const;
  // index of an arbitrary tuple; sign of the sorting permutation in *sign,
  // returns -1 on a repeated index
  int lookup(const int* idx, int* sign) const;

 private:
  FormBasis(int n, int p);
  int n_, p_;
  std::vector<IndexTuple> tuples_;
  std::vector<std::vector<int>> binom_;
};

long long binomial(int n, int r);

enum Slot { kSigma = 0, kPhi = 1, kMu = 2, kRho = 3 };

// C_l (x) (sum of form slots). The tractor chain spaces use the four slots
// above; single-slot product spaces E_{[c1..cl]} (x) Lambda^p share the layout.
class ChainSpace {
 public:
  static const ChainSpace& get(int n, int k, int level);
  static const ChainSpace& product(int n, int level, int p);

  int n() const { return n_; }
  int k() const { return k_; }
  int level() const { return l_; }
  int slots() const { return static_cast<int>(fs_.size()); }
  const FormBasis& cbasis() const { return *cb_; }
  const FormBasis& slot_basis(int s) const { return *fs_[s]; }
  int slot_degree(int s) const { return fs_[s]->degree(); }
  int slot_offset(int s) const { return off_[s]; }
  int slot_dim(int s) const { return fs_[s]->dim(); }
  int tdim() const { return off_.back(); }
  int dim() const { return cb_->dim() * off_.back(); }
  int index(int ci, int slot, int ai) const { return ci * off_.back() + off_[slot] + ai; }
  // slot of a flat index
  int slot_of(int i) const;

 private:
  ChainSpace(int n, int k, int l, const std::vector<int>& degrees);
  int n_, k_, l_;
  const FormBasis* cb_;
  std::vector<const FormBasis*> fs_;
  std::vector<int> off_;
};

// weights of the pairing on T (sigma, phi, mu, rho)
double slot_weight(int k, int slot);

}  // namespace ckp
