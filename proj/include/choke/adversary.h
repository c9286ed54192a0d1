/*
 * Eavesdropper model for CHOKE
 *
 * A broken KEM is one whose secret key the adversary holds. The adversary
 * sees every ciphertext, the public generator matrix and all public keys,
 * and the plaintext coded symbols X_i of the broken slots. Whatever the
 * revealed symbols determine is reported, including the linear relations
 * among keys that leak even when no single key is recoverable.
 *
 * Indices are 0-based.
 */

#ifndef CHOKE_ADVERSARY_H_
#define CHOKE_ADVERSARY_H_

#include <choke/infotheory.h>
#include <choke/iscode.h>
#include <choke/schemes.h>

#include <map>
#include <optional>
#include <vector>

namespace choke {

class BreakSet {
   public:
      BreakSet() = default;

      /// Throws DomainError for an index >= n; duplicates are merged.
      BreakSet(std::vector<std::size_t> broken, std::size_t n);

      const std::vector<std::size_t>& broken() const { return m_broken; }

      bool contains(std::size_t i) const;

      std::size_t size() const { return m_broken.size(); }

      bool empty() const { return m_broken.empty(); }

   private:
      std::vector<std::size_t> m_broken;
};

struct AdversaryView {
      std::vector<BundleEntry> ciphertexts;
      /// Broken slot -> its decapsulated coded symbol row X_i.
      std::map<std::size_t, std::vector<std::uint32_t>> revealed;
      /// Empty (0x0) unless supplied to eve_view.
      Matrix generator;
      std::vector<KemPublicKey> public_keys;
      FieldSpec field;
};

/// Throws DomainError if the bundle is not a CHOKE bundle for this suite.
AdversaryView eve_view(const CiphertextBundle& bundle, const KemSuite& suite, const BreakSet& breaks);

/// As above, with the public generator recorded in the view.
AdversaryView eve_view(const CiphertextBundle& bundle,
                       const KemSuite& suite,
                       const BreakSet& breaks,
                       const GeneratorMatrix& g);

struct KeyVerdict {
      /// Key symbols, when the revealed symbols determine them; otherwise hidden.
      std::optional<std::vector<std::uint32_t>> recovered;

      bool hidden() const { return !recovered.has_value(); }
};

struct RecoveryVerdict {
      std::vector<KeyVerdict> keys;
      /// One coefficient vector over (k_1..k_n) per revealed symbol: column i of G.
      std::vector<std::vector<std::uint32_t>> leaked_combinations;
      std::vector<std::size_t> broken;
};

RecoveryVerdict attempt_key_recovery(const AdversaryView& view, const Matrix& g);
RecoveryVerdict attempt_key_recovery(const AdversaryView& view, const GeneratorMatrix& g);

/// Bound on q^n for the exhaustive real/ideal experiment.
inline constexpr std::uint64_t kExperimentEnumerationBound = 100'000;

struct ExperimentResult {
      /// Total variation distance between the real and ideal view distributions.
      Fraction distance;
      /// I(k_j; ideal view) for every j.
      std::vector<MutualInformation> mi_ideal;
      /// I(k_j; real view) for every j.
      std::vector<MutualInformation> mi_real;
};

/// Enumerates all key tuples (d = 1) and all encapsulation randomness of a
/// TableKem with `ciphertext_space` slots placed at `unbroken_slot`.
/// Real view: (enc(X_u), X_j for j != u). Ideal view: (enc(0), X_j for j != u).
ExperimentResult real_ideal_experiment(const Matrix& g, std::size_t unbroken_slot, std::uint64_t ciphertext_space = 4);

/// Monte-Carlo comparison with an XorKem at the unbroken slot. The distance is
/// a bounded-sample estimate over ciphertext bytes with no pass/fail meaning.
Fraction xorkem_real_ideal_smoke(const Matrix& g, std::size_t unbroken_slot, std::size_t samples, RandomSource& rng);

}  // namespace choke

#endif
