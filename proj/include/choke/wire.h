/*
 * Binary formats: ciphertext bundles and suite key files
 *
 * All integers are fixed-width big-endian.
 *
 * Bundle (*.bundle):
 *   "CHKE" | version u8 (=1) | scheme u8 (1 choke, 2 serial, 3 combiner)
 *   | field spec length u16 | field spec ASCII | n u16
 *   | entries: n (n*n for combiner) x [kem id u16 | length u32 | bytes]
 *
 * Public suite (*.suite):
 *   "CHPK" | version u8 | count u16 | count x [slot u16 | kem id u16 | param u32 | length u32 | public key]
 *
 * Secret keys (*.chsk):
 *   "CHSK" | version u8 | count u16 | count x [slot u16 | kem id u16 | param u32 | length u32 | secret key]
 *
 * Slots in key files are 0-based suite positions. Secret material only
 * ever appears in CHSK files.
 */

#ifndef CHOKE_WIRE_H_
#define CHOKE_WIRE_H_

#include <choke/schemes.h>

#include <cstdint>
#include <vector>

namespace choke {

inline constexpr std::uint8_t kWireVersion = 1;

Bytes serialize(const CiphertextBundle& bundle);

/// Throws ParseError with a kind naming the first defect found.
CiphertextBundle deserialize(ByteView bytes);

struct KeyFileEntry {
      std::size_t slot = 0;
      std::uint16_t kem = 0;
      std::uint32_t parameter = 0;
      Bytes key;

      bool operator==(const KeyFileEntry&) const = default;
};

enum class KeyFileKind { Public, Secret };

Bytes write_key_file(KeyFileKind kind, const std::vector<KeyFileEntry>& entries);
std::vector<KeyFileEntry> read_key_file(KeyFileKind kind, ByteView bytes);

/// Key file entries for every slot. Throws DomainError for process-local keys (TableKem).
std::vector<KeyFileEntry> export_keys(const KemSuite& suite, KeyFileKind kind);

/// Rebuilds a suite from a public key file and, optionally, secret key entries
/// for some or all slots. Slots without a secret key cannot decapsulate.
KemSuite import_suite(const FieldSpec& field,
                      std::size_t key_symbols,
                      const std::vector<KeyFileEntry>& public_entries,
                      const std::vector<KeyFileEntry>& secret_entries = {});

}  // namespace choke

#endif
