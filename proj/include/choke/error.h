/*
 * Error types shared by all choke modules
 */

#ifndef CHOKE_ERROR_H_
#define CHOKE_ERROR_H_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace choke {

class Error : public std::runtime_error {
   public:
      using std::runtime_error::runtime_error;
};

/// Precondition violated: mismatched fields, shapes or indices.
class DomainError : public Error {
   public:
      using Error::Error;
};

class NotInvertibleError : public Error {
   public:
      using Error::Error;
};

class ConstructionError : public Error {
   public:
      using Error::Error;
};

/// An enumeration or table bound would be exceeded.
class ResourceError : public Error {
   public:
      using Error::Error;
};

class ConflictError : public Error {
   public:
      using Error::Error;
};

class NotFoundError : public Error {
   public:
      using Error::Error;
};

/// Malformed ciphertext or symbol stream.
class DecodeError : public Error {
   public:
      using Error::Error;
};

/// A KEM rejected a ciphertext (unknown table entry, tag mismatch).
class DecapsulationFailure : public Error {
   public:
      using Error::Error;
};

/// A KEM in a suite slot failed to decapsulate. Slot indices are 0-based.
class DecapsulationError : public Error {
   public:
      DecapsulationError(std::size_t slot, std::uint16_t kem_id, const std::string& what) :
            Error("KEM_" + std::to_string(slot + 1) + " (id " + std::to_string(kem_id) + "): " + what),
            m_slot(slot),
            m_kem_id(kem_id) {}

      std::size_t slot() const { return m_slot; }

      std::uint16_t kem_id() const { return m_kem_id; }

   private:
      std::size_t m_slot;
      std::uint16_t m_kem_id;
};

/// The combiner could not recover block (key, slot); both 0-based.
class KeyDerivationError : public Error {
   public:
      KeyDerivationError(std::size_t key, std::size_t slot, const std::string& what) :
            Error("block (key " + std::to_string(key + 1) + ", KEM_" + std::to_string(slot + 1) + "): " + what),
            m_key(key),
            m_slot(slot) {}

      std::size_t key() const { return m_key; }

      std::size_t slot() const { return m_slot; }

   private:
      std::size_t m_key;
      std::size_t m_slot;
};

enum class ParseErrorKind {
   BadMagic,
   UnsupportedVersion,
   UnknownScheme,
   BadFieldSpec,
   Truncated,
   EntryCountMismatch,
   BadValue,
};

class ParseError : public Error {
   public:
      ParseError(ParseErrorKind kind, const std::string& what) : Error(what), m_kind(kind) {}

      ParseErrorKind kind() const { return m_kind; }

   private:
      ParseErrorKind m_kind;
};

}  // namespace choke

#endif
