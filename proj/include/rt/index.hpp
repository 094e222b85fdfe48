#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rt {

/// An index identity paired with one of its two variants.
///
/// The true variant is written as a subscript, the false variant as a
/// superscript (or with an overbar). Complementing flips the variant and never
/// the identity, so `~~i == i`. Handles are plain values; comparing identities
/// needs no registry lookup.
class Index {
 public:
  /// A new true-variant index whose id was never handed out before.
  static Index fresh();
  static std::vector<Index> fresh_many(std::size_t n);

  std::uint64_t id() const noexcept { return id_; }
  bool variant() const noexcept { return variant_; }

  Index complement() const noexcept { return Index(id_, !variant_); }
  Index as_true() const noexcept { return Index(id_, true); }
  Index as_false() const noexcept { return Index(id_, false); }

  Index operator~() const noexcept { return complement(); }

  bool same_id(const Index& other) const noexcept { return id_ == other.id_; }

  friend bool operator==(const Index&, const Index&) = default;

  /// Debug label such as "i7" or "~i7".
  std::string debug_string() const;

 private:
  Index(std::uint64_t id, bool variant) : id_(id), variant_(variant) {}

  std::uint64_t id_;
  bool variant_;
};

inline Index complement(const Index& h) { return h.complement(); }
inline bool same_id(const Index& a, const Index& b) { return a.same_id(b); }
inline bool variant(const Index& h) { return h.variant(); }
inline Index as_true(const Index& h) { return h.as_true(); }
inline Index as_false(const Index& h) { return h.as_false(); }

std::vector<Index> complement_all(const std::vector<Index>& idx);

}  // namespace rt

template <>
struct std::hash<rt::Index> {
  std::size_t operator()(const rt::Index& h) const noexcept {
    return std::hash<std::uint64_t>{}(h.id() * 2 + (h.variant() ? 1 : 0));
  }
};
