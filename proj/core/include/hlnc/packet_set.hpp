#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace hlnc {

/// Largest block size supported. Packet sets are 64-bit masks.
inline constexpr int kMaxPackets = 64;

/// A set of packet indices in [0, kMaxPackets), stored as a bitmask.
///
/// Packet indices are zero-based throughout the library; text formats and
/// CLI output use one-based packet numbers (p1, p2, ...).
class PacketSet {
public:
    constexpr PacketSet() = default;
    constexpr explicit PacketSet(std::uint64_t bits) : bits_(bits) {}
    PacketSet(std::initializer_list<int> indices);

    static PacketSet from_indices(const std::vector<int>& indices);
    /// {0, 1, ..., count - 1}
    static PacketSet first(int count);

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool contains(int k) const { return (bits_ >> k) & 1U; }
    /// Lowest index in the set; -1 when empty.
    constexpr int lowest() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }

    void insert(int k);
    void erase(int k);

    constexpr bool is_subset_of(PacketSet other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool intersects(PacketSet other) const { return (bits_ & other.bits_) != 0; }

    std::vector<int> indices() const;
    /// One-based, space separated: "1 4".
    std::string to_string() const;

    template <typename F>
    void for_each(F&& f) const
    {
        for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1)
            f(std::countr_zero(rest));
    }

    friend constexpr PacketSet operator|(PacketSet a, PacketSet b) { return PacketSet(a.bits_ | b.bits_); }
    friend constexpr PacketSet operator&(PacketSet a, PacketSet b) { return PacketSet(a.bits_ & b.bits_); }
    /// Set difference.
    friend constexpr PacketSet operator-(PacketSet a, PacketSet b) { return PacketSet(a.bits_ & ~b.bits_); }
    PacketSet& operator|=(PacketSet o) { bits_ |= o.bits_; return *this; }
    PacketSet& operator&=(PacketSet o) { bits_ &= o.bits_; return *this; }
    PacketSet& operator-=(PacketSet o) { bits_ &= ~o.bits_; return *this; }

    friend constexpr bool operator==(PacketSet, PacketSet) = default;
    friend constexpr auto operator<=>(PacketSet, PacketSet) = default;

private:
    std::uint64_t bits_ = 0;
};

} // namespace hlnc
