#pragma once

#include <array>
#include <cstdint>

namespace hlnc {

/// Element of GF(2^8) with reduction polynomial x^8+x^4+x^3+x^2+1 (0x11D).
class Gf256 {
public:
    static constexpr unsigned kPolynomial = 0x11D;
    static constexpr int kOrder = 256;

    constexpr Gf256() = default;
    constexpr explicit Gf256(std::uint8_t v) : value_(v) {}

    constexpr std::uint8_t value() const { return value_; }
    constexpr bool is_zero() const { return value_ == 0; }

    static constexpr Gf256 zero() { return Gf256(0); }
    static constexpr Gf256 one() { return Gf256(1); }

    friend constexpr bool operator==(Gf256, Gf256) = default;

private:
    std::uint8_t value_ = 0;
};

namespace detail {

struct GfTables {
    std::array<std::uint8_t, 512> exp{};
    std::array<std::uint8_t, 256> log{};
};

// 0x02 generates the multiplicative group under 0x11D.
constexpr GfTables make_gf_tables()
{
    GfTables t{};
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[i] = static_cast<std::uint8_t>(x);
        t.log[x] = static_cast<std::uint8_t>(i);
        x <<= 1;
        if (x & 0x100)
            x ^= Gf256::kPolynomial;
    }
    for (int i = 255; i < 512; ++i)
        t.exp[i] = t.exp[i - 255];
    return t;
}

inline constexpr GfTables kGfTables = make_gf_tables();

} // namespace detail

constexpr Gf256 gf_add(Gf256 a, Gf256 b)
{
    return Gf256(static_cast<std::uint8_t>(a.value() ^ b.value()));
}

constexpr Gf256 gf_mul(Gf256 a, Gf256 b)
{
    if (a.is_zero() || b.is_zero())
        return Gf256::zero();
    const auto& t = detail::kGfTables;
    return Gf256(t.exp[t.log[a.value()] + t.log[b.value()]]);
}

/// Multiplicative inverse; a must be nonzero.
constexpr Gf256 gf_inv(Gf256 a)
{
    const auto& t = detail::kGfTables;
    return Gf256(t.exp[255 - t.log[a.value()]]);
}

constexpr Gf256 operator+(Gf256 a, Gf256 b) { return gf_add(a, b); }
constexpr Gf256 operator-(Gf256 a, Gf256 b) { return gf_add(a, b); }
constexpr Gf256 operator*(Gf256 a, Gf256 b) { return gf_mul(a, b); }

} // namespace hlnc
