#pragma once

#include "hlnc/field.hpp"
#include "hlnc/packet_set.hpp"

#include <span>
#include <vector>

namespace hlnc {

/// Header of one transmitted packet: one coefficient per packet of the block.
/// The support of the vector is the coding set.
class CodingVector {
public:
    CodingVector() = default;
    explicit CodingVector(int block_size);
    explicit CodingVector(std::vector<Gf256> coeffs);

    static CodingVector unit(int block_size, int k);
    /// All-ones over the given set (a binary XOR packet).
    static CodingVector xor_of(int block_size, PacketSet set);
    static CodingVector from_bytes(std::span<const std::uint8_t> coeffs);

    int size() const { return static_cast<int>(coeffs_.size()); }
    Gf256 operator[](int k) const { return coeffs_[k]; }
    Gf256& operator[](int k) { return coeffs_[k]; }

    PacketSet support() const;
    bool is_zero() const;
    /// True iff every nonzero coefficient is 1.
    bool is_binary() const;

    std::span<const Gf256> coeffs() const { return coeffs_; }

    friend bool operator==(const CodingVector&, const CodingVector&) = default;

private:
    std::vector<Gf256> coeffs_;
};

/// A receiver's knowledge space, kept in reduced row-echelon form.
///
/// Each row has leading coefficient 1 and its pivot column is zero in every
/// other row. Packet k is decoded iff the unit vector e_k lies in the span,
/// which in RREF means some row equals e_k.
class KnowledgeMatrix {
public:
    KnowledgeMatrix() = default;
    explicit KnowledgeMatrix(int block_size);
    /// Starts with the unit vectors of `known` in the span.
    KnowledgeMatrix(int block_size, PacketSet known);

    int block_size() const { return block_size_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    bool full() const { return rank() == block_size_; }

    /// Inserts v if it is outside the span. Returns true iff it was innovative.
    /// Throws InvalidInput on a length mismatch.
    bool eliminate(const CodingVector& v);
    bool is_innovative(const CodingVector& v) const;

    /// Indices k with e_k in the span.
    PacketSet decoded() const { return decoded_; }

    /// Rows in pivot-column order.
    std::vector<CodingVector> rows() const;

    /// Same span; RREF makes this a row-by-row comparison.
    friend bool operator==(const KnowledgeMatrix& a, const KnowledgeMatrix& b);

private:
    /// v reduced against every row; zero iff v is in the span.
    CodingVector reduce(const CodingVector& v) const;
    void refresh_decoded();

    int block_size_ = 0;
    std::vector<CodingVector> rows_;
    std::vector<int> pivot_row_; // per column, index into rows_ or -1
    PacketSet decoded_;
};

bool is_innovative(const CodingVector& v, const KnowledgeMatrix& km);

} // namespace hlnc
