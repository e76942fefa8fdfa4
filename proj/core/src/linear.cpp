#include "hlnc/linear.hpp"

#include "hlnc/errors.hpp"

#include <algorithm>
#include <string>

namespace hlnc {

CodingVector::CodingVector(int block_size) : coeffs_(static_cast<std::size_t>(block_size)) {}

CodingVector::CodingVector(std::vector<Gf256> coeffs) : coeffs_(std::move(coeffs)) {}

CodingVector CodingVector::unit(int block_size, int k)
{
    CodingVector v(block_size);
    v[k] = Gf256::one();
    return v;
}

CodingVector CodingVector::xor_of(int block_size, PacketSet set)
{
    CodingVector v(block_size);
    set.for_each([&](int k) { v[k] = Gf256::one(); });
    return v;
}

CodingVector CodingVector::from_bytes(std::span<const std::uint8_t> coeffs)
{
    std::vector<Gf256> out;
    out.reserve(coeffs.size());
    for (auto c : coeffs)
        out.emplace_back(c);
    return CodingVector(std::move(out));
}

PacketSet CodingVector::support() const
{
    PacketSet s;
    for (int k = 0; k < size(); ++k)
        if (!coeffs_[k].is_zero())
            s.insert(k);
    return s;
}

bool CodingVector::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Gf256 c) { return c.is_zero(); });
}

bool CodingVector::is_binary() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](Gf256 c) { return c.is_zero() || c == Gf256::one(); });
}

KnowledgeMatrix::KnowledgeMatrix(int block_size)
    : block_size_(block_size), pivot_row_(static_cast<std::size_t>(block_size), -1)
{
    if (block_size < 1 || block_size > kMaxPackets)
        throw InvalidInput("block size must be in [1, " + std::to_string(kMaxPackets) + "]");
}

KnowledgeMatrix::KnowledgeMatrix(int block_size, PacketSet known) : KnowledgeMatrix(block_size)
{
    if (!known.is_subset_of(PacketSet::first(block_size)))
        throw InvalidInput("known set references a packet outside the block");
    known.for_each([&](int k) {
        pivot_row_[k] = static_cast<int>(rows_.size());
        rows_.push_back(CodingVector::unit(block_size, k));
    });
    decoded_ = known;
}

CodingVector KnowledgeMatrix::reduce(const CodingVector& v) const
{
    if (v.size() != block_size_)
        throw InvalidInput("coding vector length " + std::to_string(v.size()) + " does not match block size " +
                           std::to_string(block_size_));
    CodingVector r = v;
    for (int col = 0; col < block_size_; ++col) {
        const int ri = pivot_row_[col];
        if (ri < 0 || r[col].is_zero())
            continue;
        const Gf256 f = r[col];
        const CodingVector& row = rows_[ri];
        for (int j = col; j < block_size_; ++j)
            r[j] = r[j] + f * row[j];
    }
    return r;
}

bool KnowledgeMatrix::eliminate(const CodingVector& v)
{
    CodingVector r = reduce(v);
    int lead = 0;
    while (lead < block_size_ && r[lead].is_zero())
        ++lead;
    if (lead == block_size_)
        return false;

    const Gf256 inv = gf_inv(r[lead]);
    for (int j = lead; j < block_size_; ++j)
        r[j] = r[j] * inv;

    // Clear the new pivot column from the existing rows.
    for (auto& row : rows_) {
        const Gf256 f = row[lead];
        if (f.is_zero())
            continue;
        for (int j = lead; j < block_size_; ++j)
            row[j] = row[j] + f * r[j];
    }

    pivot_row_[lead] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    refresh_decoded();
    return true;
}

bool KnowledgeMatrix::is_innovative(const CodingVector& v) const
{
    return !reduce(v).is_zero();
}

void KnowledgeMatrix::refresh_decoded()
{
    decoded_ = PacketSet{};
    for (int col = 0; col < block_size_; ++col) {
        const int ri = pivot_row_[col];
        if (ri < 0)
            continue;
        const CodingVector& row = rows_[ri];
        int j = col + 1; // the pivot is the leading entry
        while (j < block_size_ && row[j].is_zero())
            ++j;
        if (j == block_size_)
            decoded_.insert(col);
    }
}

std::vector<CodingVector> KnowledgeMatrix::rows() const
{
    std::vector<CodingVector> out;
    out.reserve(rows_.size());
    for (int col = 0; col < block_size_; ++col)
        if (pivot_row_[col] >= 0)
            out.push_back(rows_[pivot_row_[col]]);
    return out;
}

bool operator==(const KnowledgeMatrix& a, const KnowledgeMatrix& b)
{
    if (a.block_size_ != b.block_size_ || a.rank() != b.rank() || a.decoded_ != b.decoded_)
        return false;
    for (int col = 0; col < a.block_size_; ++col) {
        const int ra = a.pivot_row_[col];
        const int rb = b.pivot_row_[col];
        if ((ra < 0) != (rb < 0))
            return false;
        if (ra >= 0 && a.rows_[ra] != b.rows_[rb])
            return false;
    }
    return true;
}

bool is_innovative(const CodingVector& v, const KnowledgeMatrix& km)
{
    return km.is_innovative(v);
}

} // namespace hlnc
