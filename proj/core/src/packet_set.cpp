#include "hlnc/packet_set.hpp"

#include "hlnc/errors.hpp"

namespace hlnc {

namespace {

void check_index(int k)
{
    if (k < 0 || k >= kMaxPackets)
        throw InvalidInput("packet index " + std::to_string(k) + " out of range");
}

} // namespace

PacketSet::PacketSet(std::initializer_list<int> indices)
{
    for (int k : indices)
        insert(k);
}

PacketSet PacketSet::from_indices(const std::vector<int>& indices)
{
    PacketSet s;
    for (int k : indices)
        s.insert(k);
    return s;
}

PacketSet PacketSet::first(int count)
{
    if (count < 0 || count > kMaxPackets)
        throw InvalidInput("packet count " + std::to_string(count) + " out of range");
    return PacketSet(count == kMaxPackets ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1));
}

void PacketSet::insert(int k)
{
    check_index(k);
    bits_ |= std::uint64_t{1} << k;
}

void PacketSet::erase(int k)
{
    check_index(k);
    bits_ &= ~(std::uint64_t{1} << k);
}

std::vector<int> PacketSet::indices() const
{
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int k) { out.push_back(k); });
    return out;
}

std::string PacketSet::to_string() const
{
    std::string out;
    for_each([&](int k) {
        if (!out.empty())
            out += ' ';
        out += std::to_string(k + 1);
    });
    return out;
}

} // namespace hlnc
