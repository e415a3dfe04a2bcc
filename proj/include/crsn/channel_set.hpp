#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace crsn {

using Channel = int;

// Set of channel indices in [0, kMaxChannels).
class ChannelSet {
 public:
  static constexpr int kMaxChannels = 64;

  constexpr ChannelSet() = default;

  // {0, ..., count-1}
  static ChannelSet full(int count);
  static ChannelSet of(const std::vector<Channel>& channels);

  bool contains(Channel c) const {
    return c >= 0 && c < kMaxChannels && ((bits_ >> c) & 1U) != 0;
  }
  void insert(Channel c);
  void erase(Channel c);

  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  std::uint64_t bits() const { return bits_; }

  // Ascending order.
  std::vector<Channel> to_vector() const;

  bool intersects(const ChannelSet& other) const { return (bits_ & other.bits_) != 0; }
  bool is_subset_of(const ChannelSet& other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  friend ChannelSet operator&(ChannelSet a, ChannelSet b) {
    a.bits_ &= b.bits_;
    return a;
  }
  friend ChannelSet operator|(ChannelSet a, ChannelSet b) {
    a.bits_ |= b.bits_;
    return a;
  }
  friend bool operator==(const ChannelSet&, const ChannelSet&) = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace crsn
