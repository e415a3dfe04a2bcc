#include "crsn/channel_set.hpp"

#include <stdexcept>
#include <string>

namespace crsn {

namespace {

void check_channel(Channel c) {
  if (c < 0 || c >= ChannelSet::kMaxChannels) {
    throw std::out_of_range("channel index out of range: " + std::to_string(c));
  }
}

}  // namespace

ChannelSet ChannelSet::full(int count) {
  if (count < 0 || count > kMaxChannels) {
    throw std::out_of_range("channel count out of range: " + std::to_string(count));
  }
  ChannelSet set;
  set.bits_ = count == kMaxChannels ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
  return set;
}

ChannelSet ChannelSet::of(const std::vector<Channel>& channels) {
  ChannelSet set;
  for (Channel c : channels) {
    set.insert(c);
  }
  return set;
}

void ChannelSet::insert(Channel c) {
  check_channel(c);
  bits_ |= std::uint64_t{1} << c;
}

void ChannelSet::erase(Channel c) {
  check_channel(c);
  bits_ &= ~(std::uint64_t{1} << c);
}

std::vector<Channel> ChannelSet::to_vector() const {
  std::vector<Channel> out;
  out.reserve(size());
  for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(std::countr_zero(rest));
  }
  return out;
}

}  // namespace crsn
