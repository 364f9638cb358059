#include "aaa/source.hpp"

#include <fstream>
#include <iterator>
#include <unordered_set>

#include "aaa/errors.hpp"

namespace aaa {

void MarkovParams::validate() const {
  for (std::size_t k = 0; k < alphas.size(); ++k)
    if (!(alphas[k] >= 0.0 && alphas[k] <= 1.0))
      throw DomainError("Markov stay probability alpha_" + std::to_string(k + 2) + " outside [0,1]");
}

BitMatrix gen_iid_bits(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix x(rows, cols);
  const std::uint64_t tail = (rows % 64) ? (std::uint64_t{1} << (rows % 64)) - 1 : ~std::uint64_t{0};
  for (std::size_t i = 0; i < cols; ++i) {
    auto col = x.column_words(i);
    rng.fill(col);
    col.back() &= tail;
  }
  return x;
}

BitMatrix gen_iid_bits(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  return gen_iid_bits(rows, cols, rng);
}

BitMatrix gen_markov_bits(std::size_t cols, const MarkovParams& params, Rng& rng, std::size_t rows) {
  if (rows != 1) throw ConfigError("Markov sources are single-row; got " + std::to_string(rows) + " rows");
  const std::size_t expected = cols == 0 ? 0 : cols - 1;
  if (params.alphas.size() != expected)
    throw ConfigError("Markov chain of " + std::to_string(cols) + " steps needs " + std::to_string(expected) +
                      " stay probabilities, got " + std::to_string(params.alphas.size()));
  params.validate();
  BitMatrix x(1, cols);
  if (cols == 0) return x;
  std::uint8_t prev = rng.bit();
  x.set(0, 0, prev);
  for (std::size_t i = 1; i < cols; ++i) {
    const bool stay = rng.bernoulli(params.alphas[i - 1]);
    prev = stay ? prev : static_cast<std::uint8_t>(prev ^ 1u);
    x.set(0, i, prev);
  }
  return x;
}

BitMatrix gen_markov_bits(std::size_t cols, const MarkovParams& params, std::uint64_t seed, std::size_t rows) {
  Rng rng(seed);
  return gen_markov_bits(cols, params, rng, rows);
}

std::vector<std::uint8_t> select_bits(std::span<const std::uint8_t> packet, const PacketSelector& sel) {
  std::unordered_set<std::size_t> seen;
  std::vector<std::uint8_t> bits;
  bits.reserve(sel.offsets.size());
  for (auto off : sel.offsets) {
    if (off >= packet.size() * 8)
      throw SelectionError("offset " + std::to_string(off) + " outside packet '" + sel.packet_id + "' of " +
                           std::to_string(packet.size()) + " bytes");
    if (!seen.insert(off).second) throw SelectionError("duplicate offset " + std::to_string(off));
    bits.push_back(static_cast<std::uint8_t>((packet[off / 8] >> (7 - off % 8)) & 1u));
  }
  return bits;
}

std::vector<std::uint8_t> read_packet(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SelectionError("cannot open packet file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace aaa
