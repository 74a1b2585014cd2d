/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef RI_GUARD_RI_BITSET_HH
#define RI_GUARD_RI_BITSET_HH 1

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ri
{
    /**
     * Fixed-size bitset over node ids, sized at construction. Used for
     * domains and for the used-target set during search.
     */
    class NodeBitset
    {
        private:
            std::vector<std::uint64_t> _words;
            std::size_t _size = 0;

            static constexpr std::size_t bits_per_word = 64;

        public:
            NodeBitset() = default;

            explicit NodeBitset(std::size_t size) :
                _words((size + bits_per_word - 1) / bits_per_word, 0),
                _size(size)
            {
            }

            auto size() const -> std::size_t
            {
                return _size;
            }

            auto test(std::size_t i) const -> bool
            {
                return (_words[i / bits_per_word] >> (i % bits_per_word)) & 1u;
            }

            auto set(std::size_t i) -> void
            {
                _words[i / bits_per_word] |= std::uint64_t{1} << (i % bits_per_word);
            }

            auto reset(std::size_t i) -> void
            {
                _words[i / bits_per_word] &= ~(std::uint64_t{1} << (i % bits_per_word));
            }

            auto set_all() -> void
            {
                for (auto & w : _words)
                    w = ~std::uint64_t{0};
                if (_size % bits_per_word != 0 && ! _words.empty())
                    _words.back() &= (std::uint64_t{1} << (_size % bits_per_word)) - 1;
            }

            auto reset_all() -> void
            {
                for (auto & w : _words)
                    w = 0;
            }

            auto count() const -> std::size_t
            {
                std::size_t result = 0;
                for (auto w : _words)
                    result += std::popcount(w);
                return result;
            }

            auto none() const -> bool
            {
                for (auto w : _words)
                    if (w)
                        return false;
                return true;
            }

            /// Index of the lowest set bit, or size() if none.
            auto find_first() const -> std::size_t
            {
                for (std::size_t i = 0 ; i < _words.size() ; ++i)
                    if (_words[i])
                        return i * bits_per_word + std::countr_zero(_words[i]);
                return _size;
            }

            auto is_subset_of(const NodeBitset & other) const -> bool
            {
                for (std::size_t i = 0 ; i < _words.size() ; ++i)
                    if (_words[i] & ~other._words[i])
                        return false;
                return true;
            }

            template <typename F_>
            auto for_each(F_ && f) const -> void
            {
                for (std::size_t i = 0 ; i < _words.size() ; ++i) {
                    auto w = _words[i];
                    while (w) {
                        f(i * bits_per_word + std::countr_zero(w));
                        w &= w - 1;
                    }
                }
            }

            auto to_vector() const -> std::vector<std::uint32_t>
            {
                std::vector<std::uint32_t> result;
                for_each([&] (std::size_t i) { result.push_back(static_cast<std::uint32_t>(i)); });
                return result;
            }

            auto operator== (const NodeBitset &) const -> bool = default;
    };
}

#endif
