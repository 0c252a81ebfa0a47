// Internal helpers for subset enumeration.

#ifndef KNN_MORSE_SRC_COMBINATIONS_HPP
#define KNN_MORSE_SRC_COMBINATIONS_HPP

#include <array>
#include <span>
#include <vector>

namespace knn_morse
{

inline double binomial_double(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

/// Calls fn(span of m increasing indices in [0, n)) for every m-subset, in
/// lexicographic order.
template <typename Fn>
void for_each_combination(int n, int m, Fn&& fn)
{
    if (m < 0 || m > n)
        return;
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        idx[static_cast<std::size_t>(i)] = i;
    while (true)
    {
        fn(std::span<const int>(idx));
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i)
            --i;
        if (i < 0)
            return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace knn_morse

#endif
