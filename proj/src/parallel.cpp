#include "knn_morse/parallel.hpp"

#include <cstdlib>
#include <string>

namespace knn_morse
{

std::size_t worker_count()
{
    std::size_t n = 0;
    if (const char* env = std::getenv("KNN_MORSE_THREADS"))
    {
        try
        {
            n = static_cast<std::size_t>(std::stoul(env));
        }
        catch (...)
        {
            n = 0;
        }
    }
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

}  // namespace knn_morse
