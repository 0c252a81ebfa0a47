// Quadtree refinement of the sampled grid at one level r.
//
// Base grid nodes are the GridField samples. A base cell is subdivided
// (recursively, down to s_min) when the sub-level boundary can cross it and
// either two or more circles {|x - p| = r} pass through it, or a critical
// point with level within four cell sizes of r sits in or next to it. Leaves
// are 2-cells whose boundary runs through every node lying on their sides
// (hanging nodes from finer neighbours included), so the covered nodes,
// covered edges and fully covered leaves form a planar cell complex.
//
// Components of the complement are found by joining the uncovered nodes of
// each face; those touching the border are unbounded. A component (hole)
// counts only if its deepest sample is more than tau from r: every real
// component contains a local minimum and every real hole a local maximum of
// d^(k), both critical, hence at least delta = dist(r, critical levels)
// away. Isolated sampling artifacts are at most ~1.4 s_min deep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "knn_morse/cubical.hpp"
#include "knn_morse/knn.hpp"
#include "point_grid.hpp"

namespace knn_morse
{

namespace
{

struct Forest
{
    std::vector<int> parent;

    explicit Forest(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x)
    {
        while (parent[static_cast<std::size_t>(x)] != x)
        {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }

    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (a < b)
            std::swap(a, b);
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

struct Leaf
{
    std::int64_t x, y, size;  // fine-lattice units
};

class Builder
{
public:
    Builder(const PointCloud& cloud, const GridField& field, double r, std::span<const CriticalPoint> crits)
        : cloud_(cloud), f_(field), r_(r), n_(field.resolution), grid_(cloud, std::max(r, 1e-3 * cloud.scale()))
    {
        hx_ = field.cell_width();
        hy_ = field.cell_height();
        x0_ = field.x_at(0);
        y0_ = field.y_at(0);
        const double h = std::max(hx_, hy_);

        double delta = std::numeric_limits<double>::infinity();
        for (const auto& c : crits)
            delta = std::min(delta, std::abs(c.radius - r));
        if (!std::isfinite(delta))
            delta = h;
        delta = std::max(delta, 1e-12 * cloud.scale());
        tau_ = 0.5 * delta;
        s_min_ = delta / 8.0;

        // Fine lattice: 2^depth subdivisions per base cell, coordinates below 2^31.
        depth_ = 0;
        const int max_depth = 30 - static_cast<int>(std::ceil(std::log2(static_cast<double>(n_))));
        while (depth_ < max_depth && h / std::ldexp(1.0, depth_) > s_min_)
            ++depth_;
        m_ = std::int64_t{1} << depth_;

        for (const auto& c : crits)
            if (std::abs(c.radius - r) < 4.0 * h)
                near_.push_back(&c);
    }

    RefinedBetti run();

private:
    double wx(std::int64_t X) const { return x0_ + static_cast<double>(X) * hx_ / static_cast<double>(m_); }
    double wy(std::int64_t Y) const { return y0_ + static_cast<double>(Y) * hy_ / static_cast<double>(m_); }

    bool needs_refinement(std::int64_t X, std::int64_t Y, std::int64_t size) const;
    void subdivide(std::int64_t X, std::int64_t Y, std::int64_t size, std::vector<Leaf>& out) const;

    int node(std::int64_t X, std::int64_t Y);
    static std::uint64_t key(std::int64_t X, std::int64_t Y)
    {
        return (static_cast<std::uint64_t>(X) << 31) | static_cast<std::uint64_t>(Y);
    }
    bool on_border(std::int64_t X, std::int64_t Y) const
    {
        const std::int64_t last = static_cast<std::int64_t>(n_ - 1) * m_;
        return X == 0 || Y == 0 || X == last || Y == last;
    }
    void index_leaf(const Leaf& l);
    // Nodes on the boundary of the square [X, X+size] x [Y, Y+size],
    // counter-clockwise from the lower-left corner, each once.
    void cycle(std::int64_t X, std::int64_t Y, std::int64_t size, std::vector<int>& out);

    const PointCloud& cloud_;
    const GridField& f_;
    double r_;
    int n_;
    PointGrid grid_;
    double hx_ = 0, hy_ = 0, x0_ = 0, y0_ = 0;
    double tau_ = 0, s_min_ = 0;
    int depth_ = 0;
    std::int64_t m_ = 1;
    std::vector<const CriticalPoint*> near_;

    std::unordered_map<std::uint64_t, int> extra_;
    std::vector<double> values_;  // all nodes: base then extra
    std::unordered_map<std::int64_t, std::vector<std::int64_t>> rows_, cols_;
};

bool Builder::needs_refinement(std::int64_t X, std::int64_t Y, std::int64_t size) const
{
    if (size <= 1)
        return false;
    const double sx = static_cast<double>(size) * hx_ / static_cast<double>(m_);
    const double sy = static_cast<double>(size) * hy_ / static_cast<double>(m_);
    if (std::max(sx, sy) <= s_min_)
        return false;
    const double rho = 0.5 * std::hypot(sx, sy);
    Point c(2);
    c << wx(X) + 0.5 * sx, wy(Y) + 0.5 * sy;

    // Sample the extremum of every nearby critical point closely enough that
    // the depth filter keeps the component or hole it belongs to.
    const double s = std::max(sx, sy);
    for (const CriticalPoint* cp : near_)
        if (std::abs(cp->radius - r_) < 4.0 * s && std::abs(cp->center[0] - c[0]) <= sx &&
            std::abs(cp->center[1] - c[1]) <= sy)
            return true;

    const int k = f_.k;
    int sure = 0, near = 0;
    const double inner = r_ - rho;
    grid_.for_each_within(c, r_ + rho, [&](int, double d2) {
        if (inner >= 0.0 && d2 <= inner * inner)
            ++sure;
        else
            ++near;
    });
    if (sure >= k || sure + near < k)
        return false;  // entirely covered or entirely uncovered
    // Several circles, or one circle curved on the scale of the cell.
    return near >= 2 || rho > 0.125 * r_;
}

void Builder::subdivide(std::int64_t X, std::int64_t Y, std::int64_t size, std::vector<Leaf>& out) const
{
    if (!needs_refinement(X, Y, size))
    {
        out.push_back({X, Y, size});
        return;
    }
    const std::int64_t h = size / 2;
    subdivide(X, Y, h, out);
    subdivide(X + h, Y, h, out);
    subdivide(X, Y + h, h, out);
    subdivide(X + h, Y + h, h, out);
}

int Builder::node(std::int64_t X, std::int64_t Y)
{
    if (X % m_ == 0 && Y % m_ == 0)
        return static_cast<int>((Y / m_) * n_ + X / m_);
    const auto [it, inserted] = extra_.try_emplace(key(X, Y), static_cast<int>(values_.size()));
    if (inserted)
    {
        Point p(2);
        p << wx(X), wy(Y);
        values_.push_back(knn_value(cloud_, f_.k, p));
    }
    return it->second;
}

void Builder::index_leaf(const Leaf& l)
{
    const auto insert = [](std::vector<std::int64_t>& v, std::int64_t x) {
        const auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x)
            v.insert(it, x);
    };
    for (const auto& [X, Y] : {std::pair{l.x, l.y}, std::pair{l.x + l.size, l.y}, std::pair{l.x, l.y + l.size},
                               std::pair{l.x + l.size, l.y + l.size}})
    {
        node(X, Y);
        insert(rows_[Y], X);
        insert(cols_[X], Y);
    }
}

void Builder::cycle(std::int64_t X, std::int64_t Y, std::int64_t size, std::vector<int>& out)
{
    // Interior nodes of one side, strictly between a and b, in the direction a -> b.
    const auto between = [](const std::unordered_map<std::int64_t, std::vector<std::int64_t>>& index, std::int64_t line,
                            std::int64_t a, std::int64_t b, auto&& emit) {
        const auto found = index.find(line);
        if (found == index.end())
            return;
        const auto& v = found->second;
        auto lo = std::upper_bound(v.begin(), v.end(), std::min(a, b));
        auto hi = std::lower_bound(v.begin(), v.end(), std::max(a, b));
        if (a < b)
            for (auto it = lo; it < hi; ++it)
                emit(*it);
        else
            for (auto it = hi; it > lo; --it)
                emit(*(it - 1));
    };
    const std::int64_t X1 = X + size, Y1 = Y + size;
    out.push_back(node(X, Y));
    between(rows_, Y, X, X1, [&](std::int64_t x) { out.push_back(node(x, Y)); });
    out.push_back(node(X1, Y));
    between(cols_, X1, Y, Y1, [&](std::int64_t y) { out.push_back(node(X1, y)); });
    out.push_back(node(X1, Y1));
    between(rows_, Y1, X1, X, [&](std::int64_t x) { out.push_back(node(x, Y1)); });
    out.push_back(node(X, Y1));
    between(cols_, X, Y1, Y, [&](std::int64_t y) { out.push_back(node(X, y)); });
}

RefinedBetti Builder::run()
{
    const int n = n_;
    const auto cell = [n](int i, int j) { return static_cast<std::size_t>(j) * static_cast<std::size_t>(n - 1) + static_cast<std::size_t>(i); };
    const double rho_base = 0.5 * std::hypot(hx_, hy_);

    // Refine base cells.
    std::vector<unsigned char> refined(static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n - 1), 0);
    std::vector<std::pair<std::size_t, std::vector<Leaf>>> patches;
    std::unordered_map<std::size_t, std::size_t> patch_of;
    values_.assign(f_.values.begin(), f_.values.end());
    const auto is_refined = [&](int i, int j) {
        return i >= 0 && j >= 0 && i + 1 < n && j + 1 < n && refined[cell(i, j)];
    };
    const auto add_patch = [&](int i, int j, std::vector<Leaf> leaves) {
        refined[cell(i, j)] = 1;
        patch_of.emplace(cell(i, j), patches.size());
        for (const Leaf& l : leaves)
            index_leaf(l);
        patches.emplace_back(cell(i, j), std::move(leaves));
    };
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i)
        {
            const double a = f_.at(i, j), b = f_.at(i + 1, j), c = f_.at(i, j + 1), d = f_.at(i + 1, j + 1);
            const double lo = std::min({a, b, c, d}), hi = std::max({a, b, c, d});
            if (lo > r_ + rho_base || hi + rho_base <= r_)
                continue;
            const std::int64_t X = static_cast<std::int64_t>(i) * m_, Y = static_cast<std::int64_t>(j) * m_;
            if (!needs_refinement(X, Y, m_))
                continue;
            std::vector<Leaf> leaves;
            subdivide(X, Y, m_, leaves);
            add_patch(i, j, std::move(leaves));
        }

    // Split faces whose boundary cycle alternates between covered and
    // uncovered more than once; on such a face the sampled connectivity is a
    // guess (typically a coarse cell next to a finer one).
    const auto splittable = [&](std::int64_t size) {
        return size >= 2 && static_cast<double>(size) * std::max(hx_, hy_) / static_cast<double>(m_) > s_min_;
    };
    std::vector<int> cyc;
    const auto ambiguous = [&](std::int64_t X, std::int64_t Y, std::int64_t size) {
        cyc.clear();
        cycle(X, Y, size, cyc);
        int changes = 0;
        for (std::size_t t = 0; t < cyc.size(); ++t)
            changes += (values_[static_cast<std::size_t>(cyc[t])] <= r_) !=
                       (values_[static_cast<std::size_t>(cyc[(t + 1) % cyc.size()])] <= r_);
        return changes > 2;
    };
    std::vector<std::pair<int, int>> dirty;
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i)
            dirty.emplace_back(i, j);
    std::vector<unsigned char> mark(refined.size(), 0);
    while (!dirty.empty())
    {
        std::vector<std::pair<int, int>> split_cells;
        const auto split_base = [&](int i, int j) {
            std::vector<Leaf> leaves;
            const std::int64_t X = static_cast<std::int64_t>(i) * m_, Y = static_cast<std::int64_t>(j) * m_, h = m_ / 2;
            for (const auto& [dx, dy] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}})
                subdivide(X + dx * h, Y + dy * h, h, leaves);
            add_patch(i, j, std::move(leaves));
            split_cells.emplace_back(i, j);
        };
        for (const auto& [i, j] : dirty)
        {
            const std::int64_t X = static_cast<std::int64_t>(i) * m_, Y = static_cast<std::int64_t>(j) * m_;
            if (!refined[cell(i, j)])
            {
                const bool plain = !is_refined(i, j - 1) && !is_refined(i, j + 1) && !is_refined(i - 1, j) &&
                                   !is_refined(i + 1, j);
                if (plain)
                {
                    const bool a = f_.at(i, j) <= r_, b = f_.at(i + 1, j) <= r_, c = f_.at(i, j + 1) <= r_,
                               d = f_.at(i + 1, j + 1) <= r_;
                    if (a != b && a != c && a == d && b == c && splittable(m_))
                        split_base(i, j);
                    continue;
                }
                if (splittable(m_) && ambiguous(X, Y, m_))
                {
                    split_base(i, j);
                }
                continue;
            }
            auto& leaves = patches[patch_of.at(cell(i, j))].second;
            std::vector<Leaf> next;
            bool changed = false;
            for (const Leaf& l : leaves)
            {
                if (!splittable(l.size) || !ambiguous(l.x, l.y, l.size))
                {
                    next.push_back(l);
                    continue;
                }
                const std::int64_t h = l.size / 2;
                const std::size_t first = next.size();
                for (const auto& [dx, dy] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}})
                    subdivide(l.x + dx * h, l.y + dy * h, h, next);
                for (std::size_t t = first; t < next.size(); ++t)
                    index_leaf(next[t]);
                changed = true;
            }
            if (changed)
            {
                leaves = std::move(next);
                split_cells.emplace_back(i, j);
            }
        }
        dirty.clear();
        std::fill(mark.begin(), mark.end(), 0);
        for (const auto& [i, j] : split_cells)
            for (const auto& [di, dj] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}})
            {
                const int a = i + di, b = j + dj;
                if (a < 0 || b < 0 || a + 1 >= n || b + 1 >= n || mark[cell(a, b)])
                    continue;
                mark[cell(a, b)] = 1;
                dirty.emplace_back(a, b);
            }
    }

    const std::size_t total = values_.size();
    const int outside = static_cast<int>(total);
    std::vector<unsigned char> covered(total);
    for (std::size_t i = 0; i < total; ++i)
        covered[i] = values_[i] <= r_;
    Forest solid(total), gaps(total + 1);
    long long V = 0, E = 0, F = 0;
    for (std::size_t i = 0; i < total; ++i)
        V += covered[i];


    // Base edges not on the side of a refined cell.
    for (int j = 0; j < n; ++j)
        for (int i = 0; i + 1 < n; ++i)
        {
            const int a = j * n + i, b = a + 1;
            if (!covered[static_cast<std::size_t>(a)] || !covered[static_cast<std::size_t>(b)] ||
                is_refined(i, j - 1) || is_refined(i, j))
                continue;
            ++E;
            solid.unite(a, b);
        }
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i < n; ++i)
        {
            const int a = j * n + i, b = a + n;
            if (!covered[static_cast<std::size_t>(a)] || !covered[static_cast<std::size_t>(b)] ||
                is_refined(i - 1, j) || is_refined(i, j))
                continue;
            ++E;
            solid.unite(a, b);
        }

    // Edges along leaf sides.
    std::unordered_set<std::uint64_t> seen;
    const auto add_chain = [&](const std::vector<int>& ids) {
        for (std::size_t t = 0; t + 1 < ids.size(); ++t)
        {
            const int a = ids[t], b = ids[t + 1];
            if (!covered[static_cast<std::size_t>(a)] || !covered[static_cast<std::size_t>(b)])
                continue;
            const auto lo = static_cast<std::uint64_t>(std::min(a, b)), hi = static_cast<std::uint64_t>(std::max(a, b));
            if (!seen.insert((lo << 32) | hi).second)
                continue;
            ++E;
            solid.unite(a, b);
        }
    };
    std::vector<int> boundary;
    const auto add_face = [&](const std::vector<int>& ids) {
        bool full = true;
        int first_gap = -1;
        for (int id : ids)
            if (!covered[static_cast<std::size_t>(id)])
            {
                full = false;
                if (first_gap < 0)
                    first_gap = id;
                else
                    gaps.unite(first_gap, id);
            }
        F += full;
    };
    for (const auto& [unused, leaves] : patches)
        for (const Leaf& l : leaves)
        {
            boundary.clear();
            cycle(l.x, l.y, l.size, boundary);
            boundary.push_back(boundary.front());
            add_chain(boundary);
            boundary.pop_back();
            add_face(boundary);
        }

    // Unrefined base cells; sides shared with a refined cell carry its hanging nodes.
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i)
        {
            if (refined[cell(i, j)])
                continue;
            const int a = j * n + i;
            const std::int64_t X = static_cast<std::int64_t>(i) * m_, Y = static_cast<std::int64_t>(j) * m_;
            if (!is_refined(i, j - 1) && !is_refined(i, j + 1) && !is_refined(i - 1, j) && !is_refined(i + 1, j))
            {
                const int ids[4] = {a, a + 1, a + n, a + n + 1};
                bool full = true;
                int first_gap = -1;
                for (int id : ids)
                    if (!covered[static_cast<std::size_t>(id)])
                    {
                        full = false;
                        if (first_gap < 0)
                            first_gap = id;
                        else
                            gaps.unite(first_gap, id);
                    }
                F += full;
                continue;
            }
            boundary.clear();
            cycle(X, Y, m_, boundary);
            add_face(boundary);
        }

    // Unbounded complement.
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if ((i == 0 || j == 0 || i == n - 1 || j == n - 1) && !covered[static_cast<std::size_t>(j * n + i)])
                gaps.unite(j * n + i, outside);
    for (const auto& [k, id] : extra_)
    {
        const auto X = static_cast<std::int64_t>(k >> 31), Y = static_cast<std::int64_t>(k & ((1ULL << 31) - 1));
        if (on_border(X, Y) && !covered[static_cast<std::size_t>(id)])
            gaps.unite(id, outside);
    }

    // Count components and holes, raw and by depth.
    std::unordered_map<int, double> comp_min, hole_max;
    const int out_root = gaps.find(outside);
    for (std::size_t i = 0; i < total; ++i)
    {
        const int id = static_cast<int>(i);
        if (covered[i])
        {
            auto [it, inserted] = comp_min.try_emplace(solid.find(id), values_[i]);
            if (!inserted)
                it->second = std::min(it->second, values_[i]);
        }
        else
        {
            const int root = gaps.find(id);
            if (root == out_root)
                continue;
            auto [it, inserted] = hole_max.try_emplace(root, values_[i]);
            if (!inserted)
                it->second = std::max(it->second, values_[i]);
        }
    }
    RefinedBetti res;
    int b0 = 0, b1 = 0;
    for (const auto& [root, v] : comp_min)
        b0 += v <= r_ - tau_;
    for (const auto& [root, v] : hole_max)
        b1 += v > r_ + tau_;
    res.betti = BettiVector{{b0, b1}};
    res.raw = BettiVector{{static_cast<int>(comp_min.size()), static_cast<int>(hole_max.size())}};
    res.euler = V - E + F;
    res.refined_cells = patches.size();
    for (const auto& [unused, leaves] : patches)
        res.leaves += leaves.size();
    res.tau = tau_;
    return res;
}

}  // namespace

RefinedBetti betti_refined_detail(const PointCloud& cloud, const GridField& field, double r,
                                  std::span<const CriticalPoint> crits)
{
    if (cloud.dim() != 2)
        throw InvalidConfig("the grid oracle is planar (dim == 2)");
    Builder b(cloud, field, r, crits);
    return b.run();
}

BettiVector betti_refined(const PointCloud& cloud, const GridField& field, double r,
                          std::span<const CriticalPoint> crits)
{
    return betti_refined_detail(cloud, field, r, crits).betti;
}

}  // namespace knn_morse
