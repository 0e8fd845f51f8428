#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <orbipar/error.hpp>

namespace orbipar
{

using elem = std::size_t;

// Finite group on 0..order-1 with 0 the identity, given by its
// multiplication table (row a, column b holds a*b).
class finite_group
{
public:
    finite_group() : finite_group(std::vector<std::vector<elem>>{{0}}) {}

    explicit finite_group(std::vector<std::vector<elem>> table, std::string name = {})
        : table_(std::move(table)), name_(std::move(name))
    {
        validate();
    }

    static finite_group trivial()
    {
        return cyclic(1);
    }

    static finite_group cyclic(std::size_t n)
    {
        if (n == 0) {
            throw config_error("cyclic group order must be positive");
        }
        std::vector<std::vector<elem>> t(n, std::vector<elem>(n));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                t[a][b] = (a + b) % n;
            }
        }
        return finite_group(std::move(t), "Z/" + std::to_string(n));
    }

    // (a, b) is stored as a * |H| + b.
    static finite_group direct_product(const finite_group &g, const finite_group &h)
    {
        const auto m = h.order();
        const auto n = g.order() * m;
        std::vector<std::vector<elem>> t(n, std::vector<elem>(n));
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                t[x][y] = g.mul(x / m, y / m) * m + h.mul(x % m, y % m);
            }
        }
        return finite_group(std::move(t), g.name() + "x" + h.name());
    }

    // Dihedral group of order 2n; r^i f^j is stored as i + n*j, with
    // f r f = r^{-1}.
    static finite_group dihedral(std::size_t n)
    {
        if (n == 0) {
            throw config_error("dihedral parameter must be positive");
        }
        std::vector<std::vector<elem>> t(2 * n, std::vector<elem>(2 * n));
        for (std::size_t x = 0; x < 2 * n; ++x) {
            for (std::size_t y = 0; y < 2 * n; ++y) {
                const auto i1 = x % n, j1 = x / n, i2 = y % n, j2 = y / n;
                // r^i1 f^j1 r^i2 f^j2 = r^(i1 + (-1)^j1 i2) f^(j1+j2)
                const auto i = j1 ? (i1 + n - i2) % n : (i1 + i2) % n;
                t[x][y] = i + n * ((j1 + j2) % 2);
            }
        }
        return finite_group(std::move(t), "D" + std::to_string(n));
    }

    std::size_t order() const noexcept
    {
        return table_.size();
    }
    const std::string &name() const noexcept
    {
        return name_;
    }
    elem identity() const noexcept
    {
        return 0;
    }
    elem mul(elem a, elem b) const
    {
        return table_.at(a).at(b);
    }
    elem inv(elem a) const
    {
        return inv_.at(a);
    }
    elem pow(elem a, long long k) const
    {
        if (k < 0) {
            a = inv(a);
            k = -k;
        }
        elem r = 0;
        for (long long i = 0; i < k; ++i) {
            r = mul(r, a);
        }
        return r;
    }
    std::size_t element_order(elem a) const
    {
        std::size_t k = 1;
        for (elem x = a; x != 0; x = mul(x, a)) {
            ++k;
        }
        return k;
    }
    const std::vector<std::vector<elem>> &table() const noexcept
    {
        return table_;
    }

    // Elements of the subgroup generated by gens, sorted.
    std::vector<elem> generated(const std::vector<elem> &gens) const
    {
        std::vector<bool> in(order(), false);
        std::vector<elem> out{0}, queue{0};
        in[0] = true;
        while (!queue.empty()) {
            const auto x = queue.back();
            queue.pop_back();
            for (auto g : gens) {
                const auto y = mul(x, g);
                if (!in[y]) {
                    in[y] = true;
                    out.push_back(y);
                    queue.push_back(y);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Greedy generating set: repeatedly add the smallest missing element.
    std::vector<elem> generators() const
    {
        std::vector<elem> gens;
        auto sub = generated(gens);
        while (sub.size() < order()) {
            elem x = 0;
            while (std::binary_search(sub.begin(), sub.end(), x)) {
                ++x;
            }
            gens.push_back(x);
            sub = generated(gens);
        }
        return gens;
    }

    bool is_subgroup(const std::vector<elem> &elems) const
    {
        auto sorted = elems;
        std::sort(sorted.begin(), sorted.end());
        return !sorted.empty() && generated(sorted) == sorted;
    }

    friend bool operator==(const finite_group &a, const finite_group &b)
    {
        return a.table_ == b.table_;
    }

private:
    void validate()
    {
        const auto n = table_.size();
        if (n == 0) {
            throw config_error("group must have at least one element");
        }
        for (const auto &row : table_) {
            if (row.size() != n) {
                throw config_error("group table is not square");
            }
            for (auto x : row) {
                if (x >= n) {
                    throw config_error("group table entry out of range");
                }
            }
        }
        for (std::size_t a = 0; a < n; ++a) {
            if (table_[0][a] != a || table_[a][0] != a) {
                throw config_error("element 0 is not the identity");
            }
        }
        inv_.assign(n, n);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (table_[a][b] == 0) {
                    inv_[a] = b;
                    break;
                }
            }
            if (inv_[a] == n || table_[inv_[a]][a] != 0) {
                throw config_error("element " + std::to_string(a) + " has no two-sided inverse");
            }
        }
        auto assoc = [&](std::size_t a, std::size_t b, std::size_t c) {
            if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
                throw config_error("group table is not associative at (" + std::to_string(a) + ","
                                   + std::to_string(b) + "," + std::to_string(c) + ")");
            }
        };
        if (n <= 24) {
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    for (std::size_t c = 0; c < n; ++c) {
                        assoc(a, b, c);
                    }
                }
            }
        }
        else {
            std::mt19937_64 rng(n);
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (int i = 0; i < 20000; ++i) {
                assoc(pick(rng), pick(rng), pick(rng));
            }
        }
    }

    std::vector<std::vector<elem>> table_;
    std::vector<elem> inv_;
    std::string name_;
};

} // namespace orbipar
