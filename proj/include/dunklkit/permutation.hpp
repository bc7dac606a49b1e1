#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dunklkit {

// Permutation of {0, ..., n-1}, stored as the image table: w maps i to
// images[i]. Acting on a point, (wX)_i = X_{w(i)}; acting on a function,
// (w.p)(X) = p(w^{-1} X), so w.x_i = x_{w^{-1}(i)}.
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int n);
    // Transposition swapping i and j (0-based).
    static Permutation transposition(int n, int i, int j);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[i]; }
    const std::vector<int>& images() const { return images_; }

    bool is_identity() const;
    Permutation inverse() const;
    // (a * b)(i) = a(b(i)). With the point action above this composes as
    // b.apply(a.apply(x)) == (a * b).apply(x).
    Permutation operator*(const Permutation& o) const;
    bool operator==(const Permutation& o) const { return images_ == o.images_; }

    // (-1)^(number of transpositions), computed from the cycle type.
    int sign() const;

    template <typename T>
    std::vector<T> apply(const std::vector<T>& x) const {
        if (static_cast<int>(x.size()) != size()) throw std::invalid_argument("permutation size mismatch");
        std::vector<T> y(x.size());
        for (int i = 0; i < size(); ++i) y[i] = x[images_[i]];
        return y;
    }

  private:
    std::vector<int> images_;
};

// All n! elements of S_n in lexicographic order of their image tables.
std::vector<Permutation> symmetric_group(int n);

}  // namespace dunklkit
