#include "dunklkit/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace dunklkit {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 0 || v >= size() || seen[v]) throw std::invalid_argument("not a permutation");
        seen[v] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
}

Permutation Permutation::transposition(int n, int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw std::invalid_argument("bad transposition indices");
    Permutation w = identity(n);
    std::swap(w.images_[i], w.images_[j]);
    return w;
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (images_[i] != i) return false;
    return true;
}

Permutation Permutation::inverse() const {
    Permutation w;
    w.images_.resize(images_.size());
    for (int i = 0; i < size(); ++i) w.images_[images_[i]] = i;
    return w;
}

Permutation Permutation::operator*(const Permutation& o) const {
    if (size() != o.size()) throw std::invalid_argument("permutation size mismatch");
    Permutation w;
    w.images_.resize(images_.size());
    for (int i = 0; i < size(); ++i) w.images_[i] = images_[o.images_[i]];
    return w;
}

int Permutation::sign() const {
    std::vector<bool> seen(images_.size(), false);
    int cycles = 0;
    for (int i = 0; i < size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (int j = i; !seen[j]; j = images_[j]) seen[j] = true;
    }
    return ((size() - cycles) % 2 == 0) ? 1 : -1;
}

std::vector<Permutation> symmetric_group(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    std::vector<Permutation> group;
    do {
        group.push_back(Permutation(img));
    } while (std::next_permutation(img.begin(), img.end()));
    return group;
}

}  // namespace dunklkit
