#include "dessins/perm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dessins {

namespace {

void check_bijection(const std::vector<int>& images) {
    const int n = static_cast<int>(images.size());
    std::vector<char> seen(n, 0);
    for (int v : images) {
        if (v < 0 || v >= n || seen[v]) {
            throw std::invalid_argument("image array is not a bijection of {0,...,n-1}");
        }
        seen[v] = 1;
    }
}

}  // namespace

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    check_bijection(images_);
}

Permutation Permutation::identity(int n) {
    if (n < 0) throw std::invalid_argument("negative size");
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::from_cycle(int n, const std::vector<int>& cycle) {
    Permutation p = identity(n);
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k; ++i) {
        int from = cycle[i];
        int to = cycle[(i + 1) % k];
        if (from < 0 || from >= n) throw std::invalid_argument("cycle entry out of range");
        p.images_[from] = to;
    }
    check_bijection(p.images_);
    return p;
}

Permutation Permutation::from_image_csv(const std::string& csv) {
    std::vector<int> im;
    if (!csv.empty()) {
        std::stringstream ss(csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t used = 0;
            int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument("bad image entry: " + item);
            im.push_back(v);
        }
        if (!csv.empty() && csv.back() == ',') throw std::invalid_argument("trailing comma");
    }
    return Permutation(std::move(im));
}

Permutation Permutation::compose(const Permutation& rhs) const {
    if (size() != rhs.size()) throw std::invalid_argument("composing permutations of different sizes");
    std::vector<int> im(images_.size());
    for (int i = 0; i < size(); ++i) im[i] = images_[rhs.images_[i]];
    Permutation p;
    p.images_ = std::move(im);  // bijection by construction
    return p;
}

Permutation Permutation::inverse() const {
    std::vector<int> im(images_.size());
    for (int i = 0; i < size(); ++i) im[images_[i]] = i;
    Permutation p;
    p.images_ = std::move(im);
    return p;
}

std::vector<std::vector<int>> Permutation::orbits() const {
    std::vector<std::vector<int>> blocks;
    std::vector<char> seen(images_.size(), 0);
    for (int i = 0; i < size(); ++i) {
        if (seen[i]) continue;
        std::vector<int> block;
        for (int j = i; !seen[j]; j = images_[j]) {
            seen[j] = 1;
            block.push_back(j);
        }
        blocks.push_back(std::move(block));
    }
    return blocks;  // minimal element first, blocks ordered by minimal element
}

int Permutation::orbit_count() const {
    int count = 0;
    std::vector<char> seen(images_.size(), 0);
    for (int i = 0; i < size(); ++i) {
        if (seen[i]) continue;
        ++count;
        for (int j = i; !seen[j]; j = images_[j]) seen[j] = 1;
    }
    return count;
}

std::vector<int> Permutation::orbit_sizes_desc() const {
    std::vector<int> sizes;
    std::vector<char> seen(images_.size(), 0);
    for (int i = 0; i < size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = images_[j]) {
            seen[j] = 1;
            ++len;
        }
        sizes.push_back(len);
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

std::string Permutation::cycle_string() const {
    if (images_.empty()) return "()";
    std::string out;
    for (const auto& block : orbits()) {
        out += '(';
        for (size_t i = 0; i < block.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(block[i]);
        }
        out += ')';
    }
    return out;
}

std::string Permutation::image_csv() const {
    std::string out;
    for (size_t i = 0; i < images_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(images_[i]);
    }
    return out;
}

PermPair::PermPair(Permutation a, Permutation b)
    : alpha(std::move(a)), beta(std::move(b)) {
    if (alpha.size() != beta.size()) {
        throw std::invalid_argument("alpha and beta must act on the same edge set");
    }
}

std::vector<int> group_orbit(const PermPair& pair, int seed) {
    const int n = pair.degree();
    if (seed < 0 || seed >= n) throw std::out_of_range("seed edge out of range");
    std::vector<char> seen(n, 0);
    std::vector<int> queue{seed};
    seen[seed] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
        int e = queue[head];
        for (int img : {pair.alpha(e), pair.beta(e)}) {
            if (!seen[img]) {
                seen[img] = 1;
                queue.push_back(img);
            }
        }
    }
    std::sort(queue.begin(), queue.end());
    return queue;
}

bool is_irreducible(const PermPair& pair) {
    const int n = pair.degree();
    if (n == 0) return true;
    return static_cast<int>(group_orbit(pair, 0).size()) == n;
}

PermPair pair_product(const PermPair& lhs, const PermPair& rhs) {
    const int n1 = lhs.degree();
    const int n2 = rhs.degree();
    std::vector<int> a(static_cast<size_t>(n1) * n2);
    std::vector<int> b(static_cast<size_t>(n1) * n2);
    for (int e1 = 0; e1 < n1; ++e1) {
        for (int e2 = 0; e2 < n2; ++e2) {
            const int idx = e1 * n2 + e2;
            a[idx] = lhs.alpha(e1) * n2 + rhs.alpha(e2);
            b[idx] = lhs.beta(e1) * n2 + rhs.beta(e2);
        }
    }
    return PermPair(Permutation(std::move(a)), Permutation(std::move(b)));
}

}  // namespace dessins
