#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>

namespace shocktrack {

// Fixed-capacity inline vector. Conservation-law states here have at most
// three components (scalar, shallow water, Euler), so N=3 covers the library
// and keeps states on the stack in the hot loss loops.
template <class T, std::size_t N>
class SmallVec {
 public:
  SmallVec() = default;
  explicit SmallVec(std::size_t n) : n_(n) { assert(n <= N); }
  SmallVec(std::initializer_list<T> xs) : n_(xs.size()) {
    assert(xs.size() <= N);
    std::size_t i = 0;
    for (const T& x : xs) v_[i++] = x;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  T& operator[](std::size_t i) {
    assert(i < n_);
    return v_[i];
  }
  const T& operator[](std::size_t i) const {
    assert(i < n_);
    return v_[i];
  }

  void push_back(const T& x) {
    assert(n_ < N);
    v_[n_++] = x;
  }
  void resize(std::size_t n) {
    assert(n <= N);
    n_ = n;
  }

  T* begin() { return v_.data(); }
  T* end() { return v_.data() + n_; }
  const T* begin() const { return v_.data(); }
  const T* end() const { return v_.data() + n_; }

  friend bool operator==(const SmallVec& a, const SmallVec& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.n_; ++i)
      if (!(a.v_[i] == b.v_[i])) return false;
    return true;
  }

 private:
  std::array<T, N> v_{};
  std::size_t n_ = 0;
};

// Physical state vector, up to three conserved components.
using StateVec = SmallVec<double, 3>;

}  // namespace shocktrack
