#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fsos/group.hpp"

namespace fsos::detail {

// Mixed-radix DFT engine. Lengths whose prime factors are all <= 43 run
// through recursive Cooley-Tukey; anything with a larger prime factor goes
// through Bluestein's chirp transform on a power-of-two length. Kernel sign
// is exp(-2*pi*i/n) for forward and exp(+2*pi*i/n) for inverse; no
// normalization is applied here.
class Dft {
 public:
  explicit Dft(index_t n, bool inverse) : n_(n), inverse_(inverse) {
    index_t m = n;
    for (index_t p = 2; p * p <= m;) {
      if (m % p == 0) {
        factors_.push_back(p);
        while (m % p == 0) m /= p;
      } else {
        ++p;
      }
    }
    if (m > 1) factors_.push_back(m);
    smooth_ = factors_.empty() || factors_.back() <= 43;
    if (smooth_) {
      roots_.resize(static_cast<std::size_t>(n_));
      const double sign = inverse_ ? 2.0 * kPi : -2.0 * kPi;
      for (index_t k = 0; k < n_; ++k) {
        double a = sign * static_cast<double>(k) / static_cast<double>(n_);
        roots_[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
      }
      scratch_.resize(static_cast<std::size_t>(n_));
    } else {
      init_bluestein();
    }
  }

  index_t length() const { return n_; }

  void run(cplx* a) {
    if (n_ == 1) return;
    if (smooth_)
      recurse(a, scratch_.data(), n_, 1);
    else
      bluestein(a);
  }

 private:
  // Smallest prime factor of a smooth length.
  index_t split_radix(index_t n) const {
    for (index_t p : factors_)
      if (n % p == 0) return p;
    return n;
  }

  // In-place on `a` (length n), using `tmp` of the same length as scratch.
  // root_step = n_top / n, so roots_[k * root_step] = w_n^k.
  void recurse(cplx* a, cplx* tmp, index_t n, index_t root_step) {
    if (n == 1) return;
    index_t p = split_radix(n);
    if (p == n) {
      // Naive kernel for a single small prime length.
      for (index_t k = 0; k < n; ++k) {
        cplx acc = 0;
        for (index_t j = 0; j < n; ++j)
          acc += a[j] * roots_[static_cast<std::size_t>((k * j % n) * root_step)];
        tmp[k] = acc;
      }
      std::copy(tmp, tmp + n, a);
      return;
    }
    index_t m = n / p;
    // Decimate in time: tmp[j*m + t] = a[t*p + j].
    for (index_t t = 0; t < m; ++t)
      for (index_t j = 0; j < p; ++j) tmp[j * m + t] = a[t * p + j];
    for (index_t j = 0; j < p; ++j)
      recurse(tmp + j * m, a + j * m, m, root_step * p);
    // Combine: A[q + s*m] = sum_j w_n^{j(q+s*m)} B_j[q].
    for (index_t q = 0; q < m; ++q) {
      for (index_t s = 0; s < p; ++s) {
        index_t out = q + s * m;
        cplx acc = 0;
        for (index_t j = 0; j < p; ++j) {
          index_t e = (j * out) % n;
          acc += tmp[j * m + q] * roots_[static_cast<std::size_t>(e * root_step)];
        }
        a[out] = acc;
      }
    }
  }

  void init_bluestein() {
    blue_len_ = 1;
    while (blue_len_ < 2 * n_ - 1) blue_len_ <<= 1;
    chirp_.resize(static_cast<std::size_t>(n_));
    const double sign = inverse_ ? kPi : -kPi;
    for (index_t k = 0; k < n_; ++k) {
      // k^2 mod 2n keeps the phase argument small and exact in int64.
      index_t e = (k * k) % (2 * n_);
      double a = sign * static_cast<double>(e) / static_cast<double>(n_);
      chirp_[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
    }
    // Kernel v_t = conj(chirp(|t|)) wrapped onto the convolution length,
    // pre-transformed once.
    kernel_fft_.assign(static_cast<std::size_t>(blue_len_), cplx(0, 0));
    for (index_t k = 0; k < n_; ++k) {
      cplx v = std::conj(chirp_[static_cast<std::size_t>(k)]);
      kernel_fft_[static_cast<std::size_t>(k)] = v;
      if (k > 0) kernel_fft_[static_cast<std::size_t>(blue_len_ - k)] = v;
    }
    pow2_fft(kernel_fft_.data(), blue_len_, false);
    work_.resize(static_cast<std::size_t>(blue_len_));
  }

  void bluestein(cplx* a) {
    std::fill(work_.begin(), work_.end(), cplx(0, 0));
    for (index_t k = 0; k < n_; ++k)
      work_[static_cast<std::size_t>(k)] = a[k] * chirp_[static_cast<std::size_t>(k)];
    pow2_fft(work_.data(), blue_len_, false);
    for (index_t k = 0; k < blue_len_; ++k)
      work_[static_cast<std::size_t>(k)] *= kernel_fft_[static_cast<std::size_t>(k)];
    pow2_fft(work_.data(), blue_len_, true);
    const double inv = 1.0 / static_cast<double>(blue_len_);
    for (index_t k = 0; k < n_; ++k)
      a[k] = work_[static_cast<std::size_t>(k)] * inv * chirp_[static_cast<std::size_t>(k)];
  }

  // Plain iterative radix-2, used only inside Bluestein.
  static void pow2_fft(cplx* a, index_t n, bool inverse) {
    for (index_t i = 1, j = 0; i < n; ++i) {
      index_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (index_t len = 2; len <= n; len <<= 1) {
      double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
      cplx wl(std::cos(ang), std::sin(ang));
      for (index_t i = 0; i < n; i += len) {
        cplx w(1, 0);
        for (index_t j = 0; j < len / 2; ++j) {
          cplx u = a[i + j], v = a[i + j + len / 2] * w;
          a[i + j] = u + v;
          a[i + j + len / 2] = u - v;
          w *= wl;
        }
      }
    }
  }

  index_t n_;
  bool inverse_;
  bool smooth_ = true;
  std::vector<index_t> factors_;
  std::vector<cplx> roots_;
  std::vector<cplx> scratch_;
  // Bluestein state
  index_t blue_len_ = 0;
  std::vector<cplx> chirp_;
  std::vector<cplx> kernel_fft_;
  std::vector<cplx> work_;
};

/// Multidimensional DFT over Z_{n_1} x ... x Z_{n_k}, axis by axis.
/// `inverse=false` applies the exp(-2 pi i) kernel (analysis direction),
/// `inverse=true` the exp(+2 pi i) kernel (synthesis). No normalization.
inline void multidim_dft(const GroupSpec& spec, std::vector<cplx>& data, bool inverse) {
  if (data.size() != static_cast<std::size_t>(spec.order()))
    throw ArgumentError("multidim_dft: data length does not match group order");
  index_t stride = 1;
  for (std::size_t axis = 0; axis < spec.factors(); ++axis) {
    index_t n = spec.orders()[axis];
    Dft plan(n, inverse);
    index_t block = stride * n;
    index_t nblocks = spec.order() / block;
    std::vector<cplx> line(static_cast<std::size_t>(n));
    for (index_t b = 0; b < nblocks; ++b) {
      for (index_t off = 0; off < stride; ++off) {
        cplx* base = data.data() + b * block + off;
        if (stride == 1) {
          plan.run(base);
        } else {
          for (index_t t = 0; t < n; ++t) line[static_cast<std::size_t>(t)] = base[t * stride];
          plan.run(line.data());
          for (index_t t = 0; t < n; ++t) base[t * stride] = line[static_cast<std::size_t>(t)];
        }
      }
    }
    stride *= n;
  }
}

}  // namespace fsos::detail
