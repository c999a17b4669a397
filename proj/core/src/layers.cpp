#include "crossway/layers.hpp"

#include <cstddef>

namespace crossway {

void conv_forward(const ConvShape& s, const double* in, const double* w,
                  const double* b, double* out) {
  int oh = s.out_h(), ow = s.out_w();
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      double* cell = out + (oy * ow + ox) * s.filters;
      for (int f = 0; f < s.filters; ++f) cell[f] = b[f];
      for (int ky = 0; ky < s.kernel; ++ky) {
        for (int kx = 0; kx < s.kernel; ++kx) {
          const double* px =
              in + ((oy * s.stride + ky) * s.in_w + (ox * s.stride + kx)) * s.in_c;
          const double* wk = w + (ky * s.kernel + kx) * s.in_c * s.filters;
          for (int c = 0; c < s.in_c; ++c) {
            double x = px[c];
            if (x == 0.0) continue;  // grids are sparse
            const double* wc = wk + c * s.filters;
            for (int f = 0; f < s.filters; ++f) cell[f] += x * wc[f];
          }
        }
      }
    }
  }
}

void conv_backward(const ConvShape& s, const double* in, const double* w,
                   const double* dout, double* din, double* dw, double* db) {
  int oh = s.out_h(), ow = s.out_w();
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      const double* dcell = dout + (oy * ow + ox) * s.filters;
      for (int f = 0; f < s.filters; ++f) db[f] += dcell[f];
      for (int ky = 0; ky < s.kernel; ++ky) {
        for (int kx = 0; kx < s.kernel; ++kx) {
          int pixel = (oy * s.stride + ky) * s.in_w + (ox * s.stride + kx);
          const double* px = in + pixel * s.in_c;
          const double* wk = w + (ky * s.kernel + kx) * s.in_c * s.filters;
          double* dwk = dw + (ky * s.kernel + kx) * s.in_c * s.filters;
          for (int c = 0; c < s.in_c; ++c) {
            const double* wc = wk + c * s.filters;
            double* dwc = dwk + c * s.filters;
            double x = px[c];
            double acc = 0.0;
            for (int f = 0; f < s.filters; ++f) {
              double g = dcell[f];
              dwc[f] += x * g;
              acc += wc[f] * g;
            }
            if (din != nullptr) din[pixel * s.in_c + c] += acc;
          }
        }
      }
    }
  }
}

void dense_forward(int in_n, int out_n, const double* in, const double* w,
                   const double* b, double* out) {
  for (int o = 0; o < out_n; ++o) {
    const double* row = w + static_cast<std::size_t>(o) * in_n;
    double acc = b[o];
    for (int i = 0; i < in_n; ++i) acc += row[i] * in[i];
    out[o] = acc;
  }
}

void dense_backward(int in_n, int out_n, const double* in, const double* w,
                    const double* dout, double* din, double* dw, double* db) {
  for (int o = 0; o < out_n; ++o) {
    double g = dout[o];
    db[o] += g;
    const double* row = w + static_cast<std::size_t>(o) * in_n;
    double* drow = dw + static_cast<std::size_t>(o) * in_n;
    if (g == 0.0) continue;
    for (int i = 0; i < in_n; ++i) {
      drow[i] += g * in[i];
      if (din != nullptr) din[i] += g * row[i];
    }
  }
}

void leaky_relu_forward(int n, double alpha, const double* in, double* out) {
  for (int i = 0; i < n; ++i) out[i] = leaky_relu(in[i], alpha);
}

void leaky_relu_backward(int n, double alpha, const double* pre,
                         const double* dout, double* din) {
  for (int i = 0; i < n; ++i) din[i] += dout[i] * leaky_relu_grad(pre[i], alpha);
}

}  // namespace crossway
