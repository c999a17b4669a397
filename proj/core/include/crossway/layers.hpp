#pragma once

namespace crossway {

// Building blocks shared by the convolutional Q-network and the small dense
// test networks. All arrays are dense doubles; callers own the buffers.
//
// Feature maps are row-major with the channel as the fastest axis:
// in[(y * in_w + x) * in_c + c]. Convolution weights follow the same idea,
// kernel position outermost, output filter innermost:
// w[((ky * kernel + kx) * in_c + c) * filters + f].
// Dense weights are row-major per output: w[o * in_n + i].

struct ConvShape {
  int in_h = 0;
  int in_w = 0;
  int in_c = 0;
  int kernel = 0;
  int stride = 1;
  int filters = 0;

  // Valid (no-padding) convolution output sizes.
  constexpr int out_h() const { return (in_h - kernel) / stride + 1; }
  constexpr int out_w() const { return (in_w - kernel) / stride + 1; }
  constexpr int in_count() const { return in_h * in_w * in_c; }
  constexpr int out_count() const { return out_h() * out_w() * filters; }
  constexpr int weight_count() const { return kernel * kernel * in_c * filters; }
};

void conv_forward(const ConvShape& s, const double* in, const double* w,
                  const double* b, double* out);

/// Accumulates into dw and db; writes din when non-null (din must be zeroed
/// or accumulation-ready by the caller; values are added).
void conv_backward(const ConvShape& s, const double* in, const double* w,
                   const double* dout, double* din, double* dw, double* db);

void dense_forward(int in_n, int out_n, const double* in, const double* w,
                   const double* b, double* out);

void dense_backward(int in_n, int out_n, const double* in, const double* w,
                    const double* dout, double* din, double* dw, double* db);

/// x for x >= 0, alpha * x below. Zero takes the positive branch.
inline double leaky_relu(double x, double alpha) {
  return x >= 0.0 ? x : alpha * x;
}

/// Derivative with respect to the preactivation.
inline double leaky_relu_grad(double x, double alpha) {
  return x >= 0.0 ? 1.0 : alpha;
}

void leaky_relu_forward(int n, double alpha, const double* in, double* out);

/// din[i] += dout[i] * d/dx leaky(pre[i]).
void leaky_relu_backward(int n, double alpha, const double* pre,
                         const double* dout, double* din);

}  // namespace crossway
