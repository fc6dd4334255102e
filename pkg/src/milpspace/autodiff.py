"""Minimal dense-matrix reverse-mode automatic differentiation.

Everything is a 2D float64 array wrapped in a Tensor.  Operations record
onto the thread-local active Tape (entered via ``with Tape() as tape:``)
whenever any input requires gradients; ``tape.gradients(loss, params)``
replays the tape backwards and returns one gradient per parameter, zeros
for parameters the loss never touched.

The primitive set is exactly what the two encoder architectures and the
link-prediction loss need: matmul, add (with row-broadcast bias), mul
(with column/scalar broadcast), relu, leaky_relu, tanh, sigmoid,
concat_cols, gather_rows, segment_sum, segment_softmax, pair_dot,
mean_all, bce_with_logits.
"""

from __future__ import annotations

import threading
from typing import Callable, Sequence

import numpy as np

_TLS = threading.local()


def _active_tape() -> "Tape | None":
    return getattr(_TLS, "tape", None)


class Tensor:
    """A 2D float64 array plus gradient bookkeeping."""

    __slots__ = ("data", "requires_grad")

    def __init__(self, data, requires_grad: bool = False):
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"tensors are 2D, got shape {arr.shape}")
        self.data = arr
        self.requires_grad = requires_grad

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def item(self) -> float:
        if self.data.shape != (1, 1):
            raise ValueError(f"item() needs a (1, 1) tensor, got {self.shape}")
        return float(self.data[0, 0])

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"


def tensor(data, requires_grad: bool = False) -> Tensor:
    return Tensor(data, requires_grad)


def column(values) -> Tensor:
    """Convenience constant: 1D values as an (n, 1) column."""
    return Tensor(np.asarray(values, dtype=np.float64).reshape(-1, 1))


class _Node:
    __slots__ = ("out", "grad_fns")

    def __init__(self, out: Tensor, grad_fns):
        self.out = out
        # grad_fns: list of (input tensor, fn(out_grad) -> input grad)
        self.grad_fns = grad_fns


class Tape:
    """Ordered operation record for one forward pass (single-threaded)."""

    def __init__(self):
        self._nodes: list[_Node] = []

    def __enter__(self) -> "Tape":
        if _active_tape() is not None:
            raise RuntimeError("a tape is already active on this thread")
        _TLS.tape = self
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        _TLS.tape = None

    def _record(self, out: Tensor, grad_fns) -> None:
        out.requires_grad = True
        self._nodes.append(_Node(out, grad_fns))

    def gradients(self, loss: Tensor, params: Sequence[Tensor]) -> list[np.ndarray]:
        """Backward pass: one gradient array per parameter (zeros when the
        parameter is unreachable from the loss)."""
        if loss.shape != (1, 1):
            raise ValueError(f"loss must be a (1, 1) scalar, got {loss.shape}")
        grads: dict[int, np.ndarray] = {id(loss): np.ones((1, 1))}
        for node in reversed(self._nodes):
            out_grad = grads.pop(id(node.out), None)
            if out_grad is None:
                continue
            for inp, fn in node.grad_fns:
                g = fn(out_grad)
                key = id(inp)
                if key in grads:
                    grads[key] = grads[key] + g
                else:
                    grads[key] = g
        return [
            grads.get(id(p), np.zeros_like(p.data)) for p in params
        ]


def _unary(x: Tensor, out_data: np.ndarray, grad_fn) -> Tensor:
    out = Tensor(out_data)
    tape = _active_tape()
    if tape is not None and x.requires_grad:
        tape._record(out, [(x, grad_fn)])
    return out


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul shape mismatch {a.shape} @ {b.shape}")
    out = Tensor(a.data @ b.data)
    tape = _active_tape()
    if tape is not None and (a.requires_grad or b.requires_grad):
        grad_fns = []
        if a.requires_grad:
            grad_fns.append((a, lambda g, bd=b.data: g @ bd.T))
        if b.requires_grad:
            grad_fns.append((b, lambda g, ad=a.data: ad.T @ g))
        tape._record(out, grad_fns)
    return out


def add(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise add; b may also be a (1, cols) row bias."""
    if b.shape != a.shape and not (b.shape == (1, a.shape[1])):
        raise ValueError(f"add shape mismatch {a.shape} + {b.shape}")
    out = Tensor(a.data + b.data)
    tape = _active_tape()
    if tape is not None and (a.requires_grad or b.requires_grad):
        grad_fns = []
        if a.requires_grad:
            grad_fns.append((a, lambda g: g))
        if b.requires_grad:
            if b.shape == a.shape:
                grad_fns.append((b, lambda g: g))
            else:
                grad_fns.append((b, lambda g: g.sum(axis=0, keepdims=True)))
        tape._record(out, grad_fns)
    return out


def mul(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise multiply; b may be (rows, 1) to scale rows or (1, 1)
    to scale everything."""
    if b.shape != a.shape and b.shape not in ((a.shape[0], 1), (1, 1)):
        raise ValueError(f"mul shape mismatch {a.shape} * {b.shape}")
    out = Tensor(a.data * b.data)
    tape = _active_tape()
    if tape is not None and (a.requires_grad or b.requires_grad):
        grad_fns = []
        if a.requires_grad:
            grad_fns.append((a, lambda g, bd=b.data: g * bd))
        if b.requires_grad:
            if b.shape == a.shape:
                grad_fns.append((b, lambda g, ad=a.data: g * ad))
            elif b.shape == (a.shape[0], 1):
                grad_fns.append(
                    (b, lambda g, ad=a.data: (g * ad).sum(axis=1, keepdims=True))
                )
            else:
                grad_fns.append(
                    (b, lambda g, ad=a.data: np.array([[(g * ad).sum()]]))
                )
        tape._record(out, grad_fns)
    return out


def relu(x: Tensor) -> Tensor:
    mask = x.data > 0
    return _unary(x, np.where(mask, x.data, 0.0), lambda g, m=mask: g * m)


def leaky_relu(x: Tensor, slope: float = 0.2) -> Tensor:
    mask = x.data > 0
    out_data = np.where(mask, x.data, slope * x.data)
    return _unary(x, out_data, lambda g, m=mask: g * np.where(m, 1.0, slope))


def tanh(x: Tensor) -> Tensor:
    y = np.tanh(x.data)
    return _unary(x, y, lambda g, yd=y: g * (1.0 - yd * yd))


def sigmoid(x: Tensor) -> Tensor:
    y = _sigmoid_stable(x.data)
    return _unary(x, y, lambda g, yd=y: g * yd * (1.0 - yd))


def _sigmoid_stable(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def concat_cols(a: Tensor, b: Tensor) -> Tensor:
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"concat_cols row mismatch {a.shape} | {b.shape}")
    out = Tensor(np.hstack([a.data, b.data]))
    tape = _active_tape()
    if tape is not None and (a.requires_grad or b.requires_grad):
        na = a.shape[1]
        grad_fns = []
        if a.requires_grad:
            grad_fns.append((a, lambda g: g[:, :na]))
        if b.requires_grad:
            grad_fns.append((b, lambda g: g[:, na:]))
        tape._record(out, grad_fns)
    return out


def gather_rows(x: Tensor, indices: np.ndarray) -> Tensor:
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1:
        raise ValueError("gather_rows indices must be 1D")
    if len(idx) and (idx.min() < 0 or idx.max() >= x.shape[0]):
        raise IndexError("gather_rows index out of range")

    def backward(g, shape=x.shape, idx=idx):
        gx = np.zeros(shape)
        np.add.at(gx, idx, g)
        return gx

    return _unary(x, x.data[idx], backward)


def segment_sum(x: Tensor, segment_ids: np.ndarray, n_segments: int) -> Tensor:
    """Scatter-add rows of x into n_segments buckets by target index."""
    seg = np.asarray(segment_ids, dtype=np.int64)
    if len(seg) != x.shape[0]:
        raise ValueError("segment_ids length must match rows")
    out_data = np.zeros((n_segments, x.shape[1]))
    np.add.at(out_data, seg, x.data)
    return _unary(x, out_data, lambda g, seg=seg: g[seg])


def segment_softmax(logits: Tensor, segment_ids: np.ndarray, n_segments: int) -> Tensor:
    """Softmax over rows sharing a segment id (per column, numerically
    stable).  Rows of the result sum to 1 within each segment."""
    seg = np.asarray(segment_ids, dtype=np.int64)
    if len(seg) != logits.shape[0]:
        raise ValueError("segment_ids length must match rows")
    z = logits.data
    seg_max = np.full((n_segments, z.shape[1]), -np.inf)
    np.maximum.at(seg_max, seg, z)
    e = np.exp(z - seg_max[seg])
    denom = np.zeros((n_segments, z.shape[1]))
    np.add.at(denom, seg, e)
    y = e / denom[seg]

    def backward(g, y=y, seg=seg, n=n_segments):
        # d softmax: y * (g - sum_within_segment(g * y))
        t = g * y
        s = np.zeros((n, g.shape[1]))
        np.add.at(s, seg, t)
        return y * (g - s[seg])

    return _unary(logits, y, backward)


def pair_dot(a: Tensor, b: Tensor) -> Tensor:
    """Row-wise dot product -> (rows, 1)."""
    if a.shape != b.shape:
        raise ValueError(f"pair_dot shape mismatch {a.shape} . {b.shape}")
    out = Tensor((a.data * b.data).sum(axis=1, keepdims=True))
    tape = _active_tape()
    if tape is not None and (a.requires_grad or b.requires_grad):
        grad_fns = []
        if a.requires_grad:
            grad_fns.append((a, lambda g, bd=b.data: g * bd))
        if b.requires_grad:
            grad_fns.append((b, lambda g, ad=a.data: g * ad))
        tape._record(out, grad_fns)
    return out


def mean_all(x: Tensor) -> Tensor:
    size = x.data.size
    if size == 0:
        raise ValueError("mean of an empty tensor")
    out_data = np.array([[x.data.mean()]])
    return _unary(
        x, out_data, lambda g, shape=x.shape, n=size: np.full(shape, g[0, 0] / n)
    )


def bce_with_logits(logits: Tensor, labels: Tensor) -> Tensor:
    """Mean binary cross-entropy straight from logits, in the stable form
    max(z, 0) - z*y + log(1 + exp(-|z|)).  Labels are constants."""
    if logits.shape != labels.shape:
        raise ValueError(f"logits {logits.shape} vs labels {labels.shape}")
    n = logits.data.size
    if n == 0:
        raise ValueError("empty logits")
    z = logits.data
    y = labels.data
    per = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    out = Tensor(np.array([[per.mean()]]))
    tape = _active_tape()
    if tape is not None and logits.requires_grad:
        tape._record(
            out,
            [(logits, lambda g, z=z, y=y, n=n: g[0, 0] * (_sigmoid_stable(z) - y) / n)],
        )
    return out


def finite_difference_check(
    f: Callable[[], Tensor],
    params: Sequence[Tensor],
    epsilon: float = 1e-5,
) -> float:
    """Max relative error between reverse-mode and central-difference
    gradients over every entry of every parameter.

    ``f`` must rebuild the forward pass from the current parameter values
    and return the scalar loss tensor.  Calls outside a tape are pure
    numpy, so the finite-difference probes do not record anything.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    with Tape() as tape:
        loss = f()
    g_ad = tape.gradients(loss, params)

    worst = 0.0
    for p, ga in zip(params, g_ad):
        flat = p.data.reshape(-1)
        gflat = ga.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            up = f().item()
            flat[i] = orig - epsilon
            down = f().item()
            flat[i] = orig
            if not (np.isfinite(up) and np.isfinite(down)):
                raise FloatingPointError("non-finite function value during check")
            g_fd = (up - down) / (2.0 * epsilon)
            err = abs(gflat[i] - g_fd) / max(1.0, abs(gflat[i]), abs(g_fd))
            worst = max(worst, err)
    return worst
