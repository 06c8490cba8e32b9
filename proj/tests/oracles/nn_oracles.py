"""Reference values for autodiff, Adam and Polyak tests (numpy only)."""
import numpy as np

# Two-layer MLP with fixed weights, weights stored [in, out].
W0 = np.array([[0.5, -0.25, 0.1], [0.3, 0.8, -0.6]])
b0 = np.array([0.1, -0.2, 0.05])
W1 = np.array([[0.7], [-0.4], [0.9]])
b1 = np.array([0.3])
x = np.array([[1.5, -0.5], [0.2, 0.4]])

h = np.tanh(x @ W0 + b0)
y = h @ W1 + b1
print("mlp tanh->identity outputs", [repr(v) for v in y.ravel()])
h = np.maximum(x @ W0 + b0, 0)
y = h @ W1 + b1
print("mlp relu->identity outputs", [repr(v) for v in y.ravel()])

# Adam, one step on a scalar with g = 1.
lr, b1_, b2_, eps = 3e-4, 0.9, 0.999, 1e-8
m = (1 - b1_) * 1.0
v = (1 - b2_) * 1.0
mhat = m / (1 - b1_)
vhat = v / (1 - b2_)
print("adam step-1 param from 1.0", repr(1.0 - lr * mhat / (np.sqrt(vhat) + eps)))

# Polyak: target 0, online 1, tau 0.005, three steps.
t = 0.0
for _ in range(3):
    t = 0.005 * 1.0 + 0.995 * t
print("polyak 3 steps", repr(t))
